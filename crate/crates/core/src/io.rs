//! File formats: JSON manifests, CSV tables and text triplet files.
//!
//! Every manifest carries a `schema` string `qu8it.<kind>/<version>`. CSV
//! and triplet floats are written with `{:.16e}` (17 significant digits) so
//! identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::ObservableRecord;
use crate::lattice::{BlockTag, LatticeOperator, LatticeParams, Mapping};
use crate::linalg::C64;
use crate::sparse::CsrMatrix;
use crate::spectrum::Level;

/// Current version of every schema below.
pub const SCHEMA_VERSION: u32 = 1;

pub fn schema(kind: &str) -> String {
    format!("qu8it.{kind}/{SCHEMA_VERSION}")
}

/// Fixed 17-significant-digit float formatting.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub tag: BlockTag,
    pub nnz: usize,
    /// Identity-proportional constant carried by the block.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorManifest {
    pub schema: String,
    pub params: LatticeParams,
    pub mapping: Mapping,
    pub dim: usize,
    pub nnz: usize,
    pub blocks: Vec<BlockEntry>,
    /// Triplet file name, relative to the manifest.
    pub triplets: String,
}

/// Writes `row col re im` lines, sorted by row then column.
pub fn write_triplets<W: Write>(out: W, m: &CsrMatrix) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "# {} row col re im", schema("triplets"))?;
    writeln!(w, "# dim {}", m.dim)?;
    for (r, c, v) in m.triplets() {
        writeln!(w, "{r} {c} {} {}", fmt_float(v.re), fmt_float(v.im))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_triplets<R: std::io::Read>(input: R) -> Result<CsrMatrix> {
    let bad = |line: usize, why: &str| Error::Io(format!("triplet line {line}: {why}"));
    let mut dim = None;
    let mut trip = Vec::new();
    for (k, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("# dim ") {
            dim = Some(rest.trim().parse::<usize>().map_err(|_| bad(k + 1, "bad dim"))?);
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad(k + 1, "expected 4 fields"));
        }
        let r = f[0].parse::<usize>().map_err(|_| bad(k + 1, "row"))?;
        let c = f[1].parse::<usize>().map_err(|_| bad(k + 1, "col"))?;
        let re = f[2].parse::<f64>().map_err(|_| bad(k + 1, "re"))?;
        let im = f[3].parse::<f64>().map_err(|_| bad(k + 1, "im"))?;
        trip.push((r, c, C64::new(re, im)));
    }
    let dim = dim.ok_or_else(|| Error::Io("triplet file has no '# dim' header".into()))?;
    if let Some(&(r, c, _)) = trip.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
        return Err(Error::Io(format!("entry ({r}, {c}) outside dim {dim}")));
    }
    Ok(CsrMatrix::from_triplets(dim, trip))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

/// Writes `<stem>.json` and `<stem>.triplets.txt` into `dir`.
pub fn export_operator(dir: &Path, stem: &str, op: &LatticeOperator) -> Result<OperatorManifest> {
    fs::create_dir_all(dir)?;
    let offsets: BTreeMap<BlockTag, f64> = op.model.offset_report();
    let trip_name = format!("{stem}.triplets.txt");
    write_triplets(fs::File::create(dir.join(&trip_name))?, &op.matrix)?;
    let manifest = OperatorManifest {
        schema: schema("operator"),
        params: op.model.params.clone(),
        mapping: op.model.mapping,
        dim: op.dim(),
        nnz: op.matrix.nnz(),
        blocks: op
            .blocks
            .iter()
            .map(|(tag, m)| BlockEntry {
                tag: *tag,
                nnz: m.nnz(),
                offset: offsets.get(tag).copied().unwrap_or(0.0),
            })
            .collect(),
        triplets: trip_name,
    };
    write_json(&dir.join(format!("{stem}.json")), &manifest)?;
    Ok(manifest)
}

/// `index,sector,energy,casimir` rows.
pub fn spectrum_csv(levels: &[Level]) -> String {
    let mut s = String::from("index,sector,energy,casimir\n");
    for (k, l) in levels.iter().enumerate() {
        let _ = writeln!(s, "{k},{},{},{}", l.sector, fmt_float(l.energy), fmt_float(l.casimir));
    }
    s
}

/// `step,t,norm,energy,baryon,casimir,electric,fidelity,baryon_site_<n>...`;
/// the fidelity column is empty without a reference trajectory.
pub fn trajectory_csv(records: &[ObservableRecord]) -> String {
    let sites = records.first().map(|r| r.site_baryon.len()).unwrap_or(0);
    let mut s = String::from("step,t,norm,energy,baryon,casimir,electric,fidelity");
    for n in 0..sites {
        let _ = write!(s, ",baryon_site_{n}");
    }
    s.push('\n');
    for r in records {
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.step,
            fmt_float(r.t),
            fmt_float(r.norm),
            fmt_float(r.energy),
            fmt_float(r.baryon),
            fmt_float(r.casimir),
            fmt_float(r.electric),
            r.fidelity.map(fmt_float).unwrap_or_default()
        );
        for b in &r.site_baryon {
            let _ = write!(s, ",{}", fmt_float(*b));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_qu8it_hamiltonian;

    #[test]
    fn float_format_is_fixed_width_mantissa() {
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_float(-0.1), "-1.0000000000000001e-1");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn triplets_round_trip_exactly() {
        let p = LatticeParams::uniform(1, 1, 0.3, 1.7, 0.9);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        let mut buf = Vec::new();
        write_triplets(&mut buf, &h.matrix).unwrap();
        let back = read_triplets(buf.as_slice()).unwrap();
        assert_eq!(back.dim, 64);
        assert_eq!(back.max_abs_diff(&h.matrix).unwrap(), 0.0);
    }

    #[test]
    fn triplet_errors() {
        assert!(read_triplets("0 0 1 0\n".as_bytes()).is_err());
        assert!(read_triplets("# dim 2\n0 5 1 0\n".as_bytes()).is_err());
        assert!(read_triplets("# dim 2\n0 0 1\n".as_bytes()).is_err());
    }

    #[test]
    fn export_writes_manifest_and_triplets() {
        let dir = std::env::temp_dir().join(format!("qu8it-io-{}", std::process::id()));
        let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 0.0);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        let m = export_operator(&dir, "h", &h).unwrap();
        assert_eq!(m.schema, "qu8it.operator/1");
        let text = fs::read_to_string(dir.join("h.json")).unwrap();
        let back: OperatorManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(dir.join(&m.triplets).exists());
        fs::remove_dir_all(&dir).unwrap();
    }
}
