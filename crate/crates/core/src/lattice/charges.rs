//! Conserved charges, baryon-number sectors and symmetry-blocked spectra.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, CMat};
use crate::qu8it::{build_qu8it_operators, Qu8itBasis, D};
use crate::sparse::CsrMatrix;
use crate::su3::gell_mann;

use super::qu8it::Qu8itLocalOps;
use super::{LatticeModel, LatticeParams, Mapping, ProductTerm};

/// Net baryon number in units of 1/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BaryonSector {
    pub thirds: i64,
}

impl BaryonSector {
    pub fn new(thirds: i64) -> Self {
        BaryonSector { thirds }
    }

    pub fn value(&self) -> f64 {
        self.thirds as f64 / 3.0
    }
}

impl fmt::Display for BaryonSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.thirds % 3 == 0 {
            write!(f, "{}", self.thirds / 3)
        } else {
            write!(f, "{}/3", self.thirds)
        }
    }
}

impl FromStr for BaryonSector {
    type Err = Error;

    /// Accepts `0`, `1`, `-2/3`, `B=1/3` and decimals within 1e-9 of a third.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot parse baryon number '{s}'"));
        let t = s.trim();
        let t = t.strip_prefix("B=").unwrap_or(t).trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => Ok(BaryonSector::new(3 * num)),
                3 => Ok(BaryonSector::new(num)),
                _ => Err(bad()),
            };
        }
        let v: f64 = t.parse().map_err(|_| bad())?;
        let thirds = (3.0 * v).round();
        if (3.0 * v - thirds).abs() > 1e-9 {
            return Err(bad());
        }
        Ok(BaryonSector::new(thirds as i64))
    }
}

impl From<BaryonSector> for String {
    fn from(b: BaryonSector) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BaryonSector {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Per basis state of the qu8it register, `3 B_total` with
/// `B_total = Σ_even B̃_n − Σ_odd B̃_n` (odd slots count anti-quarks).
pub fn baryon_thirds(p: &LatticeParams) -> Result<Vec<i64>> {
    let dim = shell(p).checked_dim()?;
    let occ = Qu8itBasis::default().occupation;
    let n = p.qu8it_count();
    Ok((0..dim)
        .map(|idx| {
            let mut rest = idx;
            let mut total = 0i64;
            for slot in (0..n).rev() {
                let o = occ[rest % D] as i64;
                rest /= D;
                total += if p.is_anti_slot(slot) { -o } else { o };
            }
            total
        })
        .collect())
}

fn shell(p: &LatticeParams) -> LatticeModel {
    LatticeModel {
        params: p.clone(),
        mapping: Mapping::Qu8it,
        n_slots: p.qu8it_count(),
        blocks: Vec::new(),
    }
}

#[derive(Debug, Clone)]
pub struct ConservedCharges {
    pub baryon: CsrMatrix,
    /// `Σ_a (Σ_m Q_m^a)^2`, quark charges on even sites and anti-quark
    /// charges on odd sites.
    pub casimir: CsrMatrix,
    pub q3: CsrMatrix,
    pub q8: CsrMatrix,
}

/// Total charges of the qu8it register.
pub fn conserved_charges(p: &LatticeParams) -> Result<ConservedCharges> {
    p.validate()?;
    let model = shell(p);
    let ops = Qu8itLocalOps::new();
    let n = p.qu8it_count();
    let baryon: Vec<f64> = baryon_thirds(p)?.iter().map(|&t| t as f64 / 3.0).collect();
    let charge = |slot: usize, a: usize| {
        if p.is_anti_slot(slot) {
            ops.qbar[a].clone()
        } else {
            ops.q[a].clone()
        }
    };
    let cartan = |a: usize| -> Result<CsrMatrix> {
        let terms: Vec<ProductTerm> = (0..n)
            .map(|s| ProductTerm::new(1.0, vec![(s, charge(s, a))]))
            .collect();
        model.assemble_terms(&terms)
    };
    let mut cas_terms: Vec<ProductTerm> = (0..n)
        .map(|s| ProductTerm::new(1.0, vec![(s, ops.casimir.clone())]))
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            for a in 0..8 {
                cas_terms.push(ProductTerm::new(2.0, vec![(i, charge(i, a)), (j, charge(j, a))]));
            }
        }
    }
    Ok(ConservedCharges {
        baryon: CsrMatrix::from_diagonal(&baryon),
        casimir: model.assemble_terms(&cas_terms)?,
        q3: cartan(2)?,
        q8: cartan(7)?,
    })
}

/// Basis indices of a baryon-number sector, ascending.
pub fn sector_indices(p: &LatticeParams, sector: BaryonSector) -> Result<Vec<usize>> {
    let idx: Vec<usize> = baryon_thirds(p)?
        .iter()
        .enumerate()
        .filter(|(_, &t)| t == sector.thirds)
        .map(|(i, _)| i)
        .collect();
    if idx.is_empty() {
        return Err(Error::EmptySector(format!("B={sector}")));
    }
    Ok(idx)
}

#[derive(Debug, Clone)]
pub struct SectorProjection {
    pub sector: BaryonSector,
    pub indices: Vec<usize>,
    pub matrix: CMat,
    /// Largest matrix element coupling the sector to its complement.
    pub off_block: f64,
}

/// Restriction of a qu8it-register operator to one baryon-number sector.
pub fn sector_project(
    op: &CsrMatrix,
    p: &LatticeParams,
    sector: BaryonSector,
) -> Result<SectorProjection> {
    let indices = sector_indices(p, sector)?;
    if op.dim != baryon_dim(p) {
        return Err(Error::DimensionMismatch {
            expected: baryon_dim(p),
            found: op.dim,
        });
    }
    Ok(SectorProjection {
        sector,
        matrix: op.submatrix(&indices),
        off_block: op.off_block_norm(&indices),
        indices,
    })
}

fn baryon_dim(p: &LatticeParams) -> usize {
    p.dim().unwrap_or(usize::MAX)
}

/// Conserved diagonal labels `(3B, 2Q^3, 2√3 Q^8)` of every qu8it basis state.
pub fn qu8it_symmetry_keys(p: &LatticeParams) -> Result<Vec<[i64; 3]>> {
    let ops = build_qu8it_operators(&gell_mann());
    let s3 = 2.0 * 3f64.sqrt();
    let local = |anti: bool| -> Vec<[i64; 2]> {
        let q = ops.charges(anti);
        (0..D)
            .map(|k| [(2.0 * q[2][(k, k)].re).round() as i64, (s3 * q[7][(k, k)].re).round() as i64])
            .collect()
    };
    let (quark, anti) = (local(false), local(true));
    let b = baryon_thirds(p)?;
    let n = p.qu8it_count();
    Ok(b.iter()
        .enumerate()
        .map(|(idx, &b3)| {
            let mut rest = idx;
            let (mut q3, mut q8) = (0, 0);
            for slot in (0..n).rev() {
                let k = rest % D;
                rest /= D;
                let v = if p.is_anti_slot(slot) { anti[k] } else { quark[k] };
                q3 += v[0];
                q8 += v[1];
            }
            [b3, q3, q8]
        })
        .collect())
}

/// Conserved diagonal labels `(quark count, 2Q^3, 2√3 Q^8)` of every qubit
/// basis state (local state 0 is an occupied mode).
pub fn qubit_symmetry_keys(p: &LatticeParams) -> Result<Vec<[i64; 3]>> {
    let n = p.qubit_count();
    let dim = 1usize
        .checked_shl(n as u32)
        .filter(|&d| d <= super::MAX_SPARSE_DIM)
        .ok_or(Error::DimensionCapExceeded {
            dim: usize::MAX,
            cap: super::MAX_SPARSE_DIM,
        })?;
    const Q3: [i64; 3] = [1, -1, 0];
    const Q8: [i64; 3] = [1, 1, -2];
    Ok((0..dim)
        .map(|idx| {
            let mut key = [0i64; 3];
            for q in 0..n {
                let occupied = (idx >> (n - 1 - q)) & 1 == 0;
                if occupied {
                    let col = q % 3;
                    key[0] += 1;
                    key[1] += Q3[col];
                    key[2] += Q8[col];
                }
            }
            key
        })
        .collect())
}

/// Full spectrum of a Hermitian operator that is block diagonal in the given
/// basis-state labels; each block is diagonalized densely.
pub fn block_spectrum<K: Ord + Clone>(m: &CsrMatrix, keys: &[K]) -> Result<Vec<f64>> {
    if keys.len() != m.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            found: keys.len(),
        });
    }
    let leak = m
        .triplets()
        .filter(|&(r, c, _)| keys[r] != keys[c])
        .map(|(_, _, v)| v.norm())
        .fold(0.0, f64::max);
    if leak > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "operator couples different symmetry labels (max element {leak:e})"
        )));
    }
    let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        groups.entry(k.clone()).or_default().push(i);
    }
    let mut out = Vec::with_capacity(m.dim);
    for idx in groups.values() {
        out.extend(eigvalsh(&m.submatrix(idx)));
    }
    out.sort_by(|a, b| a.total_cmp(b));
    Ok(out)
}
