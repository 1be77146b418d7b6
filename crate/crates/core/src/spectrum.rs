//! Sector-resolved exact spectra with the colour Casimir of every level.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::StateVector;
use crate::lattice::{
    baryon_thirds, conserved_charges, BaryonSector, LatticeOperator, Mapping,
};
use crate::linalg::{CMat, CVec, HermitianEigen, ZERO};

/// Relative energy window inside which levels are treated as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub sector: BaryonSector,
    pub energy: f64,
    /// `⟨Σ_a (Σ_n Q^a_n)²⟩` in the eigenstate.
    pub casimir: f64,
}

/// Eigenpairs of one baryon sector; vectors are columns over `indices`.
#[derive(Debug, Clone)]
pub struct SectorEigen {
    pub sector: BaryonSector,
    pub indices: Vec<usize>,
    pub levels: Vec<Level>,
    pub vectors: CMat,
}

impl SectorEigen {
    /// Embeds eigenvector `k` into the full register.
    pub fn state(&self, k: usize, dim: usize) -> StateVector {
        let mut v = CVec::from_element(dim, ZERO);
        for (row, &idx) in self.indices.iter().enumerate() {
            v[idx] = self.vectors[(row, k)];
        }
        StateVector::new(v)
    }
}

/// Sectors present in the register, ascending.
pub fn sectors(h: &LatticeOperator) -> Result<Vec<BaryonSector>> {
    let mut t = baryon_thirds(&h.model.params)?;
    t.sort_unstable();
    t.dedup();
    Ok(t.into_iter().map(BaryonSector::new).collect())
}

/// Dense diagonalization of one sector. Degenerate eigenspaces are rotated
/// so each vector also has a definite total Casimir, which commutes with H.
pub fn sector_eigen(h: &LatticeOperator, sector: BaryonSector, dense_cap: usize) -> Result<SectorEigen> {
    if h.model.mapping != Mapping::Qu8it {
        return Err(Error::InvalidParams("sector spectra need the qu8it encoding".into()));
    }
    let p = &h.model.params;
    let thirds = baryon_thirds(p)?;
    let indices: Vec<usize> = (0..thirds.len()).filter(|&i| thirds[i] == sector.thirds).collect();
    if indices.is_empty() {
        return Err(Error::EmptySector(sector.to_string()));
    }
    if indices.len() > dense_cap {
        return Err(Error::DimensionCapExceeded {
            dim: indices.len(),
            cap: dense_cap,
        });
    }
    let hs = h.matrix.submatrix(&indices);
    let cs = conserved_charges(p)?.casimir.submatrix(&indices);
    let eig = HermitianEigen::new(&hs);
    let n = indices.len();
    let mut vectors = eig.vectors.clone();
    let mut casimir = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let e0 = eig.values[start];
        let mut end = start + 1;
        while end < n && (eig.values[end] - e0).abs() <= DEGENERACY_TOL * e0.abs().max(1.0) {
            end += 1;
        }
        let block = eig.vectors.columns(start, end - start).into_owned();
        let proj = block.adjoint() * &cs * &block;
        let inner = HermitianEigen::new(&proj);
        let rotated = &block * &inner.vectors;
        for k in 0..end - start {
            vectors.set_column(start + k, &rotated.column(k));
            casimir[start + k] = inner.values[k];
        }
        start = end;
    }
    let levels = eig
        .values
        .iter()
        .zip(&casimir)
        .map(|(&energy, &c)| Level {
            sector,
            energy,
            casimir: c,
        })
        .collect();
    Ok(SectorEigen {
        sector,
        indices,
        levels,
        vectors,
    })
}

/// Levels of one sector, or of the whole register (sector by sector, then
/// merged by energy) when `sector` is `None`.
pub fn spectrum(h: &LatticeOperator, sector: Option<BaryonSector>, dense_cap: usize) -> Result<Vec<Level>> {
    if let Some(s) = sector {
        return Ok(sector_eigen(h, s, dense_cap)?.levels);
    }
    if h.dim() > dense_cap {
        return Err(Error::DimensionCapExceeded {
            dim: h.dim(),
            cap: dense_cap,
        });
    }
    let mut all = Vec::with_capacity(h.dim());
    for s in sectors(h)? {
        all.extend(sector_eigen(h, s, dense_cap)?.levels);
    }
    all.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.sector.cmp(&b.sector)));
    Ok(all)
}

/// Lowest eigenstate of a sector, embedded in the full register.
pub fn ground_state(h: &LatticeOperator, sector: BaryonSector, dense_cap: usize) -> Result<StateVector> {
    Ok(sector_eigen(h, sector, dense_cap)?.state(0, h.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_qu8it_hamiltonian, LatticeParams};
    use crate::sparse::DEFAULT_DENSE_CAP;

    #[test]
    fn full_spectrum_matches_sector_union() {
        let p = LatticeParams::uniform(1, 1, 0.7, 1.1, 0.0);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        let all = spectrum(&h, None, DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(all.len(), 64);
        let dense = crate::linalg::eigvalsh(&h.to_dense(64).unwrap());
        for (a, b) in all.iter().zip(&dense) {
            assert!((a.energy - b).abs() < 1e-10);
        }
    }

    #[test]
    fn casimir_values_are_definite() {
        let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 0.0);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        let lv = spectrum(&h, Some(BaryonSector::new(0)), 64).unwrap();
        assert_eq!(lv.len(), 20);
        for l in &lv {
            // Singlets carry 0, octets 3.
            assert!(l.casimir.abs() < 1e-9 || (l.casimir - 3.0).abs() < 1e-9, "{l:?}");
        }
    }

    #[test]
    fn ground_state_is_normalized_eigenvector() {
        let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 1.0);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        let gs = ground_state(&h, BaryonSector::new(0), 64).unwrap();
        assert!((gs.norm() - 1.0).abs() < 1e-12);
        let hv = h.matrix.matvec(&gs.amplitudes);
        let e = gs.amplitudes.dotc(&hv).re;
        assert!((hv - gs.amplitudes.scale(e)).norm() < 1e-10);
    }

    #[test]
    fn cap_is_enforced() {
        let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 1.0);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        assert!(matches!(
            spectrum(&h, None, 32),
            Err(Error::DimensionCapExceeded { dim: 64, cap: 32 })
        ));
        assert!(spectrum(&h, Some(BaryonSector::new(0)), 32).is_ok());
    }
}
