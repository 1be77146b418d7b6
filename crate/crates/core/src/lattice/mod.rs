//! Register Hamiltonians for `N_f` flavours on `L` spatial sites (`2L`
//! staggered sites, open boundaries), in the qu8it and qubit encodings.
//!
//! Both encodings are stored symbolically as blocks of commuting groups of
//! product terms, then assembled into a sparse matrix on demand. Slot 0 is
//! the most significant tensor factor.

mod charges;
mod qu8it;
mod qubit;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64, ZERO};
use crate::sparse::CsrMatrix;

pub use charges::{
    baryon_thirds, block_spectrum, conserved_charges, qubit_symmetry_keys, qu8it_symmetry_keys,
    sector_indices, sector_project, BaryonSector, ConservedCharges, SectorProjection,
};
pub use qu8it::{build_qu8it_hamiltonian, build_qu8it_model, pair_charge_terms, Qu8itLocalOps};
pub use qubit::{build_qubit_hamiltonian, build_qubit_model, jw_product, QubitMode};

/// Largest register dimension the sparse assembler accepts.
pub const MAX_SPARSE_DIM: usize = 1 << 21;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    /// Number of spatial sites; the chain has `2L` staggered sites.
    #[serde(rename = "L")]
    pub l: usize,
    pub nf: usize,
    /// One mass per flavour.
    pub masses: Vec<f64>,
    pub g: f64,
    pub h: f64,
    pub include_h: bool,
}

impl LatticeParams {
    /// Equal masses for every flavour; the h-term is included.
    pub fn uniform(nf: usize, l: usize, mass: f64, g: f64, h: f64) -> Self {
        LatticeParams {
            l,
            nf,
            masses: vec![mass; nf],
            g,
            h,
            include_h: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if self.l == 0 {
            return bad("L must be at least 1".into());
        }
        if self.nf == 0 {
            return bad("N_f must be at least 1".into());
        }
        if self.masses.len() != self.nf {
            return bad(format!(
                "expected {} masses, found {}",
                self.nf,
                self.masses.len()
            ));
        }
        if self.masses.iter().any(|m| !m.is_finite()) {
            return bad("masses must be finite".into());
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return bad("g must be finite and non-negative".into());
        }
        if !(self.h.is_finite() && self.h >= 0.0) {
            return bad("h must be finite and non-negative".into());
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        2 * self.l
    }

    pub fn qu8it_count(&self) -> usize {
        2 * self.nf * self.l
    }

    pub fn qubit_count(&self) -> usize {
        6 * self.nf * self.l
    }

    /// Qu8it slot of staggered site `n`, flavour `f`.
    pub fn slot(&self, n: usize, f: usize) -> usize {
        n * self.nf + f
    }

    /// Staggered site of a qu8it slot.
    pub fn site_of(&self, slot: usize) -> usize {
        slot / self.nf
    }

    pub fn is_anti_slot(&self, slot: usize) -> bool {
        self.site_of(slot) % 2 == 1
    }

    /// `8^(2 N_f L)`, or `None` on overflow.
    pub fn dim(&self) -> Option<usize> {
        8usize.checked_pow(self.qu8it_count() as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockTag {
    Kinetic,
    Mass,
    Electric,
    H,
}

impl BlockTag {
    pub const ALL: [BlockTag; 4] = [BlockTag::Kinetic, BlockTag::Mass, BlockTag::Electric, BlockTag::H];

    pub fn name(self) -> &'static str {
        match self {
            BlockTag::Kinetic => "kinetic",
            BlockTag::Mass => "mass",
            BlockTag::Electric => "electric",
            BlockTag::H => "h",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mapping {
    Qu8it,
    Qubit,
}

impl Mapping {
    pub fn local_dim(self) -> usize {
        match self {
            Mapping::Qu8it => 8,
            Mapping::Qubit => 2,
        }
    }
}

/// A named single-slot matrix.
#[derive(Debug, Clone)]
pub struct LocalOp {
    pub name: String,
    pub matrix: CMat,
}

impl LocalOp {
    pub fn new(name: impl Into<String>, matrix: CMat) -> Arc<Self> {
        Arc::new(LocalOp {
            name: name.into(),
            matrix,
        })
    }

    pub fn is_diagonal(&self) -> bool {
        let m = &self.matrix;
        (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] == ZERO))
    }

    /// True for a diagonal matrix with entries in `{+1, -1}`.
    pub fn is_sign_diagonal(&self) -> bool {
        self.is_diagonal()
            && (0..self.matrix.nrows()).all(|i| {
                let v = self.matrix[(i, i)];
                v.im == 0.0 && v.re.abs() == 1.0
            })
    }

    /// Column-wise nonzeros: for each input state, the `(output, value)` list.
    fn columns(&self) -> Vec<Vec<(usize, C64)>> {
        let m = &self.matrix;
        (0..m.ncols())
            .map(|j| {
                (0..m.nrows())
                    .filter(|&i| m[(i, j)] != ZERO)
                    .map(|i| (i, m[(i, j)]))
                    .collect()
            })
            .collect()
    }
}

/// `coeff · ⊗_slots factor`; slots without a factor carry the identity.
#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub coeff: f64,
    /// Sorted by slot, at most one factor per slot.
    pub factors: Vec<(usize, Arc<LocalOp>)>,
}

impl ProductTerm {
    pub fn new(coeff: f64, mut factors: Vec<(usize, Arc<LocalOp>)>) -> Self {
        factors.sort_by_key(|(s, _)| *s);
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        ProductTerm { coeff, factors }
    }

    pub fn identity(coeff: f64) -> Self {
        ProductTerm {
            coeff,
            factors: Vec::new(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|(_, op)| op.is_diagonal())
    }

    pub fn slots(&self) -> Vec<usize> {
        self.factors.iter().map(|(s, _)| *s).collect()
    }

    /// Slots whose factor is not a `±1` diagonal.
    pub fn core_slots(&self) -> Vec<usize> {
        self.factors
            .iter()
            .filter(|(_, op)| !op.is_sign_diagonal())
            .map(|(s, _)| *s)
            .collect()
    }

    /// True when the term acts non-trivially on two or more slots, ignoring
    /// `±1` diagonal string factors.
    pub fn is_entangling(&self) -> bool {
        self.core_slots().len() >= 2
    }

    fn push_triplets(
        &self,
        n_slots: usize,
        local_dim: usize,
        out: &mut Vec<(usize, usize, C64)>,
    ) {
        let dim = local_dim.pow(n_slots as u32);
        let factors: Vec<(usize, Vec<Vec<(usize, C64)>>)> = self
            .factors
            .iter()
            .map(|(s, op)| (local_dim.pow((n_slots - 1 - s) as u32), op.columns()))
            .collect();
        let coeff = C64::new(self.coeff, 0.0);
        let mut cur: Vec<(usize, C64)> = Vec::new();
        let mut next: Vec<(usize, C64)> = Vec::new();
        for col in 0..dim {
            cur.clear();
            cur.push((col, coeff));
            for (stride, cols) in &factors {
                let digit = (col / stride) % local_dim;
                next.clear();
                for &(row, v) in &cur {
                    let base = row - digit * stride;
                    for &(i, a) in &cols[digit] {
                        next.push((base + i * stride, v * a));
                    }
                }
                std::mem::swap(&mut cur, &mut next);
                if cur.is_empty() {
                    break;
                }
            }
            out.extend(cur.iter().map(|&(r, v)| (r, col, v)));
        }
    }

    /// Dense matrix of the term restricted to `slots` (identity elsewhere is
    /// dropped). All factor slots must be listed.
    pub fn local_matrix(&self, slots: &[usize], local_dim: usize) -> CMat {
        let mut m = CMat::identity(1, 1);
        for s in slots {
            let f = self.factors.iter().find(|(fs, _)| fs == s);
            m = match f {
                Some((_, op)) => crate::linalg::kron(&m, &op.matrix),
                None => crate::linalg::kron(&m, &CMat::identity(local_dim, local_dim)),
            };
        }
        m * C64::new(self.coeff, 0.0)
    }
}

impl fmt::Display for ProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.coeff)?;
        if self.factors.is_empty() {
            return write!(f, " I");
        }
        for (s, op) in &self.factors {
            write!(f, " {}[{}]", op.name, s)?;
        }
        Ok(())
    }
}

/// Mutually commuting terms, exponentiated together in a Trotter step.
#[derive(Debug, Clone)]
pub struct TermGroup {
    pub label: String,
    pub terms: Vec<ProductTerm>,
}

#[derive(Debug, Clone)]
pub struct Block {
    pub tag: BlockTag,
    pub groups: Vec<TermGroup>,
}

impl Block {
    pub fn terms(&self) -> impl Iterator<Item = &ProductTerm> {
        self.groups.iter().flat_map(|g| g.terms.iter())
    }
}

/// Symbolic Hamiltonian: tagged blocks of term groups.
#[derive(Debug, Clone)]
pub struct LatticeModel {
    pub params: LatticeParams,
    pub mapping: Mapping,
    pub n_slots: usize,
    pub blocks: Vec<Block>,
}

impl LatticeModel {
    pub fn local_dim(&self) -> usize {
        self.mapping.local_dim()
    }

    pub fn dim(&self) -> Option<usize> {
        self.local_dim().checked_pow(self.n_slots as u32)
    }

    pub fn block(&self, tag: BlockTag) -> Option<&Block> {
        self.blocks.iter().find(|b| b.tag == tag)
    }

    pub fn terms(&self) -> impl Iterator<Item = &ProductTerm> {
        self.blocks.iter().flat_map(|b| b.terms())
    }

    pub fn checked_dim(&self) -> Result<usize> {
        match self.dim() {
            Some(d) if d <= MAX_SPARSE_DIM => Ok(d),
            d => Err(Error::DimensionCapExceeded {
                dim: d.unwrap_or(usize::MAX),
                cap: MAX_SPARSE_DIM,
            }),
        }
    }

    /// Sparse matrix of a set of terms on this register.
    pub fn assemble_terms<'a>(
        &self,
        terms: impl IntoIterator<Item = &'a ProductTerm>,
    ) -> Result<CsrMatrix> {
        let dim = self.checked_dim()?;
        let mut trip = Vec::new();
        for t in terms {
            t.push_triplets(self.n_slots, self.local_dim(), &mut trip);
        }
        Ok(CsrMatrix::from_triplets(dim, trip))
    }

    /// Identity-proportional constants per block, for aligning spectra.
    pub fn offset_report(&self) -> BTreeMap<BlockTag, f64> {
        self.blocks
            .iter()
            .map(|b| {
                let c = b.terms().filter(|t| t.factors.is_empty()).map(|t| t.coeff).sum();
                (b.tag, c)
            })
            .collect()
    }
}

/// Assembled register Hamiltonian with its per-block matrices.
#[derive(Debug, Clone)]
pub struct LatticeOperator {
    pub model: LatticeModel,
    pub matrix: CsrMatrix,
    pub blocks: Vec<(BlockTag, CsrMatrix)>,
}

/// Hermiticity tolerance for assembled operators.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl LatticeOperator {
    pub fn assemble(model: LatticeModel) -> Result<Self> {
        let dim = model.checked_dim()?;
        let mut blocks = Vec::new();
        let mut total = CsrMatrix::zeros(dim);
        for b in &model.blocks {
            let m = model.assemble_terms(b.terms())?;
            let r = m.hermiticity_residual();
            if r > HERMITIAN_TOL {
                return Err(Error::NonHermitianInput {
                    residual: r,
                    tolerance: HERMITIAN_TOL,
                });
            }
            total = total.add(&m)?;
            blocks.push((b.tag, m));
        }
        Ok(LatticeOperator {
            model,
            matrix: total,
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn block(&self, tag: BlockTag) -> Option<&CsrMatrix> {
        self.blocks.iter().find(|(t, _)| *t == tag).map(|(_, m)| m)
    }

    pub fn to_dense(&self, cap: usize) -> Result<CMat> {
        self.matrix.to_dense(cap)
    }
}

/// Constant to add to qu8it eigenvalues to align them with the qubit
/// encoding. Both mass terms count occupied quark and anti-quark modes, so
/// the shift vanishes.
pub fn mass_shift(_params: &LatticeParams) -> f64 {
    0.0
}
