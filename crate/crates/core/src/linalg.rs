//! Dense complex matrix helpers shared by the algebra and lattice modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Kronecker product with `a` acting on the more significant index.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a CMat>) -> CMat {
    factors
        .into_iter()
        .fold(CMat::identity(1, 1), |acc, f| kron(&acc, f))
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_residual(m: &CMat) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn ensure_hermitian(m: &CMat, tolerance: f64) -> Result<()> {
    let residual = hermiticity_residual(m);
    if residual > tolerance {
        return Err(Error::NonHermitianInput {
            residual,
            tolerance,
        });
    }
    Ok(())
}

pub fn diag(entries: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(
        entries.len(),
        entries.iter().map(|&x| c(x)),
    ))
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

/// Sorted eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn new(m: &CMat) -> Self {
        let n = m.nrows();
        let scale = max_abs(m).max(1.0);
        let real = m.iter().all(|z| z.im.abs() <= 1e-15 * scale);
        let (values, vectors): (Vec<f64>, CMat) = if real {
            let re = m.map(|z| z.re);
            let sym = (&re + re.transpose()) * 0.5;
            let eig = sym.symmetric_eigen();
            (
                eig.eigenvalues.iter().copied().collect(),
                eig.eigenvectors.map(c),
            )
        } else {
            let herm = (m + m.adjoint()).scale(0.5);
            let eig = herm.symmetric_eigen();
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted_values = order.iter().map(|&k| values[k]).collect();
        let mut sorted_vectors = CMat::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            sorted_vectors.set_column(dst, &vectors.column(src));
        }
        HermitianEigen {
            values: sorted_values,
            vectors: sorted_vectors,
        }
    }

    /// `exp(-i H t)` assembled from the decomposition.
    pub fn propagator(&self, t: f64) -> CMat {
        let phases = CVec::from_iterator(
            self.values.len(),
            self.values.iter().map(|&e| (-I * e * t).exp()),
        );
        let scaled = CMat::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * phases[j]
        });
        scaled * self.vectors.adjoint()
    }

    pub fn vector(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }
}

pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    HermitianEigen::new(m).values
}

/// `exp(-i M t)` for Hermitian `M`.
pub fn expm_hermitian(m: &CMat, t: f64) -> CMat {
    HermitianEigen::new(m).propagator(t)
}

/// Numerical rank from singular values above `tol` times the largest.
pub fn real_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top.max(1.0)).count()
}

pub fn expectation(op: &CMat, psi: &CVec) -> C64 {
    psi.dotc(&(op * psi))
}
