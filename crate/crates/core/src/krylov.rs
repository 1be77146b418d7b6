//! Lanczos extremal eigenvalues and Krylov propagation for sparse Hermitian
//! operators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64, ZERO};
use crate::sparse::CsrMatrix;

/// Default Krylov subspace size for propagation.
pub const KRYLOV_DIM: usize = 30;

fn dot(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &CVec) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Deterministic, non-degenerate starting vector.
fn start_vector(dim: usize) -> CVec {
    let phi = 0.618_033_988_749_894_9_f64;
    let mut v = CVec::from_fn(dim, |i, _| {
        let x = ((i as f64 + 1.0) * phi).fract();
        C64::new(0.5 + x, 0.25 * ((i as f64 + 1.0) * phi * phi).fract())
    });
    let n = norm(&v);
    v /= C64::new(n, 0.0);
    v
}

struct LanczosRun {
    basis: Vec<CVec>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

/// Lanczos with full reorthogonalization; stops early on invariant subspaces.
fn lanczos(h: &CsrMatrix, v0: &CVec, steps: usize) -> LanczosRun {
    let mut basis: Vec<CVec> = vec![v0.clone()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut w = CVec::zeros(h.dim);
    for j in 0..steps {
        h.matvec_into(basis[j].as_slice(), w.as_mut_slice());
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let p = dot(q, &w);
                w.axpy(-p, q, C64::new(1.0, 0.0));
            }
        }
        let b = norm(&w);
        if j + 1 == steps || b < 1e-12 {
            beta.push(b);
            break;
        }
        beta.push(b);
        basis.push(&w / C64::new(b, 0.0));
    }
    LanczosRun { basis, alpha, beta }
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    t
}

/// Lowest `k` eigenvalues of a sparse Hermitian matrix.
pub fn lowest_eigenvalues(h: &CsrMatrix, k: usize, tol: f64) -> Result<Vec<f64>> {
    if k == 0 || k > h.dim {
        return Err(Error::InvalidParams(format!(
            "requested {k} eigenvalues of a {}-dim operator",
            h.dim
        )));
    }
    let mut steps = (4 * k + 40).min(h.dim);
    let v0 = start_vector(h.dim);
    let mut previous: Option<Vec<f64>> = None;
    loop {
        let run = lanczos(h, &v0, steps);
        let t = tridiagonal(&run.alpha, &run.beta);
        let mut ev: Vec<f64> = SymmetricEigen::new(t).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev.truncate(k);
        let exhausted = run.alpha.len() < steps || steps == h.dim;
        if let Some(prev) = &previous {
            let delta = prev
                .iter()
                .zip(&ev)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if delta <= tol && ev.len() == k {
                return Ok(ev);
            }
        }
        if exhausted {
            if ev.len() < k {
                return Err(Error::InvalidParams(
                    "Krylov space exhausted before k eigenvalues were found".into(),
                ));
            }
            return Ok(ev);
        }
        previous = Some(ev);
        steps = (steps * 2).min(h.dim);
    }
}

/// `exp(-i H t) psi` via restarted Lanczos with adaptive substeps.
pub fn expm_apply(h: &CsrMatrix, psi: &CVec, t: f64, krylov_dim: usize, tol: f64) -> CVec {
    let mut out = psi.clone();
    let mut remaining = t;
    let mut tau = t;
    while remaining.abs() > 0.0 {
        let nrm = norm(&out);
        if nrm == 0.0 {
            return out;
        }
        let v0 = &out / C64::new(nrm, 0.0);
        let run = lanczos(h, &v0, krylov_dim.min(h.dim));
        let m = run.alpha.len();
        let eig = SymmetricEigen::new(tridiagonal(&run.alpha, &run.beta));
        let beta_last = *run.beta.last().unwrap_or(&0.0);
        loop {
            let step = if tau.abs() > remaining.abs() { remaining } else { tau };
            let coeffs: DVector<C64> = {
                let mut c = DVector::from_element(m, ZERO);
                for k in 0..m {
                    let phase = C64::new(0.0, -eig.eigenvalues[k] * step).exp();
                    let w = eig.eigenvectors[(0, k)] * phase;
                    for i in 0..m {
                        c[i] += w * eig.eigenvectors[(i, k)];
                    }
                }
                c
            };
            let err = beta_last * coeffs[m - 1].norm();
            let invariant = beta_last < 1e-12;
            if invariant || err <= tol || step.abs() < 1e-8 * t.abs().max(1.0) {
                let mut next = CVec::zeros(h.dim);
                for (i, q) in run.basis.iter().take(m).enumerate() {
                    next.axpy(coeffs[i] * nrm, q, C64::new(1.0, 0.0));
                }
                out = next;
                remaining -= step;
                if err <= tol * 0.1 {
                    tau = step * 1.5;
                }
                break;
            }
            tau = step * 0.5;
        }
    }
    out
}
