//! SU(3) generators in the fundamental and anti-fundamental representations.
//!
//! Matrices are built from integer and `1/sqrt(3)` literals in Gell-Mann's
//! convention. Structure constants are derived once from the commutators,
//! `f^{abc} = -2i Tr([T^a, T^b] T^c)`.

use crate::linalg::{c, commutator, max_abs_diff, trace, CMat, C64, I, ZERO};

/// Number of SU(3) generators.
pub const N_GEN: usize = 8;

#[derive(Debug, Clone)]
pub struct GellMannSet {
    /// `λ^1 .. λ^8` (index 0 holds `λ^1`).
    pub lambda: Vec<CMat>,
    /// `T^a = λ^a / 2`.
    pub t: Vec<CMat>,
    /// `T̄^a = (-T^a)^*`.
    pub tbar: Vec<CMat>,
    /// `f[a][b][c]`, zero-based.
    pub f: [[[f64; N_GEN]; N_GEN]; N_GEN],
}

fn m3(entries: [[C64; 3]; 3]) -> CMat {
    CMat::from_fn(3, 3, |i, j| entries[i][j])
}

fn gell_mann_matrices() -> Vec<CMat> {
    let o = ZERO;
    let l = c(1.0);
    let s3 = 1.0 / 3f64.sqrt();
    vec![
        m3([[o, l, o], [l, o, o], [o, o, o]]),
        m3([[o, -I, o], [I, o, o], [o, o, o]]),
        m3([[l, o, o], [o, -l, o], [o, o, o]]),
        m3([[o, o, l], [o, o, o], [l, o, o]]),
        m3([[o, o, -I], [o, o, o], [I, o, o]]),
        m3([[o, o, o], [o, o, l], [o, l, o]]),
        m3([[o, o, o], [o, o, -I], [o, I, o]]),
        m3([[c(s3), o, o], [o, c(s3), o], [o, o, c(-2.0 * s3)]]),
    ]
}

/// Builds the generator set and caches the structure constants.
pub fn gell_mann() -> GellMannSet {
    let lambda = gell_mann_matrices();
    let t: Vec<CMat> = lambda.iter().map(|l| l.scale(0.5)).collect();
    let tbar: Vec<CMat> = t.iter().map(|m| -m.conjugate()).collect();
    let mut f = [[[0.0; N_GEN]; N_GEN]; N_GEN];
    for a in 0..N_GEN {
        for b in 0..N_GEN {
            let comm = commutator(&t[a], &t[b]);
            for (cc, tc) in t.iter().enumerate() {
                let v = C64::new(0.0, -2.0) * trace(&(&comm * tc));
                f[a][b][cc] = v.re;
            }
        }
    }
    GellMannSet {
        lambda,
        t,
        tbar,
        f,
    }
}

impl GellMannSet {
    /// Largest violation of `[G^a, G^b] = i f^{abc} G^c` over all pairs.
    pub fn closure_residual(&self, gens: &[CMat]) -> f64 {
        let dim = gens[0].nrows();
        let mut worst: f64 = 0.0;
        for a in 0..N_GEN {
            for b in 0..N_GEN {
                let lhs = commutator(&gens[a], &gens[b]);
                let mut rhs = CMat::zeros(dim, dim);
                for (cc, g) in gens.iter().enumerate() {
                    let fabc = self.f[a][b][cc];
                    if fabc != 0.0 {
                        rhs += g * (I * fabc);
                    }
                }
                worst = worst.max(max_abs_diff(&lhs, &rhs));
            }
        }
        worst
    }

    /// Largest deviation of `Tr[T^a T^b]` from `δ^{ab}/2`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..N_GEN {
            for b in 0..N_GEN {
                let want = if a == b { 0.5 } else { 0.0 };
                let got = trace(&(&self.t[a] * &self.t[b]));
                worst = worst.max((got - c(want)).norm());
            }
        }
        worst
    }

    /// Largest deviation of `f^{abc}` from total antisymmetry.
    pub fn antisymmetry_residual(&self) -> f64 {
        let f = &self.f;
        let mut worst: f64 = 0.0;
        for a in 0..N_GEN {
            for b in 0..N_GEN {
                for cc in 0..N_GEN {
                    worst = worst
                        .max((f[a][b][cc] + f[b][a][cc]).abs())
                        .max((f[a][b][cc] + f[a][cc][b]).abs())
                        .max((f[a][b][cc] - f[b][cc][a]).abs());
                }
            }
        }
        worst
    }
}

fn quadratic_sum(gens: &[CMat]) -> CMat {
    let dim = gens[0].nrows();
    gens.iter()
        .fold(CMat::zeros(dim, dim), |acc, g| acc + g * g)
}

/// `Σ_a T^a T^a`, equal to `(4/3) I₃`.
pub fn casimir_fundamental(algebra: &GellMannSet) -> CMat {
    quadratic_sum(&algebra.t)
}

/// `Σ_a T̄^a T̄^a`, equal to `(4/3) I₃`.
pub fn casimir_antifundamental(algebra: &GellMannSet) -> CMat {
    quadratic_sum(&algebra.tbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermiticity_residual;

    #[test]
    fn lambda1_matches_printed_matrix() {
        let g = gell_mann();
        let l1 = &g.lambda[0];
        for i in 0..3 {
            for j in 0..3 {
                let want = if (i, j) == (0, 1) || (i, j) == (1, 0) { 1.0 } else { 0.0 };
                assert_eq!(l1[(i, j)], c(want));
            }
        }
    }

    #[test]
    fn lambdas_hermitian_and_traceless() {
        let g = gell_mann();
        for l in &g.lambda {
            assert_eq!(hermiticity_residual(l), 0.0);
            assert!(trace(l).norm() < 1e-15);
        }
    }

    #[test]
    fn trace_normalisation() {
        let g = gell_mann();
        let t33 = trace(&(&g.t[2] * &g.t[2]));
        let t38 = trace(&(&g.t[2] * &g.t[7]));
        assert!((t33 - c(0.5)).norm() < 1e-15);
        assert!(t38.norm() < 1e-15);
        assert!(g.orthonormality_residual() <= 1e-15);
    }

    #[test]
    fn tbar_is_negated_conjugate() {
        let g = gell_mann();
        for a in 0..N_GEN {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(g.tbar[a][(i, j)], -g.t[a][(i, j)].conj());
                }
            }
        }
    }

    /// Brute-force oracle: every structure constant from the commutator trace,
    /// checked against the standard nonzero table.
    #[test]
    fn structure_constants_match_standard_table() {
        let g = gell_mann();
        let h = 3f64.sqrt() / 2.0;
        let nonzero = [
            ((1, 2, 3), 1.0),
            ((1, 4, 7), 0.5),
            ((1, 5, 6), -0.5),
            ((2, 4, 6), 0.5),
            ((2, 5, 7), 0.5),
            ((3, 4, 5), 0.5),
            ((3, 6, 7), -0.5),
            ((4, 5, 8), h),
            ((6, 7, 8), h),
        ];
        assert!((g.f[0][1][2] - 1.0).abs() < 1e-15);
        let mut expected = [[[0.0; N_GEN]; N_GEN]; N_GEN];
        for &((a, b, cc), v) in &nonzero {
            let (a, b, cc) = (a - 1, b - 1, cc - 1);
            for (p, q, r, s) in [
                (a, b, cc, 1.0),
                (b, cc, a, 1.0),
                (cc, a, b, 1.0),
                (b, a, cc, -1.0),
                (a, cc, b, -1.0),
                (cc, b, a, -1.0),
            ] {
                expected[p][q][r] = s * v;
            }
        }
        for a in 0..N_GEN {
            for b in 0..N_GEN {
                for cc in 0..N_GEN {
                    assert!(
                        (g.f[a][b][cc] - expected[a][b][cc]).abs() < 1e-14,
                        "f[{a}][{b}][{cc}]"
                    );
                }
            }
        }
        assert!(g.antisymmetry_residual() < 1e-15);
    }

    #[test]
    fn closure_fundamental_and_antifundamental() {
        let g = gell_mann();
        assert!(g.closure_residual(&g.t) <= 1e-14);
        assert!(g.closure_residual(&g.tbar) <= 1e-14);
    }

    #[test]
    fn casimirs_are_four_thirds() {
        let g = gell_mann();
        let want = CMat::identity(3, 3) * c(4.0 / 3.0);
        assert!(max_abs_diff(&casimir_fundamental(&g), &want) < 1e-15);
        assert!(max_abs_diff(&casimir_antifundamental(&g), &want) < 1e-15);
        assert!((trace(&casimir_fundamental(&g)) - c(4.0)).norm() < 1e-14);
    }
}
