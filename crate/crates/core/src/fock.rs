//! Brute-force three-mode Fock space used as an oracle for the qu8it
//! matrices.
//!
//! Modes are ordered `(r, g, b)`; `c†_k` carries the Jordan-Wigner sign
//! `(-1)^{n_0 + … + n_{k-1}}`. The qu8it states are produced by acting with
//! these creators on the vacuum, including the minus sign on `|6⟩`.

use crate::linalg::{c, CMat, CVec, ZERO};
use crate::qu8it::{Color, D};
use crate::su3::{GellMannSet, N_GEN};

/// Occupation bit of mode `k` inside a Fock index.
fn bit(k: usize) -> usize {
    1 << k
}

fn fock_creator(k: usize) -> CMat {
    let mut m = CMat::zeros(D, D);
    for n in 0..D {
        if n & bit(k) != 0 {
            continue;
        }
        let before = (0..k).filter(|&j| n & bit(j) != 0).count();
        let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
        m[(n | bit(k), n)] = c(sign);
    }
    m
}

#[derive(Debug, Clone)]
pub struct FockOracle {
    /// Fock-space creators `c†_r, c†_g, c†_b`.
    pub fock_creators: [CMat; 3],
    /// Column `k` is qu8it state `|k+1⟩` expressed in the Fock basis.
    pub embedding: CMat,
    pub c: [CMat; 3],
    pub p: CMat,
    pub q: Vec<CMat>,
    pub qbar: Vec<CMat>,
    pub b: CMat,
}

impl FockOracle {
    /// Maps a Fock-space operator into the qu8it basis.
    pub fn to_qu8it(&self, op: &CMat) -> CMat {
        self.embedding.adjoint() * op * &self.embedding
    }

    /// Applies `c†_color` to qu8it state `state` (zero-based). Returns the
    /// resulting state and sign, or `None` when the mode is already filled.
    pub fn create(&self, color: Color, state: usize) -> Option<(f64, usize)> {
        let v = self.embedding.column(state).into_owned();
        let out = &self.fock_creators[color.index()] * v;
        if out.iter().all(|z| *z == ZERO) {
            return None;
        }
        let coords = self.embedding.adjoint() * out;
        coords
            .iter()
            .enumerate()
            .find(|(_, z)| z.norm() > 0.5)
            .map(|(k, z)| (z.re.signum(), k))
    }
}

pub fn fock_oracle(algebra: &GellMannSet) -> FockOracle {
    let cd = [fock_creator(0), fock_creator(1), fock_creator(2)];
    let [r, g, b] = &cd;
    let mut vac = CVec::zeros(D);
    vac[0] = c(1.0);
    let states: [CVec; D] = [
        vac.clone(),
        r * &vac,
        g * &vac,
        b * &vac,
        g * (b * &vac),
        -(r * (b * &vac)),
        r * (g * &vac),
        r * (g * (b * &vac)),
    ];
    let mut embedding = CMat::zeros(D, D);
    for (k, s) in states.iter().enumerate() {
        embedding.set_column(k, s);
    }
    let ann: [CMat; 3] = [r.adjoint(), g.adjoint(), b.adjoint()];
    let number = cd
        .iter()
        .zip(&ann)
        .fold(CMat::zeros(D, D), |acc, (x, y)| acc + x * y);
    let parity = CMat::from_fn(D, D, |i, j| {
        if i == j {
            c(if (i.count_ones()) % 2 == 0 { 1.0 } else { -1.0 })
        } else {
            ZERO
        }
    });
    let bilinear = |m: &CMat| {
        let mut out = CMat::zeros(D, D);
        for a in 0..3 {
            for bb in 0..3 {
                out += &cd[a] * &ann[bb] * m[(a, bb)];
            }
        }
        out
    };
    let q_fock: Vec<CMat> = (0..N_GEN).map(|a| bilinear(&algebra.t[a])).collect();
    let qbar_fock: Vec<CMat> = (0..N_GEN).map(|a| bilinear(&algebra.tbar[a])).collect();

    let mut oracle = FockOracle {
        fock_creators: cd.clone(),
        embedding,
        c: [CMat::zeros(D, D), CMat::zeros(D, D), CMat::zeros(D, D)],
        p: CMat::zeros(D, D),
        q: Vec::new(),
        qbar: Vec::new(),
        b: CMat::zeros(D, D),
    };
    oracle.c = [
        oracle.to_qu8it(&ann[0]),
        oracle.to_qu8it(&ann[1]),
        oracle.to_qu8it(&ann[2]),
    ];
    oracle.p = oracle.to_qu8it(&parity);
    oracle.b = oracle.to_qu8it(&number).scale(1.0 / 3.0);
    oracle.q = q_fock.iter().map(|m| oracle.to_qu8it(m)).collect();
    oracle.qbar = qbar_fock.iter().map(|m| oracle.to_qu8it(m)).collect();
    oracle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::qu8it::build_qu8it_operators;
    use crate::su3::gell_mann;

    #[test]
    fn embedding_is_unitary() {
        let o = fock_oracle(&gell_mann());
        let id = o.embedding.adjoint() * &o.embedding;
        assert_eq!(id, CMat::identity(D, D));
    }

    #[test]
    fn printed_creation_actions() {
        let o = fock_oracle(&gell_mann());
        assert_eq!(o.create(Color::R, 4), Some((1.0, 7)));
        assert_eq!(o.create(Color::R, 1), None);
        assert_eq!(o.create(Color::G, 1), Some((-1.0, 6)));
        assert_eq!(o.create(Color::R, 2), Some((1.0, 6)));
        assert_eq!(o.create(Color::R, 3), Some((-1.0, 5)));
        assert_eq!(o.create(Color::G, 3), Some((1.0, 4)));
        assert_eq!(o.create(Color::B, 1), Some((1.0, 5)));
        assert_eq!(o.create(Color::B, 2), Some((-1.0, 4)));
        assert_eq!(o.create(Color::G, 5), Some((1.0, 7)));
        assert_eq!(o.create(Color::B, 6), Some((1.0, 7)));
    }

    #[test]
    fn oracle_matches_printed_matrices() {
        let g = gell_mann();
        let o = fock_oracle(&g);
        let ops = build_qu8it_operators(&g);
        for k in 0..3 {
            assert_eq!(max_abs_diff(&o.c[k], &ops.c[k]), 0.0);
        }
        assert_eq!(max_abs_diff(&o.p, &ops.p), 0.0);
        assert!(max_abs_diff(&o.b, &ops.b) <= 1e-15);
        for a in 0..N_GEN {
            assert!(max_abs_diff(&o.q[a], &ops.q[a]) <= 1e-15);
            assert!(max_abs_diff(&o.qbar[a], &ops.qbar[a]) <= 1e-15);
        }
    }
}
