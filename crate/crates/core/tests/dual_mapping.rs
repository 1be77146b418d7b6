//! Qu8it and Jordan-Wigner qubit encodings must describe the same theory.

use qu8it::lattice::{
    block_spectrum, build_qu8it_hamiltonian, build_qubit_hamiltonian, mass_shift,
    qu8it_symmetry_keys, qubit_symmetry_keys, LatticeParams,
};
use qu8it::linalg::c;
use qu8it::sparse::CsrMatrix;
use qu8it::su3::gell_mann;

fn spectra(p: &LatticeParams) -> (Vec<f64>, Vec<f64>) {
    let h8 = build_qu8it_hamiltonian(p).unwrap();
    let h2 = build_qubit_hamiltonian(p).unwrap();
    let s8 = block_spectrum(&h8.matrix, &qu8it_symmetry_keys(p).unwrap()).unwrap();
    let s2 = block_spectrum(&h2.matrix, &qubit_symmetry_keys(p).unwrap()).unwrap();
    let shift = mass_shift(p);
    (s8.iter().map(|e| e + shift).collect(), s2)
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn spectra_agree_nf1_l1() {
    let p = LatticeParams::uniform(1, 1, 1.0, 1.3, 0.9);
    let (a, b) = spectra(&p);
    assert_eq!(a.len(), 64);
    assert!(max_gap(&a, &b) < 1e-9, "{}", max_gap(&a, &b));
}

#[test]
fn spectra_agree_nf2_l1_with_flavour_strings() {
    let mut p = LatticeParams::uniform(2, 1, 1.0, 1.3, 0.9);
    p.masses = vec![1.0, 0.7];
    let (a, b) = spectra(&p);
    assert_eq!(a.len(), 4096);
    assert!(max_gap(&a, &b) < 1e-9, "{}", max_gap(&a, &b));
}

#[test]
fn spectra_agree_nf1_l2() {
    let p = LatticeParams::uniform(1, 2, 0.8, 1.1, 0.6);
    let (a, b) = spectra(&p);
    assert_eq!(a.len(), 4096);
    assert!(max_gap(&a, &b) < 1e-9, "{}", max_gap(&a, &b));
}

/// Independent qubit oracle: fermion operators acting on occupation bit
/// strings (local state 0 = occupied, modes ordered as qubits), assembled
/// from `ψ†ψ` hopping, staggered mass and charge bilinears `ψ† T^a ψ`.
fn jw_oracle(p: &LatticeParams) -> CsrMatrix {
    let nq = p.qubit_count();
    let dim = 1usize << nq;
    let occupied = |state: usize, q: usize| (state >> (nq - 1 - q)) & 1 == 0;
    let creator = |q: usize| -> CsrMatrix {
        let mut trip = Vec::new();
        for s in 0..dim {
            if !occupied(s, q) {
                // σ^z string: −1 for every empty mode before q.
                let parity = (0..q).filter(|&k| !occupied(s, k)).count() % 2;
                let sign = if parity == 0 { 1.0 } else { -1.0 };
                trip.push((s ^ (1 << (nq - 1 - q)), s, c(sign)));
            }
        }
        CsrMatrix::from_triplets(dim, trip)
    };
    let cdag: Vec<CsrMatrix> = (0..nq).map(creator).collect();
    let cann: Vec<CsrMatrix> = cdag.iter().map(|m| m.adjoint()).collect();
    let bil = |a: usize, b: usize| cdag[a].matmul(&cann[b]).unwrap();
    let mode = |n: usize, f: usize, col: usize| 3 * p.nf * n + 3 * f + col;
    let add = |h: &mut CsrMatrix, m: &CsrMatrix, w: f64| *h = h.add(&m.scaled(w)).unwrap();
    let ns = p.n_sites();
    let mut h = CsrMatrix::zeros(dim);
    for n in 0..ns - 1 {
        for f in 0..p.nf {
            for col in 0..3 {
                let (a, b) = (mode(n, f, col), mode(n + 1, f, col));
                add(&mut h, &bil(a, b), 0.5);
                add(&mut h, &bil(b, a), 0.5);
            }
        }
    }
    for n in 0..ns {
        for f in 0..p.nf {
            for col in 0..3 {
                let num = bil(mode(n, f, col), mode(n, f, col));
                if n % 2 == 0 {
                    add(&mut h, &num, p.masses[f]);
                } else {
                    add(&mut h, &CsrMatrix::identity(dim), p.masses[f]);
                    add(&mut h, &num, -p.masses[f]);
                }
            }
        }
    }
    let gm = gell_mann();
    for a in 0..8 {
        let mut cum = CsrMatrix::zeros(dim);
        for n in 0..ns {
            for f in 0..p.nf {
                for al in 0..3 {
                    for be in 0..3 {
                        let t = gm.t[a][(al, be)];
                        if t != c(0.0) {
                            let b = bil(mode(n, f, al), mode(n, f, be));
                            let tb = CsrMatrix::from_triplets(
                                dim,
                                b.triplets().map(|(r, k, v)| (r, k, v * t)).collect(),
                            );
                            cum = cum.add(&tb).unwrap();
                        }
                    }
                }
            }
            let sq = cum.matmul(&cum).unwrap();
            if n + 1 < ns {
                add(&mut h, &sq, 0.5 * p.g * p.g);
            }
            if n + 1 == ns && p.include_h {
                add(&mut h, &sq, 0.5 * p.h * p.h);
            }
        }
    }
    h
}

#[test]
fn qubit_builder_matches_jw_oracle() {
    for p in [
        LatticeParams::uniform(1, 1, 0.9, 1.2, 0.7),
        LatticeParams::uniform(1, 2, 0.5, 1.3, 0.4),
        LatticeParams { masses: vec![0.6, 1.4], ..LatticeParams::uniform(2, 1, 0.0, 0.8, 0.5) },
    ] {
        let built = build_qubit_hamiltonian(&p).unwrap().matrix;
        let r = built.max_abs_diff(&jw_oracle(&p)).unwrap();
        assert!(r < 1e-12, "{p:?}: {r}");
    }
}
