//! Single-qu8it operators: creation/annihilation, phase, colour charge and
//! baryon number.
//!
//! Basis convention: the printed labels `|1⟩ … |8⟩` are stored at indices
//! `0 … 7`. Every other module uses the zero-based index; only display code
//! adds one.

use std::collections::BTreeSet;

use crate::linalg::{anticommutator, c, diag, max_abs_diff, CMat};
use crate::su3::{GellMannSet, N_GEN};

/// Local dimension of a qu8it.
pub const D: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    R,
    G,
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::R => "r",
            Color::G => "g",
            Color::B => "b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irrep {
    Singlet,
    Triplet,
    AntiTriplet,
}

/// Labels, irreps and occupations of the eight qu8it states.
#[derive(Debug, Clone)]
pub struct Qu8itBasis {
    pub states: [&'static str; D],
    pub irrep: [Irrep; D],
    pub occupation: [u8; D],
}

impl Default for Qu8itBasis {
    fn default() -> Self {
        use Irrep::*;
        Qu8itBasis {
            states: [
                "|Ω⟩",
                "|q_r⟩",
                "|q_g⟩",
                "|q_b⟩",
                "|q_g q_b⟩",
                "-|q_r q_b⟩",
                "|q_r q_g⟩",
                "|q_r q_g q_b⟩",
            ],
            irrep: [
                Singlet,
                Triplet,
                Triplet,
                Triplet,
                AntiTriplet,
                AntiTriplet,
                AntiTriplet,
                Singlet,
            ],
            occupation: [0, 1, 1, 1, 2, 2, 2, 3],
        }
    }
}

impl Qu8itBasis {
    /// Irreps carried by the same labels on an anti-qu8it.
    pub fn anti_irrep(&self, k: usize) -> Irrep {
        match self.irrep[k] {
            Irrep::Triplet => Irrep::AntiTriplet,
            Irrep::AntiTriplet => Irrep::Triplet,
            Irrep::Singlet => Irrep::Singlet,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Qu8itOperators {
    /// Annihilators `c̃_r, c̃_g, c̃_b`.
    pub c: [CMat; 3],
    /// Creators, the transposes of `c`.
    pub c_dag: [CMat; 3],
    /// Phase matrix `P̃ = diag(1,-1,-1,-1,1,1,1,-1)`.
    pub p: CMat,
    /// Quark charges `Q̃^a`, blocks `diag(0, T^a, T̄^a, 0)`.
    pub q: Vec<CMat>,
    /// Anti-quark charges, blocks `diag(0, T̄^a, T^a, 0)`.
    pub qbar: Vec<CMat>,
    /// `B̃ = diag(0,1,1,1,2,2,2,3)/3`.
    pub b: CMat,
}

/// Single-entry matrix from one-based labels.
fn unit(row: usize, col: usize, sign: f64) -> CMat {
    let mut m = CMat::zeros(D, D);
    m[(row - 1, col - 1)] = c(sign);
    m
}

fn annihilators() -> [CMat; 3] {
    let cr = unit(1, 2, 1.0) + unit(3, 7, 1.0) + unit(4, 6, -1.0) + unit(5, 8, 1.0);
    let cg = unit(1, 3, 1.0) + unit(2, 7, -1.0) + unit(4, 5, 1.0) + unit(6, 8, 1.0);
    let cb = unit(1, 4, 1.0) + unit(2, 6, 1.0) + unit(3, 5, -1.0) + unit(7, 8, 1.0);
    [cr, cg, cb]
}

fn block_charge(triplet: &CMat, anti: &CMat) -> CMat {
    let mut m = CMat::zeros(D, D);
    m.view_mut((1, 1), (3, 3)).copy_from(triplet);
    m.view_mut((4, 4), (3, 3)).copy_from(anti);
    m
}

pub fn build_qu8it_operators(algebra: &GellMannSet) -> Qu8itOperators {
    let c_ops = annihilators();
    let c_dag = [
        c_ops[0].transpose(),
        c_ops[1].transpose(),
        c_ops[2].transpose(),
    ];
    let q = (0..N_GEN)
        .map(|a| block_charge(&algebra.t[a], &algebra.tbar[a]))
        .collect();
    let qbar = (0..N_GEN)
        .map(|a| block_charge(&algebra.tbar[a], &algebra.t[a]))
        .collect();
    Qu8itOperators {
        c: c_ops,
        c_dag,
        p: phase_matrix(),
        q,
        qbar,
        b: baryon_matrix(),
    }
}

pub fn phase_matrix() -> CMat {
    diag(&[1.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0])
}

pub fn baryon_matrix() -> CMat {
    diag(&[0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0]).scale(1.0 / 3.0)
}

/// `Σ_a Q̃^a Q̃^a` on one qu8it, `(4/3) diag(0,1,1,1,1,1,1,0)`.
pub fn charge_casimir() -> CMat {
    diag(&[0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0]).scale(4.0 / 3.0)
}

/// Largest violation of the canonical anticommutators for a candidate set of
/// annihilators (creators are taken as the transposes).
pub fn anticommutator_residual(c_ops: &[CMat; 3]) -> f64 {
    let id = CMat::identity(D, D);
    let zero = CMat::zeros(D, D);
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let cd = c_ops[b].transpose();
            let mixed = anticommutator(&c_ops[a], &cd);
            let want = if a == b { id.clone() } else { zero.clone() };
            worst = worst.max(max_abs_diff(&mixed, &want));
            worst = worst.max(max_abs_diff(&anticommutator(&c_ops[a], &c_ops[b]), &zero));
        }
    }
    worst
}

/// `Σ_{αβ} c̃_α† M_{αβ} c̃_β` for a 3×3 colour matrix `M`.
pub fn bilinear(c_ops: &[CMat; 3], m: &CMat) -> CMat {
    let mut out = CMat::zeros(D, D);
    for a in 0..3 {
        let cd = c_ops[a].transpose();
        for b in 0..3 {
            let mab = m[(a, b)];
            if mab.norm() > 0.0 {
                out += &cd * &c_ops[b] * mab;
            }
        }
    }
    out
}

impl Qu8itOperators {
    pub fn number(&self) -> CMat {
        self.c_dag
            .iter()
            .zip(&self.c)
            .fold(CMat::zeros(D, D), |acc, (cd, cc)| acc + cd * cc)
    }

    pub fn casimir(&self) -> CMat {
        self.q.iter().fold(CMat::zeros(D, D), |acc, q| acc + q * q)
    }

    pub fn casimir_bar(&self) -> CMat {
        self.qbar
            .iter()
            .fold(CMat::zeros(D, D), |acc, q| acc + q * q)
    }

    /// Charge matrices for a quark (`anti = false`) or anti-quark slot.
    pub fn charges(&self, anti: bool) -> &[CMat] {
        if anti {
            &self.qbar
        } else {
            &self.q
        }
    }
}

/// Per-state neighbour sets under the kinetic and charge operators.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionGraph {
    pub kinetic: Vec<BTreeSet<usize>>,
    pub charge: Vec<BTreeSet<usize>>,
}

impl TransitionGraph {
    pub fn neighbours(&self, state: usize) -> BTreeSet<usize> {
        self.kinetic[state]
            .union(&self.charge[state])
            .copied()
            .collect()
    }

    pub fn degree(&self, state: usize) -> usize {
        self.neighbours(state).len()
    }
}

fn add_edges(target: &mut [BTreeSet<usize>], m: &CMat) {
    for i in 0..D {
        for j in 0..D {
            if i != j && m[(i, j)].norm() > 1e-14 {
                target[i].insert(j);
                target[j].insert(i);
            }
        }
    }
}

pub fn transition_graph(ops: &Qu8itOperators) -> TransitionGraph {
    let mut kinetic = vec![BTreeSet::new(); D];
    let mut charge = vec![BTreeSet::new(); D];
    for cc in &ops.c {
        add_edges(&mut kinetic, cc);
    }
    for q in &ops.q {
        add_edges(&mut charge, q);
    }
    TransitionGraph { kinetic, charge }
}
