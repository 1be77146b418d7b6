//! Registry of algebraic and structural certifications.
//!
//! Every check records the measured residual next to its tolerance so the
//! whole suite can be reported as data. Checks never abort: a failing
//! construction is recorded as a failed check with an infinite residual.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fock::{fock_oracle, FockOracle};
use crate::givens::{
    build_basis, build_grouped_operators, decompose, Generator, GroupedOperators,
};
use crate::lattice::{
    block_spectrum, build_qu8it_hamiltonian, build_qubit_hamiltonian, mass_shift,
    qu8it_symmetry_keys, qubit_symmetry_keys, sector_indices, BaryonSector, BlockTag,
    LatticeParams, Mapping,
};
use crate::linalg::{
    anticommutator, c, commutator, diag, hermiticity_residual, kron, max_abs, max_abs_diff,
    trace, CMat, C64,
};
use crate::qu8it::{
    anticommutator_residual, build_qu8it_operators, charge_casimir, Qu8itOperators, D,
};
use crate::resources::{
    asymptotic_ratios, closed_form_counts, enumerate_circuit_counts, reduction_ratios,
};
use crate::su3::{casimir_antifundamental, casimir_fundamental, gell_mann, GellMannSet, N_GEN};

/// Tolerance for exact matrix identities.
pub const IDENTITY_TOL: f64 = 1e-13;
/// Tolerance for eigenvalue comparisons.
pub const SPECTRAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    /// Gell-Mann algebra.
    #[serde(rename = "appA")]
    AppA,
    /// Fock-space embedding of the qu8it operators.
    #[serde(rename = "appB")]
    AppB,
    /// Givens and Walsh bases.
    #[serde(rename = "appC")]
    AppC,
    /// Charge-charge contractions.
    #[serde(rename = "appD")]
    AppD,
    /// Printed single-link Hamiltonian forms.
    Hamiltonian,
    Spectra,
    Connectivity,
    Resources,
}

impl Section {
    pub const ALL: [Section; 8] = [
        Section::AppA,
        Section::AppB,
        Section::AppC,
        Section::AppD,
        Section::Hamiltonian,
        Section::Spectra,
        Section::Connectivity,
        Section::Resources,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::AppA => "appA",
            Section::AppB => "appB",
            Section::AppC => "appC",
            Section::AppD => "appD",
            Section::Hamiltonian => "hamiltonian",
            Section::Spectra => "spectra",
            Section::Connectivity => "connectivity",
            Section::Resources => "resources",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Section::ALL
            .into_iter()
            .find(|sec| sec.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown section {s:?}")))
    }
}

/// One certification: `passed` is `residual <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub section: Section,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(section: Section, name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            section,
            residual,
            tolerance,
            passed: residual <= tolerance,
            detail: None,
        }
    }

    /// Integer equality, residual `|found - expected|`.
    pub fn count(section: Section, name: impl Into<String>, found: usize, expected: usize) -> Self {
        let mut ch = Check::new(section, name, found.abs_diff(expected) as f64, 0.0);
        ch.detail = Some(format!("found {found}, expected {expected}"));
        ch
    }

    fn failed(section: Section, name: impl Into<String>, err: &Error) -> Self {
        let mut ch = Check::new(section, name, f64::INFINITY, 0.0);
        ch.detail = Some(err.to_string());
        ch
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Largest finite residual among the checks of `section`.
    pub fn max_residual(&self, section: Section) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.section == section)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

/// Runs the requested sections in the order of [`Section::ALL`].
pub fn run_suite(sections: &[Section]) -> Report {
    let algebra = gell_mann();
    let ops = build_qu8it_operators(&algebra);
    let mut checks = Vec::new();
    for sec in Section::ALL {
        if !sections.contains(&sec) {
            continue;
        }
        checks.extend(match sec {
            Section::AppA => algebra_checks(&algebra),
            Section::AppB => operator_checks(&algebra, &ops, &fock_oracle(&algebra)),
            Section::AppC => basis_checks(),
            Section::AppD => contraction_checks(&ops),
            Section::Hamiltonian => hamiltonian_checks(&ops),
            Section::Spectra => spectral_checks(),
            Section::Connectivity => connectivity_checks(&ops),
            Section::Resources => resource_checks(),
        });
    }
    Report { checks }
}

pub fn run_all() -> Report {
    run_suite(&Section::ALL)
}

fn w(k: u8) -> CMat {
    Generator::W(k).matrix()
}

fn x(i: u8, j: u8) -> CMat {
    Generator::X(i, j).matrix()
}

fn y(i: u8, j: u8) -> CMat {
    Generator::Y(i, j).matrix()
}

fn id8() -> CMat {
    CMat::identity(D, D)
}

fn sum_kron(a: &[CMat], b: &[CMat]) -> CMat {
    a.iter()
        .zip(b)
        .fold(CMat::zeros(D * D, D * D), |acc, (p, q)| acc + kron(p, q))
}

fn q_sq(q: &[CMat]) -> CMat {
    q.iter().fold(CMat::zeros(D, D), |acc, m| acc + m * m)
}

/// `diag(1, -1/3 ×6, 1)`.
fn electric_literal() -> CMat {
    let t = -1.0 / 3.0;
    diag(&[1.0, t, t, t, t, t, t, 1.0])
}

fn identity_check(sec: Section, name: &str, a: &CMat, b: &CMat) -> Check {
    Check::new(sec, name, max_abs_diff(a, b), IDENTITY_TOL)
}

pub fn algebra_checks(g: &GellMannSet) -> Vec<Check> {
    let s = Section::AppA;
    let herm = g.lambda.iter().map(hermiticity_residual).fold(0.0, f64::max);
    let mut ortho: f64 = 0.0;
    for a in 0..N_GEN {
        for b in 0..N_GEN {
            let want = if a == b { 0.5 } else { 0.0 };
            ortho = ortho.max((trace(&(&g.t[a] * &g.t[b])) - c(want)).norm());
        }
    }
    let want = CMat::identity(3, 3).scale(4.0 / 3.0);
    vec![
        Check::new(s, "gell-mann hermiticity", herm, 0.0),
        Check::new(s, "generator orthonormality", ortho, 1e-15),
        Check::new(s, "fundamental closure", g.closure_residual(&g.t), 1e-14),
        Check::new(s, "anti-fundamental closure", g.closure_residual(&g.tbar), 1e-14),
        Check::new(s, "structure constant antisymmetry", g.antisymmetry_residual(), 1e-14),
        identity_check(s, "fundamental casimir 4/3", &casimir_fundamental(g), &want),
        identity_check(s, "anti-fundamental casimir 4/3", &casimir_antifundamental(g), &want),
    ]
}

/// Qu8it matrices against the Fock-space oracle plus their algebra. Takes
/// the operators explicitly so corrupted copies can be certified too.
pub fn operator_checks(g: &GellMannSet, ops: &Qu8itOperators, oracle: &FockOracle) -> Vec<Check> {
    let s = Section::AppB;
    let per = |a: &[CMat], b: &[CMat]| {
        a.iter()
            .zip(b)
            .map(|(p, q)| max_abs_diff(p, q))
            .fold(0.0, f64::max)
    };
    let mut p_anti: f64 = 0.0;
    let mut b_comm: f64 = 0.0;
    for k in 0..3 {
        p_anti = p_anti
            .max(max_abs(&anticommutator(&ops.p, &ops.c[k])))
            .max(max_abs(&anticommutator(&ops.p, &ops.c_dag[k])));
    }
    for q in ops.q.iter().chain(&ops.qbar) {
        b_comm = b_comm.max(max_abs(&commutator(&ops.b, q)));
    }
    let creators_match = (0..3)
        .map(|k| max_abs_diff(&ops.c_dag[k], &ops.c[k].adjoint()))
        .fold(0.0, f64::max);
    vec![
        Check::new(s, "annihilators equal fock oracle", per(&ops.c, &oracle.c), 0.0),
        Check::new(s, "creators are adjoints", creators_match, 0.0),
        Check::new(s, "phase matrix equals fock parity", max_abs_diff(&ops.p, &oracle.p), 0.0),
        Check::new(s, "baryon matrix equals fock number/3", max_abs_diff(&ops.b, &oracle.b), 1e-15),
        Check::new(s, "quark charges equal fock bilinears", per(&ops.q, &oracle.q), 1e-15),
        Check::new(s, "anti-quark charges equal fock bilinears", per(&ops.qbar, &oracle.qbar), 1e-15),
        Check::new(s, "canonical anticommutators", anticommutator_residual(&ops.c), 0.0),
        Check::new(s, "phase anticommutes with c and c-dagger", p_anti, 0.0),
        Check::new(s, "quark charge closure", g.closure_residual(&ops.q), 1e-14),
        Check::new(s, "anti-quark charge closure", g.closure_residual(&ops.qbar), 1e-14),
        Check::new(s, "baryon commutes with charges", b_comm, 1e-15),
        identity_check(s, "charge casimir block values", &q_sq(&ops.q), &charge_casimir()),
    ]
}

/// Deterministic Hermitian test matrix with all 64 real directions excited.
fn probe_hermitian() -> CMat {
    CMat::from_fn(D, D, |i, j| {
        let (a, b) = (i as f64, j as f64);
        let re = (1.3 * a + 0.7 * b).sin() + (0.7 * a + 1.3 * b).sin();
        let im = (0.9 * (a - b)).sin() * (1.0 + 0.1 * a * b);
        C64::new(re, im)
    })
}

pub fn basis_checks() -> Vec<Check> {
    let s = Section::AppC;
    let basis = build_basis();
    let mut ortho: f64 = 0.0;
    for i in 0..D {
        for j in 0..D {
            let want = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((trace(&(&basis.w[i] * &basis.w[j])) - c(want)).norm());
        }
    }
    let xy_norm = basis
        .x
        .iter()
        .chain(&basis.y)
        .map(|(_, m)| (trace(&(m * m)) - c(2.0)).norm())
        .fold(0.0, f64::max);
    let probe = probe_hermitian();
    let roundtrip = match decompose(&probe) {
        Ok(list) => max_abs_diff(&list.reconstruct(1), &probe),
        Err(e) => return vec![Check::failed(s, "decompose then reconstruct", &e)],
    };
    let n_gen = basis.x.len() + basis.y.len() + basis.w.len();
    vec![
        Check::new(s, "walsh orthonormality", ortho, 1e-15),
        Check::new(s, "givens generator norms", xy_norm, 0.0),
        Check::count(s, "generator count 28+28+8", n_gen, 64),
        Check::new(s, "decompose then reconstruct", roundtrip, IDENTITY_TOL),
    ]
}

/// Printed X/Y combination of a same-parity or mixed-parity charge pair.
fn printed_pair_contraction(sign: f64) -> CMat {
    let singles = [(2, 3), (2, 4), (3, 4), (5, 6), (5, 7), (6, 7)];
    let doubles = [((2, 3), (5, 6)), ((2, 4), (5, 7)), ((3, 4), (6, 7))];
    let d1 = &w(3) - &w(5);
    let d2 = &w(4) + &w(6) - w(8).scale(2.0);
    let mut m = (kron(&d1, &d1).scale(0.5) + kron(&d2, &d2).scale(1.0 / 6.0)).scale(sign);
    for &(i, j) in &singles {
        m += (kron(&y(i, j), &y(i, j)) + kron(&x(i, j), &x(i, j)).scale(sign)).scale(0.25);
    }
    for &(r, s) in &doubles {
        let xx = kron(&x(r.0, r.1), &x(s.0, s.1)) + kron(&x(s.0, s.1), &x(r.0, r.1));
        let yy = kron(&y(r.0, r.1), &y(s.0, s.1)) + kron(&y(s.0, s.1), &y(r.0, r.1));
        m += (yy - xx.scale(sign)).scale(0.25);
    }
    m
}

/// `Σ_P ¼(D⊗D ± C⊗C) + G3⊗H3 + G8⊗H8`.
fn grouped_contraction(gr: &GroupedOperators, sign: f64, g: &[CMat], h: &[CMat]) -> CMat {
    let mut m = kron(&g[2], &h[2]) + kron(&g[7], &h[7]);
    for k in 0..3 {
        m += (kron(&gr.d[k], &gr.d[k]) + kron(&gr.c[k], &gr.c[k]).scale(sign)).scale(0.25);
    }
    m
}

pub fn contraction_checks(ops: &Qu8itOperators) -> Vec<Check> {
    let s = Section::AppD;
    let gr = build_grouped_operators();
    let id = id8();
    let cas_lit = diag(&[0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0]).scale(4.0 / 3.0);
    let w357 = &w(3) + &w(5) + &w(7);
    let self_q = kron(&q_sq(&ops.q), &id);
    let self_qbar = kron(&id, &q_sq(&ops.qbar));
    let walsh_q = kron(&w(1), &w(1)).scale(8.0) - kron(&w357, &w(1)).scale(8.0 / 3.0);
    let walsh_qbar = kron(&w(1), &w(1)).scale(8.0) - kron(&w(1), &w357).scale(8.0 / 3.0);
    let qq = sum_kron(&ops.q, &ops.q);
    let qbqb = sum_kron(&ops.qbar, &ops.qbar);
    let qqb = sum_kron(&ops.q, &ops.qbar);
    let qbq = sum_kron(&ops.qbar, &ops.q);
    let r2 = 0.5f64.sqrt();
    vec![
        identity_check(s, "quark self term diagonal form", &self_q, &kron(&cas_lit, &id)),
        identity_check(s, "quark self term walsh form", &self_q, &walsh_q),
        identity_check(
            s,
            "quark self term literal form",
            &self_q,
            &(kron(&id, &id) - kron(&electric_literal(), &id)),
        ),
        identity_check(s, "anti-quark self term diagonal form", &self_qbar, &kron(&id, &cas_lit)),
        identity_check(s, "anti-quark self term walsh form", &self_qbar, &walsh_qbar),
        identity_check(
            s,
            "anti-quark self term literal form",
            &self_qbar,
            &(kron(&id, &id) - kron(&id, &electric_literal())),
        ),
        identity_check(s, "QQ equals QbarQbar", &qq, &qbqb),
        identity_check(s, "QQbar equals QbarQ", &qqb, &qbq),
        identity_check(s, "QQ givens expansion", &qq, &printed_pair_contraction(1.0)),
        identity_check(s, "QQbar givens expansion", &qqb, &printed_pair_contraction(-1.0)),
        identity_check(
            s,
            "w3-w5 literal",
            &(&w(3) - &w(5)),
            &diag(&[0.0, 1.0, 0.0, -1.0, -1.0, 0.0, 1.0, 0.0]).scale(r2),
        ),
        identity_check(
            s,
            "w4+w6-2w8 literal",
            &(&w(4) + &w(6) - w(8).scale(2.0)),
            &diag(&[0.0, 1.0, -2.0, 1.0, -1.0, 2.0, -1.0, 0.0]).scale(r2),
        ),
        identity_check(s, "QQ grouped", &qq, &grouped_contraction(&gr, 1.0, &ops.q, &ops.q)),
        identity_check(
            s,
            "QbarQbar grouped",
            &qbqb,
            &grouped_contraction(&gr, 1.0, &ops.qbar, &ops.qbar),
        ),
        identity_check(s, "QQbar grouped", &qqb, &grouped_contraction(&gr, -1.0, &ops.q, &ops.qbar)),
        identity_check(s, "QbarQ grouped", &qbq, &grouped_contraction(&gr, -1.0, &ops.qbar, &ops.q)),
        identity_check(s, "Qbar3 = -Q3", &ops.qbar[2], &(-&ops.q[2])),
        identity_check(s, "Qbar8 = -Q8", &ops.qbar[7], &(-&ops.q[7])),
    ]
}

/// The kinetic hop of one link written as 96 signed X⊗X and Y⊗Y terms.
fn printed_kinetic_expansion() -> CMat {
    let singles: [(f64, (u8, u8)); 12] = [
        (1.0, (1, 2)),
        (1.0, (1, 3)),
        (1.0, (1, 4)),
        (1.0, (5, 8)),
        (1.0, (6, 8)),
        (1.0, (7, 8)),
        (-1.0, (2, 6)),
        (-1.0, (2, 7)),
        (-1.0, (3, 5)),
        (-1.0, (3, 7)),
        (-1.0, (4, 5)),
        (-1.0, (4, 6)),
    ];
    let symmetric = [
        ((1, 2), (5, 8)),
        ((1, 3), (6, 8)),
        ((1, 4), (7, 8)),
        ((2, 6), (3, 5)),
        ((2, 7), (4, 5)),
        ((3, 7), (4, 6)),
    ];
    let antisymmetric = [
        ((1, 2), (3, 7)),
        ((4, 6), (1, 2)),
        ((2, 7), (1, 3)),
        ((1, 3), (4, 5)),
        ((1, 4), (2, 6)),
        ((3, 5), (1, 4)),
        ((7, 8), (2, 6)),
        ((2, 7), (6, 8)),
        ((3, 5), (7, 8)),
        ((5, 8), (3, 7)),
        ((6, 8), (4, 5)),
        ((4, 6), (5, 8)),
    ];
    let xx = |r: (u8, u8), s: (u8, u8)| kron(&x(r.0, r.1), &x(s.0, s.1));
    let yy = |r: (u8, u8), s: (u8, u8)| kron(&y(r.0, r.1), &y(s.0, s.1));
    let mut m = CMat::zeros(D * D, D * D);
    for &(sg, r) in &singles {
        m += (xx(r, r) - yy(r, r)).scale(sg);
    }
    for &(r, s) in &symmetric {
        m += xx(r, s) + xx(s, r) - yy(r, s) - yy(s, r);
    }
    for &(r, s) in &antisymmetric {
        m += xx(r, s) - xx(s, r) - yy(r, s) + yy(s, r);
    }
    m.scale(0.25)
}

pub fn hamiltonian_checks(ops: &Qu8itOperators) -> Vec<Check> {
    let s = Section::Hamiltonian;
    let gr = build_grouped_operators();
    let id = id8();
    let b_walsh = (w(1).scale(6.0) - w(2).scale(3.0) - w(4) - w(6) - w(8))
        .scale(1.0 / (3.0 * 2f64.sqrt()));

    // Electric self term at g = 1.
    let el_op = kron(&q_sq(&ops.q), &id).scale(0.5);
    let el_diag = kron(
        &diag(&[0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0]),
        &id,
    )
    .scale(2.0 / 3.0);
    let w357 = &w(3) + &w(5) + &w(7);
    let el_walsh =
        (kron(&w(1), &w(1)).scale(8.0) - kron(&w357, &w(1)).scale(8.0 / 3.0)).scale(0.5);
    let el_lit = (kron(&id, &id) - kron(&electric_literal(), &id)).scale(0.5);

    // h-term at h = 1: total charge squared of a quark and anti-quark slot.
    let total: Vec<CMat> = ops
        .q
        .iter()
        .zip(&ops.qbar)
        .map(|(q, qb)| kron(q, &id) + kron(&id, qb))
        .collect();
    let h_op = total.iter().fold(CMat::zeros(D * D, D * D), |acc, t| acc + t * t).scale(0.5);
    let h_terms = (kron(&q_sq(&ops.q), &id)
        + kron(&id, &q_sq(&ops.qbar))
        + sum_kron(&ops.q, &ops.qbar).scale(2.0))
    .scale(0.5);
    let d1 = &w(3) - &w(5);
    let d2 = &w(4) + &w(6) - w(8).scale(2.0);
    let mut h_walsh = kron(&w(1), &w(1)).scale(16.0)
        - kron(&w(1), &w357).scale(8.0 / 3.0)
        - kron(&w357, &w(1)).scale(8.0 / 3.0)
        - kron(&d1, &d1)
        - kron(&d2, &d2).scale(1.0 / 3.0);
    for (i, j) in [(2, 3), (2, 4), (3, 4), (5, 6), (5, 7), (6, 7)] {
        h_walsh += (kron(&y(i, j), &y(i, j)) - kron(&x(i, j), &x(i, j))).scale(0.5);
    }
    for ((a, b), (cc, dd)) in [((2, 3), (5, 6)), ((2, 4), (5, 7)), ((3, 4), (6, 7))] {
        h_walsh += (kron(&x(a, b), &x(cc, dd))
            + kron(&y(a, b), &y(cc, dd))
            + kron(&x(cc, dd), &x(a, b))
            + kron(&y(cc, dd), &y(a, b)))
        .scale(0.5);
    }
    let h_walsh = h_walsh.scale(0.5);
    let mut h_grouped = kron(&ops.q[2], &ops.qbar[2]).scale(2.0)
        + kron(&ops.q[7], &ops.qbar[7]).scale(2.0)
        + kron(&id, &id).scale(2.0)
        - kron(&electric_literal(), &id)
        - kron(&id, &electric_literal());
    for k in 0..3 {
        h_grouped += (kron(&gr.d[k], &gr.d[k]) - kron(&gr.c[k], &gr.c[k])).scale(0.5);
    }
    let h_grouped = h_grouped.scale(0.5);

    // Kinetic hop of one link.
    let from_fermions = (0..3).fold(CMat::zeros(D * D, D * D), |acc, k| {
        acc + kron(&(&ops.c_dag[k] * &ops.p), &ops.c_dag[k]) - kron(&(&ops.c[k] * &ops.p), &ops.c[k])
    });
    let from_fermions = from_fermions.scale(0.5);
    let grouped_kin = (0..3).fold(CMat::zeros(D * D, D * D), |acc, k| {
        acc + (kron(&gr.a[0][k], &gr.a[1][k]) - kron(&gr.b[0][k], &gr.b[1][k])).scale(0.25)
    });
    let expanded = printed_kinetic_expansion();

    let mut group_comm: f64 = 0.0;
    for k in 0..3 {
        let aa = kron(&gr.a[0][k], &gr.a[1][k]);
        let bb = kron(&gr.b[0][k], &gr.b[1][k]);
        group_comm = group_comm.max(max_abs(&commutator(&aa, &bb)));
        let cc = kron(&gr.c[k], &gr.c[k]);
        let dd = kron(&gr.d[k], &gr.d[k]);
        group_comm = group_comm.max(max_abs(&commutator(&cc, &dd)));
    }

    let a_lit = [
        (0, 0, [(1.0, 1, 2), (-1.0, 3, 7), (1.0, 4, 6), (1.0, 5, 8)]),
        (1, 0, [(1.0, 1, 2), (1.0, 3, 7), (-1.0, 4, 6), (1.0, 5, 8)]),
        (0, 1, [(1.0, 1, 3), (1.0, 2, 7), (-1.0, 4, 5), (1.0, 6, 8)]),
        (1, 1, [(1.0, 1, 3), (-1.0, 2, 7), (1.0, 4, 5), (1.0, 6, 8)]),
        (0, 2, [(1.0, 1, 4), (-1.0, 2, 6), (1.0, 3, 5), (1.0, 7, 8)]),
        (1, 2, [(1.0, 1, 4), (1.0, 2, 6), (-1.0, 3, 5), (1.0, 7, 8)]),
    ];
    let mut a_res: f64 = 0.0;
    for (par, col, terms) in a_lit {
        let ax = terms.iter().fold(CMat::zeros(D, D), |acc, &(sg, i, j)| acc + x(i, j).scale(sg));
        let by = terms.iter().fold(CMat::zeros(D, D), |acc, &(sg, i, j)| acc + y(i, j).scale(sg));
        a_res = a_res
            .max(max_abs_diff(&gr.a[par][col], &ax))
            .max(max_abs_diff(&gr.b[par][col], &by));
    }
    let cd_lit = [((2, 3), (5, 6)), ((2, 4), (5, 7)), ((3, 4), (6, 7))];
    let mut cd_res: f64 = 0.0;
    for (k, (p, q)) in cd_lit.into_iter().enumerate() {
        cd_res = cd_res
            .max(max_abs_diff(&gr.c[k], &(x(p.0, p.1) - x(q.0, q.1))))
            .max(max_abs_diff(&gr.d[k], &(y(p.0, p.1) + y(q.0, q.1))));
    }

    vec![
        identity_check(s, "baryon matrix walsh form", &ops.b, &b_walsh),
        identity_check(s, "electric self term diagonal form", &el_op, &el_diag),
        identity_check(s, "electric self term walsh form", &el_op, &el_walsh),
        identity_check(s, "electric self term literal form", &el_op, &el_lit),
        identity_check(s, "h-term squared charges", &h_op, &h_terms),
        identity_check(s, "h-term givens expansion", &h_op, &h_walsh),
        identity_check(s, "h-term grouped", &h_op, &h_grouped),
        Check::new(s, "C and D operators", cd_res, IDENTITY_TOL),
        Check::new(s, "kinetic A and B operators", a_res, IDENTITY_TOL),
        identity_check(s, "kinetic 96-term expansion", &expanded, &from_fermions),
        identity_check(s, "kinetic grouped form", &grouped_kin, &from_fermions),
        Check::new(s, "grouped members commute", group_comm, IDENTITY_TOL),
    ]
}

fn dual_spectrum_gap(p: &LatticeParams) -> crate::Result<f64> {
    let h8 = build_qu8it_hamiltonian(p)?;
    let h2 = build_qubit_hamiltonian(p)?;
    let s8 = block_spectrum(&h8.matrix, &qu8it_symmetry_keys(p)?)?;
    let s2 = block_spectrum(&h2.matrix, &qubit_symmetry_keys(p)?)?;
    if s8.len() != s2.len() {
        return Err(Error::DimensionMismatch {
            expected: s8.len(),
            found: s2.len(),
        });
    }
    let shift = mass_shift(p);
    Ok(s8
        .iter()
        .zip(&s2)
        .map(|(a, b)| (a + shift - b).abs())
        .fold(0.0, f64::max))
}

pub fn spectral_checks() -> Vec<Check> {
    let s = Section::Spectra;
    let mut out = Vec::new();
    let cases = [
        ("dual mapping spectra N_f=1 L=1", LatticeParams::uniform(1, 1, 1.0, 1.3, 0.9)),
        ("dual mapping spectra N_f=1 L=2", LatticeParams::uniform(1, 2, 0.8, 1.1, 0.6)),
    ];
    for (name, p) in cases {
        out.push(match dual_spectrum_gap(&p) {
            Ok(gap) => Check::new(s, name, gap, SPECTRAL_TOL),
            Err(e) => Check::failed(s, name, &e),
        });
    }
    let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 1.0);
    for (sector, want) in [(0, 20), (1, 15), (3, 1)] {
        let name = format!("sector B={} size", BaryonSector::new(sector));
        out.push(match sector_indices(&p, BaryonSector::new(sector)) {
            Ok(ix) => Check::count(s, name, ix.len(), want),
            Err(e) => Check::failed(s, name, &e),
        });
    }
    let name = "L=1 electric block diagonal";
    out.push(match build_qu8it_hamiltonian(&p) {
        Ok(h) => {
            let off = h
                .block(BlockTag::Electric)
                .map(|m| {
                    m.triplets()
                        .filter(|(i, j, _)| i != j)
                        .map(|(_, _, v)| v.norm())
                        .fold(0.0, f64::max)
                })
                .unwrap_or(f64::INFINITY);
            Check::new(s, name, off, 0.0)
        }
        Err(e) => Check::failed(s, name, &e),
    });
    out
}

pub fn connectivity_checks(ops: &Qu8itOperators) -> Vec<Check> {
    let graph = crate::qu8it::transition_graph(ops);
    (0..D)
        .map(|k| {
            let want = if k == 0 || k == D - 1 { 3 } else { 5 };
            Check::count(Section::Connectivity, format!("state {} degree", k + 1), graph.degree(k), want)
        })
        .collect()
}

pub fn resource_checks() -> Vec<Check> {
    let s = Section::Resources;
    let mut out = Vec::new();
    for nf in 1..=3 {
        for l in 1..=3 {
            let p = LatticeParams::uniform(nf, l, 1.0, 1.0, 1.0);
            let closed = closed_form_counts(&p, Mapping::Qu8it);
            let name = format!("qu8it counts N_f={nf} L={l}");
            match enumerate_circuit_counts(&p, false) {
                Ok(e) => {
                    let found = (e.qudit_count, e.kinetic_entangling, e.electric_entangling);
                    let want = (closed.qudit_count, closed.kinetic_entangling, closed.electric_entangling);
                    let diff = found.0.abs_diff(want.0) + found.1.abs_diff(want.1) + found.2.abs_diff(want.2);
                    let mut ch = Check::new(s, name, diff as f64, 0.0);
                    ch.detail = Some(format!("enumerated {found:?}, closed form {want:?}"));
                    out.push(ch);
                }
                Err(e) => out.push(Check::failed(s, name, &e)),
            }
        }
    }
    let far = LatticeParams::uniform(1, 200, 1.0, 1.0, 1.0);
    let ratios = reduction_ratios(&far);
    for (k, (label, want)) in ["qudits", "kinetic", "electric"]
        .iter()
        .zip(asymptotic_ratios())
        .enumerate()
    {
        let rel = ratios[k].map(|r| (r / want - 1.0).abs()).unwrap_or(f64::INFINITY);
        out.push(Check::new(s, format!("{label} ratio at L=200"), rel, 0.01));
    }
    let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 1.0);
    match enumerate_circuit_counts(&p, true) {
        Ok(r) => {
            let u = r.ungrouped.unwrap_or(crate::resources::UngroupedCounts {
                kinetic: 0,
                electric: 0,
                h: 0,
            });
            out.push(Check::count(s, "ungrouped kinetic terms L=1", u.kinetic, 96));
            out.push(Check::count(s, "ungrouped h terms L=1", u.h, 26));
            out.push(Check::count(
                s,
                "grouped kinetic steps L=1",
                r.kinetic_entangling,
                6,
            ));
            out.push(Check::count(s, "grouped h steps L=1", r.h_entangling.unwrap_or(0), 8));
            out.push(Check::count(
                s,
                "controlled gates L=1",
                r.controlled_gate_count.unwrap_or(0),
                732,
            ));
            out.push(Check::count(
                s,
                "single rotations L=1",
                r.single_rotation_count.unwrap_or(0),
                249,
            ));
        }
        Err(e) => out.push(Check::failed(s, "L=1 enumeration", &e)),
    }
    out
}
