//! SU(8) Givens generators, the Hadamard-Walsh diagonal basis and exact
//! decompositions of one- and two-qu8it Hermitian operators.
//!
//! Generator labels use the printed one-based state labels: `X(1,3)` has
//! ones at zero-based `(0,2)` and `(2,0)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::linalg::{c, diag, ensure_hermitian, kron, CMat, C64, I, ZERO};
use crate::qu8it::{Color, D};

/// Number of Givens pairs `(i, j)` with `i < j`.
pub const N_PAIRS: usize = 28;

/// Hadamard-Walsh sign patterns, `w_1 … w_8`, before the `1/sqrt(8)` factor.
pub const WALSH_SIGNS: [[i8; D]; D] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, -1, -1, -1, -1],
    [1, 1, -1, -1, -1, -1, 1, 1],
    [1, 1, -1, -1, 1, 1, -1, -1],
    [1, -1, -1, 1, 1, -1, -1, 1],
    [1, -1, -1, 1, -1, 1, 1, -1],
    [1, -1, 1, -1, -1, 1, -1, 1],
    [1, -1, 1, -1, 1, -1, 1, -1],
];

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    X(u8, u8),
    Y(u8, u8),
    /// Walsh matrix `w_k`, `k` in `1..=8`.
    W(u8),
    /// Gell-Mann-style diagonal `Z_k`, `k` in `1..=7`.
    Z(u8),
    /// Diagonal literal, stored as its eight entries.
    Diag(Vec<f64>),
}

impl Generator {
    fn class_rank(&self) -> u8 {
        match self {
            Generator::X(..) => 0,
            Generator::Y(..) => 1,
            Generator::W(_) => 2,
            Generator::Z(_) => 3,
            Generator::Diag(_) => 4,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            Generator::W(_) | Generator::Z(_) | Generator::Diag(_)
        )
    }

    /// True for `w_1`, the identity direction.
    pub fn is_identity_like(&self) -> bool {
        matches!(self, Generator::W(1))
    }

    /// Nonzero entries as `(row, col, value)`, zero-based.
    pub fn entries(&self) -> Vec<(usize, usize, C64)> {
        match *self {
            Generator::X(i, j) => {
                let (i, j) = (i as usize - 1, j as usize - 1);
                vec![(i, j, c(1.0)), (j, i, c(1.0))]
            }
            Generator::Y(i, j) => {
                let (i, j) = (i as usize - 1, j as usize - 1);
                vec![(i, j, -I), (j, i, I)]
            }
            Generator::W(k) => {
                let s = 1.0 / 8f64.sqrt();
                WALSH_SIGNS[k as usize - 1]
                    .iter()
                    .enumerate()
                    .map(|(n, &sg)| (n, n, c(sg as f64 * s)))
                    .collect()
            }
            Generator::Z(k) => z_diagonal(k as usize)
                .into_iter()
                .enumerate()
                .filter(|(_, v)| *v != 0.0)
                .map(|(n, v)| (n, n, c(v)))
                .collect(),
            Generator::Diag(ref d) => d
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(n, &v)| (n, n, c(v)))
                .collect(),
        }
    }

    pub fn matrix(&self) -> CMat {
        let mut m = CMat::zeros(D, D);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
        }
        m
    }

    /// `Tr[G G]`.
    pub fn norm_sq(&self) -> f64 {
        self.entries().iter().map(|(_, _, v)| v.norm_sqr()).sum()
    }

    fn cmp_key(&self, other: &Generator) -> Ordering {
        use Generator::*;
        self.class_rank()
            .cmp(&other.class_rank())
            .then_with(|| match (self, other) {
                (X(a, b), X(c, d)) | (Y(a, b), Y(c, d)) => (a, b).cmp(&(c, d)),
                (W(a), W(b)) | (Z(a), Z(b)) => a.cmp(b),
                (Diag(a), Diag(b)) => a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal),
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i, j) => write!(f, "X({i}{j})"),
            Generator::Y(i, j) => write!(f, "Y({i}{j})"),
            Generator::W(k) => write!(f, "w{k}"),
            Generator::Z(k) => write!(f, "Z{k}"),
            Generator::Diag(d) => {
                write!(f, "diag(")?;
                for (n, v) in d.iter().enumerate() {
                    if n > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn z_diagonal(k: usize) -> [f64; D] {
    assert!((1..=7).contains(&k), "Z index out of range");
    let norm = (2.0 / (k * (k + 1)) as f64).sqrt();
    let mut d = [0.0; D];
    for v in d.iter_mut().take(k) {
        *v = norm;
    }
    d[k] = -(k as f64) * norm;
    d
}

/// All `(i, j)` label pairs with `1 <= i < j <= 8`, lexicographic.
pub fn label_pairs() -> Vec<(u8, u8)> {
    let mut v = Vec::with_capacity(N_PAIRS);
    for i in 1..=D as u8 {
        for j in (i + 1)..=D as u8 {
            v.push((i, j));
        }
    }
    v
}

/// The complete single-qu8it Hermitian basis: 28 X, 28 Y, 8 Walsh.
pub fn hermitian_basis() -> Vec<Generator> {
    let pairs = label_pairs();
    pairs
        .iter()
        .map(|&(i, j)| Generator::X(i, j))
        .chain(pairs.iter().map(|&(i, j)| Generator::Y(i, j)))
        .chain((1..=8).map(Generator::W))
        .collect()
}

#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    pub x: Vec<((u8, u8), CMat)>,
    pub y: Vec<((u8, u8), CMat)>,
    pub z: Vec<CMat>,
    pub w: Vec<CMat>,
}

pub fn build_basis() -> GeneratorBasis {
    let pairs = label_pairs();
    GeneratorBasis {
        x: pairs
            .iter()
            .map(|&(i, j)| ((i, j), Generator::X(i, j).matrix()))
            .collect(),
        y: pairs
            .iter()
            .map(|&(i, j)| ((i, j), Generator::Y(i, j).matrix()))
            .collect(),
        z: (1..=7).map(|k| Generator::Z(k).matrix()).collect(),
        w: (1..=8).map(|k| Generator::W(k).matrix()).collect(),
    }
}

/// Coefficients of a diagonal on `w_1 … w_8`.
pub fn diag_to_walsh(d: &[f64; D]) -> [f64; D] {
    let s = 1.0 / 8f64.sqrt();
    let mut out = [0.0; D];
    for (k, signs) in WALSH_SIGNS.iter().enumerate() {
        out[k] = signs
            .iter()
            .zip(d)
            .map(|(&sg, &v)| sg as f64 * v * s)
            .sum();
    }
    out
}

/// Inverse of [`diag_to_walsh`].
pub fn walsh_to_diag(coeffs: &[f64; D]) -> [f64; D] {
    let s = 1.0 / 8f64.sqrt();
    let mut out = [0.0; D];
    for (k, signs) in WALSH_SIGNS.iter().enumerate() {
        for n in 0..D {
            out[n] += coeffs[k] * signs[n] as f64 * s;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub slot: usize,
    pub gen: Generator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GivensTerm {
    pub coeff: f64,
    /// Sorted by slot; slots not listed carry the identity.
    pub factors: Vec<Factor>,
}

impl GivensTerm {
    fn signature_cmp(&self, other: &GivensTerm) -> Ordering {
        for (a, b) in self.factors.iter().zip(&other.factors) {
            let o = a.slot.cmp(&b.slot).then_with(|| a.gen.cmp_key(&b.gen));
            if o.is_ne() {
                return o;
            }
        }
        self.factors.len().cmp(&other.factors.len())
    }

    pub fn matrix(&self, n_slots: usize) -> CMat {
        let id = CMat::identity(D, D);
        let mut out = CMat::identity(1, 1);
        for s in 0..n_slots {
            let f = self.factors.iter().find(|f| f.slot == s);
            out = match f {
                Some(f) => kron(&out, &f.gen.matrix()),
                None => kron(&out, &id),
            };
        }
        out * c(self.coeff)
    }

    /// True when every factor is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|f| f.gen.is_diagonal())
    }

    /// Number of slots carrying something other than `w_1`.
    pub fn active_slots(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| !f.gen.is_identity_like())
            .count()
    }
}

impl fmt::Display for GivensTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.6}", self.coeff)?;
        for (n, fac) in self.factors.iter().enumerate() {
            let sep = if n == 0 { " " } else { " ⊗ " };
            write!(f, "{sep}{}[{}]", fac.gen, fac.slot)?;
        }
        Ok(())
    }
}

/// Sum of coefficient-weighted tensor products of generators.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GivensTermList {
    pub terms: Vec<GivensTerm>,
}

impl GivensTermList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, coeff: f64, factors: Vec<(usize, Generator)>) -> &mut Self {
        let mut factors: Vec<Factor> = factors
            .into_iter()
            .map(|(slot, gen)| Factor { slot, gen })
            .collect();
        factors.sort_by_key(|f| f.slot);
        self.terms.push(GivensTerm { coeff, factors });
        self
    }

    pub fn extend(&mut self, other: GivensTermList) -> &mut Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for t in &mut self.terms {
            t.coeff *= s;
        }
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sorts terms, merges equal signatures and drops coefficients with
    /// magnitude at or below `tol`.
    pub fn canonicalize(&mut self, tol: f64) {
        self.terms.sort_by(|a, b| a.signature_cmp(b));
        let mut merged: Vec<GivensTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.signature_cmp(&t).is_eq() => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff.abs() > tol);
        self.terms = merged;
    }

    pub fn reconstruct(&self, n_slots: usize) -> CMat {
        let dim = D.pow(n_slots as u32);
        self.terms
            .iter()
            .fold(CMat::zeros(dim, dim), |acc, t| acc + t.matrix(n_slots))
    }

    pub fn coefficient_of(&self, factors: &[(usize, Generator)]) -> f64 {
        self.terms
            .iter()
            .filter(|t| {
                t.factors.len() == factors.len()
                    && t.factors
                        .iter()
                        .zip(factors)
                        .all(|(f, (s, g))| f.slot == *s && f.gen == *g)
            })
            .map(|t| t.coeff)
            .sum()
    }
}

impl fmt::Display for GivensTermList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

const HERMITIAN_TOL: f64 = 1e-12;
const DROP_TOL: f64 = 1e-14;

/// Expands a single-qu8it Hermitian matrix on the X/Y/Walsh basis (slot 0).
pub fn decompose(h: &CMat) -> Result<GivensTermList> {
    assert_eq!(h.shape(), (D, D), "decompose expects an 8×8 matrix");
    ensure_hermitian(h, HERMITIAN_TOL)?;
    let mut list = GivensTermList::new();
    for g in hermitian_basis() {
        let proj: C64 = g
            .entries()
            .iter()
            .map(|&(i, j, v)| v * h[(j, i)])
            .fold(ZERO, |a, b| a + b);
        let coeff = proj.re / g.norm_sq();
        list.push(coeff, vec![(0, g)]);
    }
    list.canonicalize(DROP_TOL);
    Ok(list)
}

/// Expands a two-qu8it Hermitian matrix on the 4096-element product basis.
pub fn decompose_two_site(h: &CMat) -> Result<GivensTermList> {
    assert_eq!(h.shape(), (D * D, D * D), "expects a 64×64 matrix");
    ensure_hermitian(h, HERMITIAN_TOL)?;
    let basis: Vec<(Generator, Vec<(usize, usize, C64)>, f64)> = hermitian_basis()
        .into_iter()
        .map(|g| {
            let e = g.entries();
            let n = g.norm_sq();
            (g, e, n)
        })
        .collect();
    let mut list = GivensTermList::new();
    for (g1, e1, n1) in &basis {
        for (g2, e2, n2) in &basis {
            let mut proj = ZERO;
            for &(i, j, v1) in e1 {
                for &(k, l, v2) in e2 {
                    proj += v1 * v2 * h[(j * D + l, i * D + k)];
                }
            }
            let coeff = proj.re / (n1 * n2);
            if coeff.abs() > DROP_TOL {
                list.push(coeff, vec![(0, g1.clone()), (1, g2.clone())]);
            }
        }
    }
    list.canonicalize(DROP_TOL);
    Ok(list)
}

fn signed_sum(items: &[(f64, u8, u8)], ctor: fn(u8, u8) -> Generator) -> CMat {
    items
        .iter()
        .fold(CMat::zeros(D, D), |acc, &(s, i, j)| acc + ctor(i, j).matrix() * c(s))
}

/// A/B hopping combinations for one colour: `[site parity 0, site parity 1]`.
type Signed = [(f64, u8, u8); 4];

fn a_pattern(color: Color) -> [Signed; 2] {
    match color {
        Color::R => [
            [(1.0, 1, 2), (-1.0, 3, 7), (1.0, 4, 6), (1.0, 5, 8)],
            [(1.0, 1, 2), (1.0, 3, 7), (-1.0, 4, 6), (1.0, 5, 8)],
        ],
        Color::G => [
            [(1.0, 1, 3), (1.0, 2, 7), (-1.0, 4, 5), (1.0, 6, 8)],
            [(1.0, 1, 3), (-1.0, 2, 7), (1.0, 4, 5), (1.0, 6, 8)],
        ],
        Color::B => [
            [(1.0, 1, 4), (-1.0, 2, 6), (1.0, 3, 5), (1.0, 7, 8)],
            [(1.0, 1, 4), (1.0, 2, 6), (-1.0, 3, 5), (1.0, 7, 8)],
        ],
    }
}

/// Label of a C/D charge pair, written as in the restructured h-term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairLabel {
    P12,
    P45,
    P67,
}

impl PairLabel {
    pub const ALL: [PairLabel; 3] = [PairLabel::P12, PairLabel::P45, PairLabel::P67];

    pub fn name(self) -> &'static str {
        match self {
            PairLabel::P12 => "12",
            PairLabel::P45 => "45",
            PairLabel::P67 => "67",
        }
    }

    /// The two Givens pairs combined into `C` and `D`.
    fn pairs(self) -> [(u8, u8); 2] {
        match self {
            PairLabel::P12 => [(2, 3), (5, 6)],
            PairLabel::P45 => [(2, 4), (5, 7)],
            PairLabel::P67 => [(3, 4), (6, 7)],
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupedOperators {
    /// `a[parity][color]`.
    pub a: [[CMat; 3]; 2],
    pub b: [[CMat; 3]; 2],
    /// `c[label]`, indexed like [`PairLabel::ALL`].
    pub c: [CMat; 3],
    pub d: [CMat; 3],
}

pub fn build_grouped_operators() -> GroupedOperators {
    let mk = |ctor: fn(u8, u8) -> Generator| -> [[CMat; 3]; 2] {
        let pat: Vec<[Signed; 2]> = Color::ALL.iter().map(|&col| a_pattern(col)).collect();
        [
            [
                signed_sum(&pat[0][0], ctor),
                signed_sum(&pat[1][0], ctor),
                signed_sum(&pat[2][0], ctor),
            ],
            [
                signed_sum(&pat[0][1], ctor),
                signed_sum(&pat[1][1], ctor),
                signed_sum(&pat[2][1], ctor),
            ],
        ]
    };
    let cd = |label: PairLabel, ctor: fn(u8, u8) -> Generator, second: f64| {
        let [p, q] = label.pairs();
        signed_sum(&[(1.0, p.0, p.1), (second, q.0, q.1)], ctor)
    };
    GroupedOperators {
        a: mk(Generator::X),
        b: mk(Generator::Y),
        c: PairLabel::ALL.map(|l| cd(l, Generator::X, -1.0)),
        d: PairLabel::ALL.map(|l| cd(l, Generator::Y, 1.0)),
    }
}

/// Diagonal literal helper, `diag(entries)`.
pub fn diag_literal(entries: [f64; D]) -> CMat {
    diag(&entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, max_abs, max_abs_diff, trace};
    use crate::qu8it::build_qu8it_operators;
    use crate::su3::gell_mann;

    #[test]
    fn x13_y13_printed() {
        let basis = build_basis();
        let x13 = &basis.x.iter().find(|(p, _)| *p == (1, 3)).unwrap().1;
        let y13 = &basis.y.iter().find(|(p, _)| *p == (1, 3)).unwrap().1;
        assert_eq!(x13[(0, 2)], c(1.0));
        assert_eq!(x13[(2, 0)], c(1.0));
        assert_eq!(y13[(0, 2)], -I);
        assert_eq!(y13[(2, 0)], I);
        assert_eq!(x13.iter().filter(|z| **z != ZERO).count(), 2);
    }

    #[test]
    fn basis_sizes_and_norms() {
        let b = build_basis();
        assert_eq!((b.x.len(), b.y.len(), b.z.len(), b.w.len()), (28, 28, 7, 8));
        for i in 0..8 {
            for j in 0..8 {
                let t = trace(&(&b.w[i] * &b.w[j]));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((t - c(want)).norm() < 1e-15);
            }
        }
        for i in 0..7 {
            for j in 0..7 {
                let t = trace(&(&b.z[i] * &b.z[j]));
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((t - c(want)).norm() < 1e-14);
            }
        }
        assert!(trace(&(&b.w[3] * &b.w[5])).norm() < 1e-15);
    }

    #[test]
    fn w2_printed() {
        let w2 = Generator::W(2).matrix();
        let s = 1.0 / 8f64.sqrt();
        for n in 0..8 {
            let want = if n < 4 { s } else { -s };
            assert!((w2[(n, n)] - c(want)).norm() < 1e-16);
        }
    }

    #[test]
    fn identity_decomposes_to_w1() {
        let list = decompose(&CMat::identity(D, D)).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list.terms[0].factors[0].gen, Generator::W(1));
        assert!((list.terms[0].coeff - 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn baryon_number_walsh_coefficients() {
        let ops = build_qu8it_operators(&gell_mann());
        let list = decompose(&ops.b).unwrap();
        let k = 1.0 / (3.0 * 2f64.sqrt());
        let want = [(1, 6.0 * k), (2, -3.0 * k), (4, -k), (6, -k), (8, -k)];
        assert_eq!(list.len(), want.len());
        for (w, v) in want {
            let got = list.coefficient_of(&[(0, Generator::W(w))]);
            assert!((got - v).abs() < 1e-14, "w{w}: {got} vs {v}");
        }
        assert!(max_abs_diff(&list.reconstruct(1), &ops.b) <= 1e-13);
    }

    /// Trace-projection oracle for Q̃^3: coefficients computed directly from
    /// the matrix entries, independent of `decompose`.
    #[test]
    fn q3_projection_oracle() {
        let ops = build_qu8it_operators(&gell_mann());
        let q3 = &ops.q[2];
        let list = decompose(q3).unwrap();
        for k in 1..=8u8 {
            let want: f64 = (0..8)
                .map(|n| WALSH_SIGNS[k as usize - 1][n] as f64 * q3[(n, n)].re)
                .sum::<f64>()
                / 8f64.sqrt();
            let got = list.coefficient_of(&[(0, Generator::W(k))]);
            assert!((got - want).abs() < 1e-14);
        }
        assert!(list.terms.iter().all(|t| t.is_diagonal()));
        assert!(max_abs_diff(&list.reconstruct(1), q3) <= 1e-13);
    }

    #[test]
    fn non_hermitian_input_rejected() {
        let mut m = CMat::zeros(D, D);
        m[(0, 1)] = c(1.0);
        assert!(decompose(&m).is_err());
    }

    #[test]
    fn walsh_diag_converters_invert() {
        let d = [1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 1.0];
        let back = walsh_to_diag(&diag_to_walsh(&d));
        for n in 0..8 {
            assert!((back[n] - d[n]).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_order_and_merge() {
        let mut list = GivensTermList::new();
        list.push(1.0, vec![(0, Generator::W(2))]);
        list.push(0.5, vec![(0, Generator::X(1, 2))]);
        list.push(0.25, vec![(0, Generator::Y(1, 2))]);
        list.push(0.5, vec![(0, Generator::X(1, 2))]);
        list.push(1e-18, vec![(0, Generator::W(3))]);
        list.canonicalize(1e-15);
        let names: Vec<String> = list.terms.iter().map(|t| t.factors[0].gen.to_string()).collect();
        assert_eq!(names, ["X(12)", "Y(12)", "w2"]);
        assert_eq!(list.terms[0].coeff, 1.0);
    }

    #[test]
    fn grouped_printed_forms() {
        let g = build_grouped_operators();
        let x = |i, j| Generator::X(i, j).matrix();
        let y = |i, j| Generator::Y(i, j).matrix();
        let a1r = x(1, 2) + x(3, 7) - x(4, 6) + x(5, 8);
        assert_eq!(max_abs_diff(&g.a[1][0], &a1r), 0.0);
        let d67 = y(3, 4) + y(6, 7);
        assert_eq!(max_abs_diff(&g.d[2], &d67), 0.0);
        let b0g = y(1, 3) + y(2, 7) - y(4, 5) + y(6, 8);
        assert_eq!(max_abs_diff(&g.b[0][1], &b0g), 0.0);
    }

    #[test]
    fn grouped_members_commute() {
        let g = build_grouped_operators();
        for col in 0..3 {
            let aa = kron(&g.a[0][col], &g.a[1][col]);
            let bb = kron(&g.b[0][col], &g.b[1][col]);
            assert!(max_abs(&commutator(&aa, &bb)) <= 1e-13);
        }
        for k in 0..3 {
            let cc = kron(&g.c[k], &g.c[k]);
            let dd = kron(&g.d[k], &g.d[k]);
            assert!(max_abs(&commutator(&cc, &dd)) <= 1e-13);
        }
    }
}
