//! Jordan-Wigner qubit encoding: three qubits (one per colour) per
//! flavour per staggered site, qubit index `3 N_f n + 3 f + c`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Result;
use crate::linalg::{c, CMat, C64, ZERO};

use super::{
    Block, BlockTag, LatticeModel, LatticeOperator, LatticeParams, LocalOp, Mapping,
    ProductTerm, TermGroup,
};

/// A fermionic mode of the qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitMode {
    pub site: usize,
    pub flavor: usize,
    pub color: usize,
}

impl QubitMode {
    pub fn index(&self, nf: usize) -> usize {
        3 * nf * self.site + 3 * self.flavor + self.color
    }
}

fn mat(entries: [[f64; 2]; 2]) -> CMat {
    CMat::from_fn(2, 2, |i, j| c(entries[i][j]))
}

/// Local qubit matrices; local state 0 is the occupied mode (`σ^z = +1`).
fn sigma_z() -> CMat {
    mat([[1.0, 0.0], [0.0, -1.0]])
}

fn sigma_plus() -> CMat {
    mat([[0.0, 1.0], [0.0, 0.0]])
}

fn sigma_minus() -> CMat {
    mat([[0.0, 0.0], [1.0, 0.0]])
}

/// Names recognisable 2×2 matrices, folding a global sign into the result.
fn identify(m: &CMat) -> Option<(&'static str, f64)> {
    let known: [(&str, CMat); 6] = [
        ("I", CMat::identity(2, 2)),
        ("Z", sigma_z()),
        ("s+", sigma_plus()),
        ("s-", sigma_minus()),
        ("n", mat([[1.0, 0.0], [0.0, 0.0]])),
        ("1-n", mat([[0.0, 0.0], [0.0, 1.0]])),
    ];
    for (name, k) in known.iter() {
        for sign in [1.0, -1.0] {
            if m.iter().zip(k.iter()).all(|(a, b)| *a == b * sign) {
                return Some((name, sign));
            }
        }
    }
    None
}

#[derive(Default)]
struct OpCache {
    ops: BTreeMap<String, Arc<LocalOp>>,
}

impl OpCache {
    fn get(&mut self, name: &str, m: &CMat) -> Arc<LocalOp> {
        self.ops
            .entry(name.to_string())
            .or_insert_with(|| LocalOp::new(name, m.clone()))
            .clone()
    }
}

/// Product of Jordan-Wigner fermion operators, in the given order, as a
/// single qubit product term. `ops` lists `(qubit, is_creation)`.
pub fn jw_product(coeff: f64, ops: &[(usize, bool)]) -> ProductTerm {
    let mut cache = OpCache::default();
    jw_product_cached(&mut cache, coeff, ops)
}

fn jw_product_cached(cache: &mut OpCache, coeff: f64, ops: &[(usize, bool)]) -> ProductTerm {
    let top = ops.iter().map(|(q, _)| *q).max().unwrap_or(0);
    let mut per_slot: Vec<CMat> = vec![CMat::identity(2, 2); top + 1];
    for &(q, create) in ops {
        for m in per_slot.iter_mut().take(q) {
            *m = &*m * sigma_z();
        }
        let ladder = if create { sigma_plus() } else { sigma_minus() };
        per_slot[q] = &per_slot[q] * ladder;
    }
    let mut coeff = coeff;
    let mut factors = Vec::new();
    for (s, m) in per_slot.iter().enumerate() {
        if m.iter().all(|z| *z == ZERO) {
            return ProductTerm::new(0.0, Vec::new());
        }
        match identify(m) {
            Some(("I", sign)) => coeff *= sign,
            Some((name, sign)) => {
                coeff *= sign;
                factors.push((s, cache.get(name, &(m * C64::new(sign, 0.0)))));
            }
            None => factors.push((s, cache.get(&format!("M{s}"), m))),
        }
    }
    ProductTerm::new(coeff, factors)
}

/// `w Σ_a Q_i^a Q_j^a` between two distinct colour triplets starting at
/// qubits `i` and `j`, via the Fierz identity
/// `Σ_a T^a_{αβ} T^a_{γδ} = ½(δ_{αδ}δ_{βγ} − δ_{αβ}δ_{γδ}/3)`.
fn triplet_cross(cache: &mut OpCache, i: usize, j: usize, w: f64) -> Vec<ProductTerm> {
    let z = cache.get("Z", &sigma_z());
    let mut terms = Vec::new();
    for al in 0..3 {
        for be in 0..3 {
            if al != be {
                terms.push(jw_product_cached(
                    cache,
                    0.5 * w,
                    &[(i + al, true), (i + be, false), (j + be, true), (j + al, false)],
                ));
            }
            let kd = if al == be { 3.0 } else { 0.0 };
            terms.push(ProductTerm::new(
                w * (kd - 1.0) / 24.0,
                vec![(i + al, z.clone()), (j + be, z.clone())],
            ));
        }
    }
    terms.retain(|t| t.coeff != 0.0);
    terms
}

/// `w Σ_a Q^a Q^a` on one triplet: `⅓(3 − Z_r Z_g − Z_r Z_b − Z_g Z_b)`.
fn triplet_self(cache: &mut OpCache, i: usize, w: f64) -> Vec<ProductTerm> {
    let z = cache.get("Z", &sigma_z());
    let mut terms = vec![ProductTerm::identity(w)];
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        terms.push(ProductTerm::new(
            -w / 3.0,
            vec![(i + a, z.clone()), (i + b, z.clone())],
        ));
    }
    terms
}

pub fn build_qubit_model(p: &LatticeParams) -> Result<LatticeModel> {
    p.validate()?;
    let mut cache = OpCache::default();
    let z = cache.get("Z", &sigma_z());
    let sp = cache.get("s+", &sigma_plus());
    let sm = cache.get("s-", &sigma_minus());
    let n_sites = p.n_sites();
    let n_qubits = p.qubit_count();
    let q = |n: usize, f: usize, col: usize| QubitMode { site: n, flavor: f, color: col }.index(p.nf);

    let mut kinetic = Vec::new();
    for n in 0..n_sites - 1 {
        for f in 0..p.nf {
            for col in 0..3 {
                let (a, b) = (q(n, f, col), q(n + 1, f, col));
                let string: Vec<(usize, Arc<LocalOp>)> =
                    (a + 1..b).map(|k| (k, z.clone())).collect();
                let mut fwd = vec![(a, sp.clone()), (b, sm.clone())];
                fwd.extend(string.iter().cloned());
                let mut bwd = vec![(a, sm.clone()), (b, sp.clone())];
                bwd.extend(string);
                kinetic.push(TermGroup {
                    label: format!("kin n={n} f={f} c={col}"),
                    terms: vec![ProductTerm::new(-0.5, fwd), ProductTerm::new(-0.5, bwd)],
                });
            }
        }
    }

    let mut mass_terms = Vec::new();
    let mut shift = 0.0;
    for n in 0..n_sites {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for f in 0..p.nf {
            for col in 0..3 {
                mass_terms.push(ProductTerm::new(
                    0.5 * p.masses[f] * sign,
                    vec![(q(n, f, col), z.clone())],
                ));
                shift += 0.5 * p.masses[f];
            }
        }
    }
    mass_terms.push(ProductTerm::identity(shift));
    mass_terms.retain(|t| t.coeff != 0.0);

    let triplets: Vec<(usize, usize)> = (0..n_sites)
        .flat_map(|n| (0..p.nf).map(move |f| (n, f)))
        .collect();
    let top = n_sites - 1;
    let g2 = p.g * p.g;
    let mut electric = Vec::new();
    if g2 != 0.0 {
        for (k, &(n, f)) in triplets.iter().enumerate() {
            let mult = top.saturating_sub(n) as f64;
            if mult > 0.0 {
                electric.push(TermGroup {
                    label: format!("el self n={n} f={f}"),
                    terms: triplet_self(&mut cache, q(n, f, 0), 0.5 * g2 * mult),
                });
            }
            for &(m, f2) in &triplets[k + 1..] {
                let mult = top.saturating_sub(m) as f64;
                if mult > 0.0 {
                    electric.push(TermGroup {
                        label: format!("el n={n} f={f} / n={m} f={f2}"),
                        terms: triplet_cross(&mut cache, q(n, f, 0), q(m, f2, 0), g2 * mult),
                    });
                }
            }
        }
    }

    let h2 = p.h * p.h;
    let mut h_groups = Vec::new();
    if p.include_h && h2 != 0.0 {
        for (k, &(n, f)) in triplets.iter().enumerate() {
            h_groups.push(TermGroup {
                label: format!("h self n={n} f={f}"),
                terms: triplet_self(&mut cache, q(n, f, 0), 0.5 * h2),
            });
            for &(m, f2) in &triplets[k + 1..] {
                h_groups.push(TermGroup {
                    label: format!("h n={n} f={f} / n={m} f={f2}"),
                    terms: triplet_cross(&mut cache, q(n, f, 0), q(m, f2, 0), h2),
                });
            }
        }
    }

    Ok(LatticeModel {
        params: p.clone(),
        mapping: Mapping::Qubit,
        n_slots: n_qubits,
        blocks: vec![
            Block { tag: BlockTag::Kinetic, groups: kinetic },
            Block { tag: BlockTag::Mass, groups: vec![TermGroup { label: "mass".into(), terms: mass_terms }] },
            Block { tag: BlockTag::Electric, groups: electric },
            Block { tag: BlockTag::H, groups: h_groups },
        ],
    })
}

pub fn build_qubit_hamiltonian(p: &LatticeParams) -> Result<LatticeOperator> {
    LatticeOperator::assemble(build_qubit_model(p)?)
}
