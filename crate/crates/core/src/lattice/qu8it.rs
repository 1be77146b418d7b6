//! Qu8it-encoded Hamiltonian: grouped hopping, baryon-number mass term and
//! pairwise charge-charge interactions.

use std::sync::Arc;

use crate::error::Result;
use crate::givens::{build_grouped_operators, PairLabel};
use crate::linalg::CMat;
use crate::qu8it::{build_qu8it_operators, Color};
use crate::su3::gell_mann;

use super::{
    Block, BlockTag, LatticeModel, LatticeOperator, LatticeParams, LocalOp, Mapping,
    ProductTerm, TermGroup,
};

/// Shared single-qu8it operators used by the builder.
#[derive(Debug, Clone)]
pub struct Qu8itLocalOps {
    /// `a[parity][color]`, `b[parity][color]`.
    pub a: [[Arc<LocalOp>; 3]; 2],
    pub b: [[Arc<LocalOp>; 3]; 2],
    pub c: [Arc<LocalOp>; 3],
    pub d: [Arc<LocalOp>; 3],
    pub phase: Arc<LocalOp>,
    pub baryon: Arc<LocalOp>,
    pub casimir: Arc<LocalOp>,
    /// `Q̃^3, Q̃^8` and their anti-quark partners.
    pub q3: Arc<LocalOp>,
    pub q8: Arc<LocalOp>,
    pub qbar3: Arc<LocalOp>,
    pub qbar8: Arc<LocalOp>,
    /// All eight `Q̃^a` and `Q̃̄^a`.
    pub q: Vec<Arc<LocalOp>>,
    pub qbar: Vec<Arc<LocalOp>>,
}

impl Qu8itLocalOps {
    pub fn new() -> Self {
        let ops = build_qu8it_operators(&gell_mann());
        let g = build_grouped_operators();
        let colors = Color::ALL.map(|c| c.name());
        let ab = |mats: &[[CMat; 3]; 2], stem: &str| -> [[Arc<LocalOp>; 3]; 2] {
            [0, 1].map(|p| {
                [0, 1, 2].map(|k| LocalOp::new(format!("{stem}{p}({})", colors[k]), mats[p][k].clone()))
            })
        };
        let labels = PairLabel::ALL.map(|l| l.name());
        let cd = |mats: &[CMat; 3], stem: &str| -> [Arc<LocalOp>; 3] {
            [0, 1, 2].map(|k| LocalOp::new(format!("{stem}({})", labels[k]), mats[k].clone()))
        };
        let q: Vec<Arc<LocalOp>> = (0..8)
            .map(|a| LocalOp::new(format!("Q{}", a + 1), ops.q[a].clone()))
            .collect();
        let qbar: Vec<Arc<LocalOp>> = (0..8)
            .map(|a| LocalOp::new(format!("Qbar{}", a + 1), ops.qbar[a].clone()))
            .collect();
        Qu8itLocalOps {
            a: ab(&g.a, "A"),
            b: ab(&g.b, "B"),
            c: cd(&g.c, "C"),
            d: cd(&g.d, "D"),
            phase: LocalOp::new("P", ops.p.clone()),
            baryon: LocalOp::new("B~", ops.b.clone()),
            casimir: LocalOp::new("QQ", ops.casimir()),
            q3: q[2].clone(),
            q8: q[7].clone(),
            qbar3: qbar[2].clone(),
            qbar8: qbar[7].clone(),
            q,
            qbar,
        }
    }
}

impl Default for Qu8itLocalOps {
    fn default() -> Self {
        Self::new()
    }
}

/// Grouped form of `w Σ_a Q_i^a Q_j^a` for slots `i < j` with the given
/// anti-quark flags: three `{CC, DD}` groups and one diagonal group.
pub fn pair_charge_terms(
    ops: &Qu8itLocalOps,
    i: (usize, bool),
    j: (usize, bool),
    weight: f64,
) -> Vec<(String, Vec<ProductTerm>)> {
    let cc_sign = if i.1 == j.1 { 1.0 } else { -1.0 };
    let mut groups = Vec::with_capacity(4);
    for (k, label) in PairLabel::ALL.iter().enumerate() {
        groups.push((
            format!("CD({})", label.name()),
            vec![
                ProductTerm::new(
                    0.25 * cc_sign * weight,
                    vec![(i.0, ops.c[k].clone()), (j.0, ops.c[k].clone())],
                ),
                ProductTerm::new(
                    0.25 * weight,
                    vec![(i.0, ops.d[k].clone()), (j.0, ops.d[k].clone())],
                ),
            ],
        ));
    }
    let pick = |anti: bool| {
        if anti {
            (ops.qbar3.clone(), ops.qbar8.clone())
        } else {
            (ops.q3.clone(), ops.q8.clone())
        }
    };
    let (i3, i8) = pick(i.1);
    let (j3, j8) = pick(j.1);
    groups.push((
        "Q3Q8".into(),
        vec![
            ProductTerm::new(weight, vec![(i.0, i3), (j.0, j3)]),
            ProductTerm::new(weight, vec![(i.0, i8), (j.0, j8)]),
        ],
    ));
    groups
}

/// Symbolic qu8it Hamiltonian; valid for any register size.
pub fn build_qu8it_model(p: &LatticeParams) -> Result<LatticeModel> {
    p.validate()?;
    let ops = Qu8itLocalOps::new();
    let n_sites = p.n_sites();
    let n_slots = p.qu8it_count();

    let mut kinetic = Vec::new();
    for n in 0..n_sites - 1 {
        for f in 0..p.nf {
            let (s, t) = (p.slot(n, f), p.slot(n + 1, f));
            for color in Color::ALL {
                let k = color.index();
                let mut fa = vec![(s, ops.a[0][k].clone()), (t, ops.a[1][k].clone())];
                let mut fb = vec![(s, ops.b[0][k].clone()), (t, ops.b[1][k].clone())];
                for between in s + 1..t {
                    fa.push((between, ops.phase.clone()));
                    fb.push((between, ops.phase.clone()));
                }
                kinetic.push(TermGroup {
                    label: format!("kin n={n} f={f} {}", color.name()),
                    terms: vec![ProductTerm::new(0.25, fa), ProductTerm::new(-0.25, fb)],
                });
            }
        }
    }

    let mass_terms = (0..n_slots)
        .map(|s| {
            let f = s % p.nf;
            ProductTerm::new(3.0 * p.masses[f], vec![(s, ops.baryon.clone())])
        })
        .filter(|t| t.coeff != 0.0)
        .collect();
    let mass = vec![TermGroup {
        label: "mass".into(),
        terms: mass_terms,
    }];

    let g2 = p.g * p.g;
    let top = n_sites - 1;
    let multiplicity = |slot: usize| top.saturating_sub(p.site_of(slot)) as f64;
    let mut electric = Vec::new();
    if g2 != 0.0 {
        let self_terms: Vec<ProductTerm> = (0..n_slots)
            .filter(|&s| multiplicity(s) > 0.0)
            .map(|s| ProductTerm::new(0.5 * g2 * multiplicity(s), vec![(s, ops.casimir.clone())]))
            .collect();
        if !self_terms.is_empty() {
            electric.push(TermGroup {
                label: "el self".into(),
                terms: self_terms,
            });
        }
        for i in 0..n_slots {
            for j in i + 1..n_slots {
                let w = g2 * multiplicity(j);
                if w == 0.0 {
                    continue;
                }
                for (label, terms) in pair_charge_terms(
                    &ops,
                    (i, p.is_anti_slot(i)),
                    (j, p.is_anti_slot(j)),
                    w,
                ) {
                    electric.push(TermGroup {
                        label: format!("el {i}-{j} {label}"),
                        terms,
                    });
                }
            }
        }
    }

    let mut h_groups = Vec::new();
    let h2 = p.h * p.h;
    if p.include_h && h2 != 0.0 {
        h_groups.push(TermGroup {
            label: "h self".into(),
            terms: (0..n_slots)
                .map(|s| ProductTerm::new(0.5 * h2, vec![(s, ops.casimir.clone())]))
                .collect(),
        });
        for i in 0..n_slots {
            for j in i + 1..n_slots {
                for (label, terms) in pair_charge_terms(
                    &ops,
                    (i, p.is_anti_slot(i)),
                    (j, p.is_anti_slot(j)),
                    h2,
                ) {
                    h_groups.push(TermGroup {
                        label: format!("h {i}-{j} {label}"),
                        terms,
                    });
                }
            }
        }
    }

    Ok(LatticeModel {
        params: p.clone(),
        mapping: Mapping::Qu8it,
        n_slots,
        blocks: vec![
            Block { tag: BlockTag::Kinetic, groups: kinetic },
            Block { tag: BlockTag::Mass, groups: mass },
            Block { tag: BlockTag::Electric, groups: electric },
            Block { tag: BlockTag::H, groups: h_groups },
        ],
    })
}

pub fn build_qu8it_hamiltonian(p: &LatticeParams) -> Result<LatticeOperator> {
    LatticeOperator::assemble(build_qu8it_model(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, kron, max_abs_diff};
    use crate::qu8it::build_qu8it_operators;

    fn direct_pair(anti_i: bool, anti_j: bool) -> CMat {
        let ops = build_qu8it_operators(&gell_mann());
        (0..8).fold(CMat::zeros(64, 64), |acc, a| {
            acc + kron(&ops.charges(anti_i)[a], &ops.charges(anti_j)[a])
        })
    }

    #[test]
    fn grouped_pair_matches_direct_contraction() {
        let ops = Qu8itLocalOps::new();
        for (ai, aj) in [(false, false), (true, true), (false, true), (true, false)] {
            let total = pair_charge_terms(&ops, (0, ai), (1, aj), 1.0)
                .into_iter()
                .flat_map(|(_, t)| t)
                .fold(CMat::zeros(64, 64), |acc, t| acc + t.local_matrix(&[0, 1], 8));
            let r = max_abs_diff(&total, &direct_pair(ai, aj));
            assert!(r <= 1e-13, "({ai},{aj}) residual {r}");
        }
    }

    #[test]
    fn electric_is_diagonal_at_l1() {
        let p = LatticeParams::uniform(1, 1, 1.0, 1.7, 0.0);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        let el = h.block(BlockTag::Electric).unwrap();
        assert!(el.is_diagonal());
        let want = 2.0 * 1.7 * 1.7 / 3.0;
        for k in 0..64 {
            let first = k / 8;
            let expect = if first == 0 || first == 7 { 0.0 } else { want };
            assert!((el.get(k, k) - c(expect)).norm() < 1e-13);
        }
    }

    #[test]
    fn kinetic_counts_and_strings() {
        let p = LatticeParams::uniform(2, 1, 1.0, 1.0, 1.0);
        let m = build_qu8it_model(&p).unwrap();
        let kin = m.block(BlockTag::Kinetic).unwrap();
        assert_eq!(kin.groups.len(), 6);
        for t in kin.terms() {
            assert_eq!(t.slots().len(), 3);
            assert_eq!(t.core_slots().len(), 2);
        }
    }

    #[test]
    fn assembled_is_hermitian_and_blocks_sum() {
        let p = LatticeParams::uniform(1, 1, 0.8, 1.1, 0.6);
        let h = build_qu8it_hamiltonian(&p).unwrap();
        assert!(h.matrix.hermiticity_residual() <= 1e-12);
        let mut sum = crate::sparse::CsrMatrix::zeros(64);
        for (_, b) in &h.blocks {
            sum = sum.add(b).unwrap();
        }
        assert_eq!(sum.max_abs_diff(&h.matrix).unwrap(), 0.0);
    }
}
