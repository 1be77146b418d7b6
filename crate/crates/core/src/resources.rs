//! Entangling-gate counts for the qubit and qu8it encodings, closed form and
//! enumerated from the grouped qu8it Hamiltonian.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::givens::{decompose_two_site, Generator, GivensTermList};
use crate::lattice::{build_qu8it_model, BlockTag, LatticeModel, LatticeParams, Mapping, ProductTerm};
use crate::linalg::{real_rank, CMat};

/// Controlled two-level gates per two-qu8it Givens rotation.
pub const CONTROLLED_PER_GIVENS: usize = 6;
/// Single-qu8it rotations per two-qu8it Givens rotation.
pub const SINGLES_PER_GIVENS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountSource {
    ClosedForm,
    Enumerated,
}

/// Individual two-qu8it Givens terms before grouping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UngroupedCounts {
    pub kinetic: usize,
    pub electric: usize,
    pub h: usize,
}

impl UngroupedCounts {
    pub fn total(&self) -> usize {
        self.kinetic + self.electric + self.h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport {
    pub mapping: Mapping,
    pub source: CountSource,
    pub nf: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub qudit_count: usize,
    pub kinetic_entangling: usize,
    pub electric_entangling: usize,
    /// Grouped h-term steps (qu8it only).
    pub h_entangling: Option<usize>,
    pub ungrouped: Option<UngroupedCounts>,
    pub single_diagonal_terms: Option<usize>,
    pub controlled_gate_count: Option<usize>,
    pub single_rotation_count: Option<usize>,
}

fn lowering(ungrouped: usize, single_diag: usize) -> (usize, usize) {
    (
        CONTROLLED_PER_GIVENS * ungrouped,
        SINGLES_PER_GIVENS * ungrouped + single_diag,
    )
}

/// Two-qu8it Givens terms in the kinetic hop of one link and flavour.
pub const UNGROUPED_KINETIC_PER_LINK: usize = 96;
/// Two-qu8it terms in one charge-charge pair (24 X/Y plus 2 diagonal).
pub const UNGROUPED_PER_CHARGE_PAIR: usize = 26;

/// Table-I style counts from the closed-form expressions.
pub fn closed_form_counts(p: &LatticeParams, mapping: Mapping) -> ResourceReport {
    let (nf, l) = (p.nf, p.l);
    let m = nf * (2 * l - 1);
    match mapping {
        Mapping::Qubit => ResourceReport {
            mapping,
            source: CountSource::ClosedForm,
            nf,
            l,
            qudit_count: 6 * nf * l,
            kinetic_entangling: 6 * nf * (8 * l - 3) - 4,
            electric_entangling: m * (23 * m).saturating_sub(17),
            h_entangling: None,
            ungrouped: None,
            single_diagonal_terms: None,
            controlled_gate_count: None,
            single_rotation_count: None,
        },
        Mapping::Qu8it => {
            let s = 2 * nf * l;
            let h_pairs = if p.include_h { s * (s - 1) / 2 } else { 0 };
            let ungrouped = UngroupedCounts {
                kinetic: UNGROUPED_KINETIC_PER_LINK * m,
                electric: UNGROUPED_PER_CHARGE_PAIR * m * (m - 1) / 2,
                h: UNGROUPED_PER_CHARGE_PAIR * h_pairs,
            };
            // Mass on every slot, electric self-energy on the first M slots,
            // h self-energy on every slot.
            let single = s + m + if p.include_h { s } else { 0 };
            let (controlled, singles) = lowering(ungrouped.total(), single);
            ResourceReport {
                mapping,
                source: CountSource::ClosedForm,
                nf,
                l,
                qudit_count: s,
                kinetic_entangling: 6 * m,
                electric_entangling: 4 * m * (m - 1),
                h_entangling: Some(8 * h_pairs),
                ungrouped: Some(ungrouped),
                single_diagonal_terms: Some(single),
                controlled_gate_count: Some(controlled),
                single_rotation_count: Some(singles),
            }
        }
    }
}

/// `(qudits, U_kin, U_el)` ratios qubit/qu8it; `None` where the qu8it count
/// vanishes.
pub fn reduction_ratios(p: &LatticeParams) -> [Option<f64>; 3] {
    let q2 = closed_form_counts(p, Mapping::Qubit);
    let q8 = closed_form_counts(p, Mapping::Qu8it);
    let r = |a: usize, b: usize| (b != 0).then(|| a as f64 / b as f64);
    [
        r(q2.qudit_count, q8.qudit_count),
        r(q2.kinetic_entangling, q8.kinetic_entangling),
        r(q2.electric_entangling, q8.electric_entangling),
    ]
}

/// `L → ∞` limits of [`reduction_ratios`]: `(3, 4, 23/4)`.
pub fn asymptotic_ratios() -> [f64; 3] {
    [3.0, 48.0 / 12.0, 23.0 / 4.0]
}

/// Counts two-qudit terms of an expansion: every term with a non-diagonal
/// factor is one rotation, and the diagonal⊗diagonal part (identity
/// direction excluded) costs its rank.
pub fn count_two_site_terms(list: &GivensTermList) -> usize {
    let mut diag = DMatrix::<f64>::zeros(7, 7);
    let mut off = 0;
    for t in &list.terms {
        if t.factors.len() != 2 {
            continue;
        }
        let (a, b) = (&t.factors[0].gen, &t.factors[1].gen);
        match (a, b) {
            (Generator::W(i), Generator::W(j)) if *i > 1 && *j > 1 => {
                diag[(*i as usize - 2, *j as usize - 2)] += t.coeff;
            }
            _ if a.is_diagonal() && b.is_diagonal() => {}
            _ => off += 1,
        }
    }
    off + real_rank(&diag, 1e-12)
}

fn core_sum(terms: &[&ProductTerm], core: &[usize]) -> CMat {
    terms.iter().fold(CMat::zeros(64, 64), |acc, t| {
        let stripped = ProductTerm::new(
            t.coeff,
            t.factors.iter().filter(|(s, _)| core.contains(s)).cloned().collect(),
        );
        acc + stripped.local_matrix(core, 8)
    })
}

fn signature(terms: &[&ProductTerm]) -> String {
    let scale = terms.first().map(|t| t.coeff.abs()).unwrap_or(1.0);
    let mut s = String::new();
    for t in terms {
        let _ = write!(s, "{:.12}", t.coeff / scale);
        for (_, op) in &t.factors {
            let _ = write!(s, ",{}", op.name);
        }
        s.push(';');
    }
    s
}

/// Ungrouped two-qudit rotation count of one block: entangling terms are
/// collected per core slot pair, summed and expanded on the Givens basis.
fn ungrouped_block(model: &LatticeModel, tag: BlockTag, cache: &mut BTreeMap<String, usize>) -> Result<usize> {
    let Some(block) = model.block(tag) else { return Ok(0) };
    let mut by_pair: BTreeMap<Vec<usize>, Vec<&ProductTerm>> = BTreeMap::new();
    for t in block.terms().filter(|t| t.is_entangling() && t.coeff != 0.0) {
        by_pair.entry(t.core_slots()).or_default().push(t);
    }
    let mut total = 0;
    for (core, terms) in by_pair {
        let key = signature(&terms);
        let n = match cache.get(&key) {
            Some(&n) => n,
            None => {
                let list = decompose_two_site(&core_sum(&terms, &core))?;
                let n = count_two_site_terms(&list);
                cache.insert(key, n);
                n
            }
        };
        total += n;
    }
    Ok(total)
}

/// Counts from the grouped qu8it Hamiltonian itself; all couplings should
/// be nonzero so that no block is empty.
pub fn enumerate_circuit_counts(p: &LatticeParams, include_h: bool) -> Result<ResourceReport> {
    let mut p = p.clone();
    p.include_h = include_h;
    let model = build_qu8it_model(&p)?;
    let grouped = |tag| {
        model
            .block(tag)
            .map(|b| b.terms().filter(|t| t.is_entangling() && t.coeff != 0.0).count())
            .unwrap_or(0)
    };
    let mut cache = BTreeMap::new();
    let ungrouped = UngroupedCounts {
        kinetic: ungrouped_block(&model, BlockTag::Kinetic, &mut cache)?,
        electric: ungrouped_block(&model, BlockTag::Electric, &mut cache)?,
        h: ungrouped_block(&model, BlockTag::H, &mut cache)?,
    };
    let single = model
        .terms()
        .filter(|t| t.factors.len() == 1 && t.is_diagonal() && t.coeff != 0.0)
        .count();
    let (controlled, singles) = lowering(ungrouped.total(), single);
    Ok(ResourceReport {
        mapping: Mapping::Qu8it,
        source: CountSource::Enumerated,
        nf: p.nf,
        l: p.l,
        qudit_count: model.n_slots,
        kinetic_entangling: grouped(BlockTag::Kinetic),
        electric_entangling: grouped(BlockTag::Electric),
        h_entangling: Some(grouped(BlockTag::H)),
        ungrouped: Some(ungrouped),
        single_diagonal_terms: Some(single),
        controlled_gate_count: Some(controlled),
        single_rotation_count: Some(singles),
    })
}

/// Aligned text table: one row per `(N_f, L)`, qubit and qu8it columns.
pub fn render_table(rows: &[(usize, usize)]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>4} {:>4} | {:>8} {:>10} {:>12} | {:>8} {:>10} {:>12} | {:>6} {:>6} {:>6}",
        "N_f", "L", "qubits", "U_kin", "U_el", "qu8its", "U_kin", "U_el", "r_q", "r_kin", "r_el"
    );
    for &(nf, l) in rows {
        let p = LatticeParams::uniform(nf, l, 1.0, 1.0, 1.0);
        let a = closed_form_counts(&p, Mapping::Qubit);
        let b = closed_form_counts(&p, Mapping::Qu8it);
        let fmt = |r: Option<f64>| r.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
        let [rq, rk, re] = reduction_ratios(&p);
        let _ = writeln!(
            out,
            "{:>4} {:>4} | {:>8} {:>10} {:>12} | {:>8} {:>10} {:>12} | {:>6} {:>6} {:>6}",
            nf,
            l,
            a.qudit_count,
            a.kinetic_entangling,
            a.electric_entangling,
            b.qudit_count,
            b.kinetic_entangling,
            b.electric_entangling,
            fmt(rq),
            fmt(rk),
            fmt(re)
        );
    }
    out
}
