//! Exact and Trotterized time evolution with observable tracking.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::krylov::{expm_apply, KRYLOV_DIM};
use crate::lattice::{
    conserved_charges, BlockTag, LatticeModel, LatticeOperator, ProductTerm,
};
use crate::linalg::{commutator, max_abs, CMat, CVec, HermitianEigen, C64, ZERO};
use crate::sparse::{CsrMatrix, DEFAULT_DENSE_CAP};

/// Norm tolerance for evolved states.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for commutators inside a Trotter group.
pub const GROUP_COMMUTATOR_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: CVec,
}

impl StateVector {
    pub fn new(amplitudes: CVec) -> Self {
        StateVector { amplitudes }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVec::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        StateVector { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes /= C64::new(n, 0.0);
        }
        self
    }

    pub fn overlap(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.overlap(other).norm_sqr()
    }
}

/// `⟨ψ|O|ψ⟩` for each operator; fails on dimension mismatch or a
/// non-negligible imaginary part.
pub fn observables(psi: &StateVector, ops: &[&CsrMatrix]) -> Result<Vec<f64>> {
    ops.iter()
        .map(|o| {
            if o.dim != psi.dim() {
                return Err(Error::DimensionMismatch {
                    expected: o.dim,
                    found: psi.dim(),
                });
            }
            let e = o.expectation(&psi.amplitudes);
            let tol = 1e-12 * (1.0 + e.re.abs());
            if e.im.abs() > tol {
                return Err(Error::NonHermitianInput {
                    residual: e.im.abs(),
                    tolerance: tol,
                });
            }
            Ok(e.re)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactMethod {
    Dense,
    Krylov,
}

/// `exp(-iHt)` by dense eigendecomposition (dim within the cap) or Krylov.
#[derive(Debug, Clone)]
pub struct ExactEvolver {
    matrix: CsrMatrix,
    eigen: Option<HermitianEigen>,
}

impl ExactEvolver {
    pub fn new(h: &CsrMatrix, method: ExactMethod, dense_cap: usize) -> Result<Self> {
        let eigen = match method {
            ExactMethod::Dense => Some(HermitianEigen::new(&h.to_dense(dense_cap)?)),
            ExactMethod::Krylov => None,
        };
        Ok(ExactEvolver {
            matrix: h.clone(),
            eigen,
        })
    }

    /// Dense when `dim <= dense_cap`, Krylov otherwise.
    pub fn auto(h: &CsrMatrix, dense_cap: usize) -> Result<Self> {
        let method = if h.dim <= dense_cap {
            ExactMethod::Dense
        } else {
            ExactMethod::Krylov
        };
        Self::new(h, method, dense_cap)
    }

    pub fn method(&self) -> ExactMethod {
        if self.eigen.is_some() {
            ExactMethod::Dense
        } else {
            ExactMethod::Krylov
        }
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.matrix.dim {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.dim,
                found: psi.dim(),
            });
        }
        if t == 0.0 {
            return Ok(psi.clone());
        }
        let out = match &self.eigen {
            Some(e) => {
                let coeffs = e.vectors.adjoint() * &psi.amplitudes;
                let phased = CVec::from_iterator(
                    coeffs.len(),
                    coeffs
                        .iter()
                        .zip(&e.values)
                        .map(|(c, &ev)| c * C64::new(0.0, -ev * t).exp()),
                );
                &e.vectors * phased
            }
            None => expm_apply(&self.matrix, &psi.amplitudes, t, KRYLOV_DIM, 1e-13),
        };
        Ok(StateVector::new(out))
    }
}

/// `exp(-iHt) ψ0`, dense up to `DEFAULT_DENSE_CAP`, Krylov beyond.
pub fn exact_evolve(h: &LatticeOperator, psi0: &StateVector, t: f64) -> Result<StateVector> {
    ExactEvolver::auto(&h.matrix, DEFAULT_DENSE_CAP)?.evolve(psi0, t)
}

#[derive(Debug, Clone)]
enum StepKind {
    /// Diagonal energies over the whole register.
    Phase { energies: Vec<f64> },
    /// Exponential acting on `core` slots, with `±1` diagonal controls.
    Local {
        core: Vec<usize>,
        controls: Vec<(usize, Vec<f64>)>,
        eigen: HermitianEigen,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct StepInfo {
    pub tag: BlockTag,
    pub group: String,
    pub term: String,
    pub core_slots: Vec<usize>,
    pub control_slots: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TrotterStep {
    pub info: StepInfo,
    kind: StepKind,
}

impl TrotterStep {
    /// Two or more core slots.
    pub fn is_entangling(&self) -> bool {
        self.info.core_slots.len() >= 2
    }
}

/// Ordered exponentials: kinetic groups, diagonal mass and electric phase,
/// cross-site electric groups, then h groups. Order 2 runs the list forward
/// and backward with half steps.
#[derive(Debug, Clone)]
pub struct TrotterPlan {
    pub order: u8,
    pub n_slots: usize,
    pub local_dim: usize,
    pub steps: Vec<TrotterStep>,
    /// Largest commutator found between members of one group.
    pub max_group_commutator: f64,
}

fn split_controls(term: &ProductTerm) -> (Vec<usize>, Vec<(usize, Vec<f64>)>) {
    let mut core = Vec::new();
    let mut controls = Vec::new();
    for (s, op) in &term.factors {
        if op.is_sign_diagonal() {
            controls.push((*s, (0..op.matrix.nrows()).map(|i| op.matrix[(i, i)].re).collect()));
        } else {
            core.push(*s);
        }
    }
    (core, controls)
}

fn core_term(term: &ProductTerm, core: &[usize]) -> ProductTerm {
    ProductTerm::new(
        term.coeff,
        term.factors
            .iter()
            .filter(|(s, _)| core.contains(s))
            .cloned()
            .collect(),
    )
}

const COMMUTATOR_CHECK_DIM: usize = 512;

fn group_commutator(terms: &[ProductTerm], local_dim: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            let (ca, ka) = split_controls(a);
            let (cb, kb) = split_controls(b);
            let same_controls = ka.len() == kb.len()
                && ka.iter().zip(&kb).all(|(x, y)| x.0 == y.0 && x.1 == y.1);
            let (ta, tb, slots) = if same_controls {
                let mut u: Vec<usize> = ca.iter().chain(&cb).copied().collect();
                u.sort_unstable();
                u.dedup();
                (core_term(a, &ca), core_term(b, &cb), u)
            } else {
                let mut u: Vec<usize> = a.slots().into_iter().chain(b.slots()).collect();
                u.sort_unstable();
                u.dedup();
                (a.clone(), b.clone(), u)
            };
            if local_dim.pow(slots.len() as u32) > COMMUTATOR_CHECK_DIM {
                return Err(Error::InvalidParams(format!(
                    "cannot verify commutation on {} slots",
                    slots.len()
                )));
            }
            let ma = ta.local_matrix(&slots, local_dim);
            let mb = tb.local_matrix(&slots, local_dim);
            worst = worst.max(max_abs(&commutator(&ma, &mb)));
        }
    }
    Ok(worst)
}

/// Newton-Schulz polishing `U <- U (3 - U†U) / 2`. Removes the
/// non-orthogonality left by the eigensolver, which otherwise shows up as
/// norm drift over long runs.
fn unitarize(mut u: CMat) -> CMat {
    let n = u.nrows();
    let three = CMat::identity(n, n) * C64::new(3.0, 0.0);
    for _ in 0..2 {
        let gram = u.adjoint() * &u;
        u = &u * (&three - gram) * C64::new(0.5, 0.0);
    }
    u
}

fn term_label(t: &ProductTerm) -> String {
    t.to_string()
}

impl TrotterPlan {
    pub fn build(model: &LatticeModel, order: u8) -> Result<Self> {
        if order != 1 && order != 2 {
            return Err(Error::InvalidParams(format!("Trotter order must be 1 or 2, got {order}")));
        }
        let local_dim = model.local_dim();
        let mut steps = Vec::new();
        let mut worst: f64 = 0.0;
        let diag_step = |tag: BlockTag, label: &str, terms: Vec<&ProductTerm>| -> Result<Option<TrotterStep>> {
            if terms.is_empty() {
                return Ok(None);
            }
            let m = model.assemble_terms(terms.iter().copied())?;
            let energies = m.diagonal().iter().map(|z| z.re).collect();
            Ok(Some(TrotterStep {
                info: StepInfo {
                    tag,
                    group: label.to_string(),
                    term: format!("{} diagonal terms", terms.len()),
                    core_slots: Vec::new(),
                    control_slots: Vec::new(),
                },
                kind: StepKind::Phase { energies },
            }))
        };
        let is_single_diag = |t: &ProductTerm| t.is_diagonal() && t.factors.len() <= 1;

        let mut diag_terms: Vec<&ProductTerm> = Vec::new();
        for tag in BlockTag::ALL {
            let Some(block) = model.block(tag) else { continue };
            if tag == BlockTag::Electric || tag == BlockTag::H {
                // Single-slot diagonal pieces join the mass phase (electric)
                // or get their own phase step (h).
                diag_terms.extend(block.terms().filter(|t| is_single_diag(t)));
                let label = if tag == BlockTag::Electric { "mass+electric diagonal" } else { "h diagonal" };
                if let Some(s) = diag_step(
                    if tag == BlockTag::Electric { BlockTag::Mass } else { BlockTag::H },
                    label,
                    std::mem::take(&mut diag_terms),
                )? {
                    steps.push(s);
                }
            }
            for group in &block.groups {
                let members: Vec<&ProductTerm> =
                    group.terms.iter().filter(|t| !is_single_diag(t)).collect();
                if tag == BlockTag::Mass {
                    diag_terms.extend(group.terms.iter().filter(|t| is_single_diag(t)));
                }
                if members.is_empty() {
                    continue;
                }
                let owned: Vec<ProductTerm> = members.iter().map(|t| (*t).clone()).collect();
                worst = worst.max(group_commutator(&owned, local_dim)?);
                for t in members {
                    steps.push(Self::local_step(tag, &group.label, t, local_dim)?);
                }
            }
        }
        if worst > GROUP_COMMUTATOR_TOL {
            return Err(Error::InvalidParams(format!(
                "Trotter group members do not commute (max commutator {worst:e})"
            )));
        }
        Ok(TrotterPlan {
            order,
            n_slots: model.n_slots,
            local_dim,
            steps,
            max_group_commutator: worst,
        })
    }

    fn local_step(tag: BlockTag, group: &str, t: &ProductTerm, local_dim: usize) -> Result<TrotterStep> {
        let (core, controls) = split_controls(t);
        let k = core_term(t, &core).local_matrix(&core, local_dim);
        if max_abs(&(&k - k.adjoint())) > 1e-12 {
            return Err(Error::NonHermitianInput {
                residual: max_abs(&(&k - k.adjoint())),
                tolerance: 1e-12,
            });
        }
        Ok(TrotterStep {
            info: StepInfo {
                tag,
                group: group.to_string(),
                term: term_label(t),
                core_slots: core.clone(),
                control_slots: controls.iter().map(|(s, _)| *s).collect(),
            },
            kind: StepKind::Local {
                core,
                controls,
                eigen: HermitianEigen::new(&k),
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n_slots as u32)
    }

    pub fn entangling_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.is_entangling()).count()
    }

    pub fn count_by_tag(&self, tag: BlockTag) -> usize {
        self.steps
            .iter()
            .filter(|s| s.info.tag == tag && s.is_entangling())
            .count()
    }

    /// `(step index, duration)` sequence for one Trotter step of size `dt`.
    pub fn schedule(&self, dt: f64) -> Vec<(usize, f64)> {
        let n = self.steps.len();
        match self.order {
            1 => (0..n).map(|i| (i, dt)).collect(),
            _ => (0..n).chain((0..n).rev()).map(|i| (i, dt / 2.0)).collect(),
        }
    }

    /// Precomputes the unitaries for a fixed step size.
    pub fn prepare(&self, dt: f64) -> PreparedStep {
        let mut cache: BTreeMap<(usize, u64), PreparedOp> = BTreeMap::new();
        let schedule = self.schedule(dt);
        for &(i, tau) in &schedule {
            cache
                .entry((i, tau.to_bits()))
                .or_insert_with(|| self.prepare_op(&self.steps[i], tau));
        }
        let mut ops: Vec<PreparedOp> = Vec::new();
        for &(i, tau) in &schedule {
            let next = cache[&(i, tau.to_bits())].clone();
            if let (
                Some(PreparedOp::Local { plus: u1, minus: None, offsets: o1, .. }),
                PreparedOp::Local { plus: u2, minus: None, offsets: o2, .. },
            ) = (ops.last_mut(), &next)
            {
                if o1 == o2 {
                    // Same slots without controls: apply both as one product.
                    *u1 = u2 * &*u1;
                    continue;
                }
            }
            ops.push(next);
        }
        for op in &mut ops {
            if let PreparedOp::Local { plus, .. } = op {
                *plus = unitarize(plus.clone());
            }
        }
        PreparedStep { ops }
    }

    fn prepare_op(&self, step: &TrotterStep, tau: f64) -> PreparedOp {
        let d = self.local_dim;
        let n = self.n_slots;
        let stride = |s: usize| d.pow((n - 1 - s) as u32);
        match &step.kind {
            StepKind::Phase { energies } => PreparedOp::Phase(
                energies.iter().map(|&e| C64::new(0.0, -e * tau).exp()).collect(),
            ),
            StepKind::Local { core, controls, eigen } => {
                let m = eigen.values.len();
                let unitary = |sign: f64| -> CMat {
                    let phases = CVec::from_iterator(
                        m,
                        eigen.values.iter().map(|&e| C64::new(0.0, -sign * e * tau).exp()),
                    );
                    unitarize(&eigen.vectors * CMat::from_diagonal(&phases) * eigen.vectors.adjoint())
                };
                let strides: Vec<usize> = core.iter().map(|&s| stride(s)).collect();
                let offsets: Vec<usize> = (0..m)
                    .map(|j| {
                        let mut rest = j;
                        let mut off = 0;
                        for k in (0..core.len()).rev() {
                            off += (rest % d) * strides[k];
                            rest /= d;
                        }
                        off
                    })
                    .collect();
                let dim = self.dim();
                let mut bases = Vec::with_capacity(dim / m);
                let mut signs = Vec::with_capacity(dim / m);
                for idx in 0..dim {
                    if strides.iter().any(|&st| (idx / st) % d != 0) {
                        continue;
                    }
                    let sign: f64 = controls
                        .iter()
                        .map(|(s, diag)| diag[(idx / stride(*s)) % d])
                        .product();
                    bases.push(idx);
                    signs.push(sign < 0.0);
                }
                PreparedOp::Local {
                    plus: unitary(1.0),
                    minus: if controls.is_empty() { None } else { Some(unitary(-1.0)) },
                    offsets,
                    bases,
                    negative: signs,
                }
            }
        }
    }

    /// `steps` Trotter steps of size `t / steps`, recording observables
    /// after every step (and at t = 0).
    pub fn evolve(
        &self,
        psi0: &StateVector,
        t: f64,
        steps: usize,
        tracker: &mut dyn FnMut(usize, f64, &StateVector) -> Result<()>,
    ) -> Result<StateVector> {
        if steps == 0 {
            return Err(Error::InvalidParams("steps must be at least 1".into()));
        }
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi0.dim(),
            });
        }
        let dt = t / steps as f64;
        let prepared = self.prepare(dt);
        let mut psi = psi0.clone();
        tracker(0, 0.0, &psi)?;
        for k in 1..=steps {
            prepared.apply(&mut psi);
            tracker(k, dt * k as f64, &psi)?;
        }
        Ok(psi)
    }
}

#[derive(Debug, Clone)]
enum PreparedOp {
    Phase(Vec<C64>),
    Local {
        plus: CMat,
        minus: Option<CMat>,
        offsets: Vec<usize>,
        bases: Vec<usize>,
        negative: Vec<bool>,
    },
}

/// One full Trotter step with its unitaries precomputed.
#[derive(Debug, Clone)]
pub struct PreparedStep {
    ops: Vec<PreparedOp>,
}

impl PreparedStep {
    pub fn apply(&self, psi: &mut StateVector) {
        let v = &mut psi.amplitudes;
        for op in &self.ops {
            match op {
                PreparedOp::Phase(ph) => {
                    for (a, p) in v.iter_mut().zip(ph) {
                        *a *= p;
                    }
                }
                PreparedOp::Local { plus, minus, offsets, bases, negative } => {
                    let m = offsets.len();
                    let mut buf = vec![ZERO; m];
                    for (&base, &neg) in bases.iter().zip(negative) {
                        let u = if neg { minus.as_ref().unwrap_or(plus) } else { plus };
                        for (j, &off) in offsets.iter().enumerate() {
                            buf[j] = v[base + off];
                        }
                        for (r, &off) in offsets.iter().enumerate() {
                            let mut acc = ZERO;
                            for (cidx, b) in buf.iter().enumerate() {
                                acc += u[(r, cidx)] * b;
                            }
                            v[base + off] = acc;
                        }
                    }
                }
            }
        }
    }
}

pub fn build_trotter_plan(h: &LatticeOperator, order: u8) -> Result<TrotterPlan> {
    TrotterPlan::build(&h.model, order)
}

/// Standard observables of a qu8it register.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    /// Net baryon number per staggered site (diagonal).
    pub site_baryon: Vec<Vec<f64>>,
    pub baryon: CsrMatrix,
    pub casimir: CsrMatrix,
    pub electric: Option<CsrMatrix>,
    pub hamiltonian: CsrMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObservableRecord {
    pub step: usize,
    pub t: f64,
    pub norm: f64,
    pub energy: f64,
    pub baryon: f64,
    pub casimir: f64,
    pub electric: f64,
    pub site_baryon: Vec<f64>,
    pub fidelity: Option<f64>,
}

impl ObservableSet {
    pub fn new(h: &LatticeOperator) -> Result<Self> {
        let p = &h.model.params;
        let dim = h.dim();
        let charges = conserved_charges(p)?;
        let occ = crate::qu8it::Qu8itBasis::default().occupation;
        let n = p.qu8it_count();
        let mut site_baryon = vec![vec![0.0; dim]; p.n_sites()];
        for idx in 0..dim {
            let mut rest = idx;
            for slot in (0..n).rev() {
                let o = occ[rest % 8] as f64 / 3.0;
                rest /= 8;
                let site = p.site_of(slot);
                site_baryon[site][idx] += if p.is_anti_slot(slot) { -o } else { o };
            }
        }
        Ok(ObservableSet {
            site_baryon,
            baryon: charges.baryon,
            casimir: charges.casimir,
            electric: h.block(BlockTag::Electric).cloned(),
            hamiltonian: h.matrix.clone(),
        })
    }

    pub fn measure(&self, step: usize, t: f64, psi: &StateVector, reference: Option<&StateVector>) -> Result<ObservableRecord> {
        let zero = CsrMatrix::zeros(psi.dim());
        let el = self.electric.as_ref().unwrap_or(&zero);
        let v = observables(psi, &[&self.hamiltonian, &self.baryon, &self.casimir, el])?;
        let site_baryon = self
            .site_baryon
            .iter()
            .map(|d| {
                d.iter()
                    .zip(psi.amplitudes.iter())
                    .map(|(b, a)| b * a.norm_sqr())
                    .sum()
            })
            .collect();
        Ok(ObservableRecord {
            step,
            t,
            norm: psi.norm(),
            energy: v[0],
            baryon: v[1],
            casimir: v[2],
            electric: v[3],
            site_baryon,
            fidelity: reference.map(|r| r.fidelity(psi)),
        })
    }
}

/// Trotter trajectory with observables, plus fidelity against exact
/// evolution when an exact evolver is supplied.
pub fn trotter_evolve(
    plan: &TrotterPlan,
    obs: &ObservableSet,
    psi0: &StateVector,
    t: f64,
    steps: usize,
    exact: Option<&ExactEvolver>,
) -> Result<(StateVector, Vec<ObservableRecord>)> {
    let mut records = Vec::with_capacity(steps + 1);
    let mut tracker = |k: usize, time: f64, psi: &StateVector| -> Result<()> {
        let reference = match exact {
            Some(e) => Some(e.evolve(psi0, time)?),
            None => None,
        };
        records.push(obs.measure(k, time, psi, reference.as_ref())?);
        Ok(())
    };
    let last = plan.evolve(psi0, t, steps, &mut tracker)?;
    Ok((last, records))
}

/// Exact trajectory on a uniform grid of `steps` intervals.
pub fn exact_trajectory(
    evolver: &ExactEvolver,
    obs: &ObservableSet,
    psi0: &StateVector,
    t: f64,
    steps: usize,
) -> Result<Vec<ObservableRecord>> {
    (0..=steps)
        .map(|k| {
            let time = t * k as f64 / steps.max(1) as f64;
            let psi = evolver.evolve(psi0, time)?;
            obs.measure(k, time, &psi, None)
        })
        .collect()
}

/// Least-squares slope of `log(err)` against `log(1/steps)`.
pub fn fit_order(steps: &[usize], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|&s| -(s as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
