//! Acceptance criteria. Each test prints one `ACCEPTANCE` line with the
//! measured quantity, its pinned tolerance and the wall time, then asserts.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use qu8it::evolution::{
    build_trotter_plan, fit_order, trotter_evolve, ExactEvolver, ObservableSet, StateVector,
};
use qu8it::fock::fock_oracle;
use qu8it::identities::{operator_checks, run_suite, Section, IDENTITY_TOL};
use qu8it::lattice::{
    block_spectrum, build_qu8it_hamiltonian, build_qubit_hamiltonian, mass_shift,
    qu8it_symmetry_keys, qubit_symmetry_keys, sector_indices, BaryonSector, LatticeParams,
};
use qu8it::linalg::{kron_all, CMat};
use qu8it::qu8it::{build_qu8it_operators, D};
use qu8it::sparse::CsrMatrix;
use qu8it::spectrum::spectrum;
use qu8it::su3::gell_mann;

fn report(id: &str, passed: bool, what: &str, elapsed: Duration) {
    println!(
        "ACCEPTANCE {id} {} {what} [{:.2}s]",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_1_dual_mapping_spectra() {
    const TOL: f64 = 1e-9;
    let start = Instant::now();
    let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 1.0);
    let h8 = build_qu8it_hamiltonian(&p).unwrap();
    let h2 = build_qubit_hamiltonian(&p).unwrap();
    let s8 = block_spectrum(&h8.matrix, &qu8it_symmetry_keys(&p).unwrap()).unwrap();
    let s2 = block_spectrum(&h2.matrix, &qubit_symmetry_keys(&p).unwrap()).unwrap();
    let shift = mass_shift(&p);
    let gap = s8
        .iter()
        .zip(&s2)
        .map(|(a, b)| (a + shift - b).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let ok = s8.len() == 64 && s2.len() == 64 && gap <= TOL && elapsed < Duration::from_secs(1);
    report(
        "1",
        ok,
        &format!("64+64 levels, max |dE| = {gap:.3e} (tol {TOL:e}), mass offset {shift}"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_2_sector_structure() {
    const CASIMIR_TOL: f64 = 1e-6;
    let start = Instant::now();
    let h_pen = 20.0;
    let p = LatticeParams::uniform(1, 1, 1.0, 1.0, h_pen);
    let dim = sector_indices(&p, BaryonSector::new(0)).unwrap().len();
    let h = build_qu8it_hamiltonian(&p).unwrap();
    let levels = spectrum(&h, Some(BaryonSector::new(0)), 64).unwrap();
    let low_casimir = levels[..4].iter().map(|l| l.casimir.abs()).fold(0.0, f64::max);
    let high_casimir = levels[4..].iter().map(|l| l.casimir).fold(f64::INFINITY, f64::min);
    let gap = levels[4].energy - levels[3].energy;
    let h2 = h_pen * h_pen;
    let elapsed = start.elapsed();
    let ok = dim == 20
        && levels.len() == 20
        && low_casimir < CASIMIR_TOL
        && high_casimir > 1.0
        && gap >= h2
        && gap <= 2.0 * h2
        && elapsed < Duration::from_secs(1);
    report(
        "2",
        ok,
        &format!(
            "B=0 dim {dim}; lowest-4 max Casimir {low_casimir:.3e} (tol {CASIMIR_TOL:e}); \
             gap to the other 16 = {gap:.2} = {:.3} h^2 (required in [1, 2] h^2)",
            gap / h2
        ),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_3_identity_suite() {
    let start = Instant::now();
    let r = run_suite(&[
        Section::AppA,
        Section::AppB,
        Section::AppC,
        Section::AppD,
        Section::Hamiltonian,
    ]);
    let worst = r.checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let ok = r.passed() && worst <= IDENTITY_TOL && elapsed < Duration::from_secs(5);
    for f in r.failures() {
        println!("  failed: {} {} residual {:e}", f.section, f.name, f.residual);
    }
    report(
        "3",
        ok,
        &format!("{} identities, max residual {worst:.3e} (tol {IDENTITY_TOL:e})", r.checks.len()),
        elapsed,
    );
    assert!(ok);
}

/// `c̃_α` on `slot` of an `n`-slot register with `P̃` on every earlier slot.
fn embedded(c: &CMat, p: &CMat, slot: usize, n: usize) -> CMat {
    let id = CMat::identity(D, D);
    let factors: Vec<&CMat> = (0..n)
        .map(|s| match s.cmp(&slot) {
            std::cmp::Ordering::Less => p,
            std::cmp::Ordering::Equal => c,
            std::cmp::Ordering::Greater => &id,
        })
        .collect();
    kron_all(factors)
}

#[test]
fn criterion_4_operator_oracle() {
    let start = Instant::now();
    let g = gell_mann();
    let ops = build_qu8it_operators(&g);
    let oracle = fock_oracle(&g);
    let checks = operator_checks(&g, &ops, &oracle);
    let exact_names = [
        "annihilators equal fock oracle",
        "phase matrix equals fock parity",
        "baryon matrix equals fock number/3",
        "quark charges equal fock bilinears",
        "anti-quark charges equal fock bilinears",
        "canonical anticommutators",
    ];
    let exact_worst = checks
        .iter()
        .filter(|c| exact_names.contains(&c.name.as_str()))
        .map(|c| c.residual)
        .fold(0.0, f64::max);
    let counted = checks.iter().filter(|c| exact_names.contains(&c.name.as_str())).count();

    // Fermionic statistics across slots through the P̃ strings.
    let mut cross: f64 = 0.0;
    for n in [2usize, 3] {
        let dim = D.pow(n as u32);
        let id = CsrMatrix::identity(dim);
        let zero = CsrMatrix::zeros(dim);
        let modes: Vec<CsrMatrix> = (0..n)
            .flat_map(|s| ops.c.iter().map(move |c| (s, c)))
            .map(|(s, c)| CsrMatrix::from_dense(&embedded(c, &ops.p, s, n)))
            .collect();
        let anti = |a: &CsrMatrix, b: &CsrMatrix| a.matmul(b).unwrap().add(&b.matmul(a).unwrap()).unwrap();
        for (i, a) in modes.iter().enumerate() {
            for (j, b) in modes.iter().enumerate() {
                let want = if i == j { &id } else { &zero };
                cross = cross
                    .max(anti(a, &b.adjoint()).max_abs_diff(want).unwrap())
                    .max(anti(a, b).max_abs());
            }
        }
    }

    // Negative control: flip the sign of the |6⟩ entry of c̃_r alone.
    let mut corrupted = ops.clone();
    corrupted.c[0][(3, 5)] = -corrupted.c[0][(3, 5)];
    corrupted.c_dag[0] = corrupted.c[0].transpose();
    let control = operator_checks(&g, &corrupted, &oracle);
    let caught = control
        .iter()
        .find(|c| c.name == "canonical anticommutators")
        .map(|c| !c.passed)
        .unwrap_or(false);

    let elapsed = start.elapsed();
    let ok = counted == exact_names.len()
        && exact_worst == 0.0
        && cross == 0.0
        && caught
        && checks.iter().all(|c| c.passed)
        && elapsed < Duration::from_secs(1);
    report(
        "4",
        ok,
        &format!(
            "oracle residual {exact_worst:e} (exact), cross-slot anticommutators {cross:e} (exact), \
             corrupted |6> sign detected: {caught}"
        ),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_5_resource_counts() {
    let start = Instant::now();
    let r = run_suite(&[Section::Resources]);
    let elapsed = start.elapsed();
    for c in &r.checks {
        if !c.passed {
            println!("  failed: {} {:?}", c.name, c.detail);
        }
    }
    let ratio_err = r
        .checks
        .iter()
        .filter(|c| c.name.contains("ratio"))
        .map(|c| c.residual)
        .fold(0.0, f64::max);
    let ok = r.passed() && elapsed < Duration::from_secs(1);
    report(
        "5",
        ok,
        &format!(
            "{} count checks (N_f, L in 1..3 exact; 96/26 ungrouped; 732/249 lowered), \
             worst L=200 ratio error {:.3}% (tol 1%)",
            r.checks.len(),
            100.0 * ratio_err
        ),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_6a_single_site_color_safety() {
    const TOL: f64 = 1e-10;
    let start = Instant::now();
    // The penalty term is left out: its two-slot groups do not commute with
    // the total charge one at a time.
    let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 0.0);
    let h = build_qu8it_hamiltonian(&p).unwrap();
    let plan = build_trotter_plan(&h, 1).unwrap();
    let obs = ObservableSet::new(&h).unwrap();
    let psi0 = StateVector::basis(h.dim(), 0);
    let (_, rec) = trotter_evolve(&plan, &obs, &psi0, 10.0, 100, None).unwrap();
    let worst = rec.iter().map(|r| r.casimir.abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let ok = rec.len() == 101 && worst <= TOL;
    report(
        "6a",
        ok,
        &format!("L=1, 100 first-order steps at dt=0.1: max Casimir {worst:.3e} (tol {TOL:e})"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_6b_two_site_color_violation() {
    const MIN_VIOLATION: f64 = 1e-8;
    let start = Instant::now();
    let p = LatticeParams::uniform(1, 2, 1.0, 1.0, 0.0);
    let h = build_qu8it_hamiltonian(&p).unwrap();
    let obs = ObservableSet::new(&h).unwrap();
    let psi0 = StateVector::basis(h.dim(), 0);
    let total_t = 1.6;
    let steps = [8usize, 16, 32, 64];
    let mut ok = h.dim() == 4096;
    let mut lines = Vec::new();
    for (order, min_fit) in [(1u8, 0.7), (2u8, 1.7)] {
        let plan = build_trotter_plan(&h, order).unwrap();
        let viol: Vec<f64> = steps
            .iter()
            .map(|&n| {
                let (_, rec) = trotter_evolve(&plan, &obs, &psi0, total_t, n, None).unwrap();
                rec.last().unwrap().casimir
            })
            .collect();
        let fit = fit_order(&steps, &viol);
        let monotone = viol.windows(2).all(|w| w[1] < w[0]);
        ok &= viol[0] > MIN_VIOLATION && monotone && fit >= min_fit;
        lines.push(format!(
            "order {order}: Casimir at dt=0.2..0.025 {:?}, fit {fit:.2} (>= {min_fit})",
            viol.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
        ));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    report("6b", ok, &format!("L=2 dim 4096, {}", lines.join("; ")), elapsed);
    assert!(ok);
}

#[test]
fn criterion_7_fidelity_convergence() {
    const WINDOW: f64 = 0.3;
    let start = Instant::now();
    let p = LatticeParams::uniform(1, 1, 1.0, 1.0, 1.0);
    let h = build_qu8it_hamiltonian(&p).unwrap();
    let obs = ObservableSet::new(&h).unwrap();
    let psi0 = StateVector::basis(h.dim(), 0);
    let exact = ExactEvolver::auto(&h.matrix, 4096).unwrap();
    let target = exact.evolve(&psi0, 1.0).unwrap();
    let steps = [8usize, 16, 32, 64];
    let mut ok = true;
    let mut lines = Vec::new();
    for order in [1u8, 2] {
        let plan = build_trotter_plan(&h, order).unwrap();
        // sqrt(1 - F) is the state-error norm up to a phase, O(dt^order).
        let err: Vec<f64> = steps
            .iter()
            .map(|&n| {
                let (last, _) = trotter_evolve(&plan, &obs, &psi0, 1.0, n, None).unwrap();
                (1.0 - target.fidelity(&last)).max(0.0).sqrt()
            })
            .collect();
        let fit = fit_order(&steps, &err);
        let improving = err.windows(2).all(|w| w[1] < w[0]);
        ok &= improving && (fit - order as f64).abs() <= WINDOW;
        lines.push(format!("order {order}: fit {fit:.3}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    report(
        "7",
        ok,
        &format!("sqrt(1-F) at t=1, steps 8..64: {} (window +-{WINDOW})", lines.join(", ")),
        elapsed,
    );
    assert!(ok);
}
