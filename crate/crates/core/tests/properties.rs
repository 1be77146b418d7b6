//! Randomized properties: Givens expansions, text round trips, unitarity
//! and conservation laws.

use proptest::prelude::*;

use qu8it::evolution::{build_trotter_plan, ExactEvolver, StateVector};
use qu8it::givens::{decompose, decompose_two_site};
use qu8it::lattice::{
    build_qu8it_hamiltonian, conserved_charges, BaryonSector, LatticeParams,
};
use qu8it::linalg::{max_abs_diff, CMat, CVec, C64};
use qu8it::statespec::StateSpec;

fn hermitian(n: usize, entries: &[(f64, f64)]) -> CMat {
    let a = CMat::from_fn(n, n, |i, j| {
        let (re, im) = entries[i * n + j];
        C64::new(re, im)
    });
    (&a + a.adjoint()) * C64::new(0.5, 0.0)
}

fn random_state(dim: usize, entries: &[(f64, f64)]) -> StateVector {
    StateVector::new(CVec::from_iterator(
        dim,
        entries.iter().map(|&(re, im)| C64::new(re, im)),
    ))
    .normalized()
}

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn single_site_expansion_reconstructs(e in amplitudes(64)) {
        let h = hermitian(8, &e);
        let terms = decompose(&h).unwrap();
        prop_assert!(max_abs_diff(&terms.reconstruct(1), &h) < 1e-13);
    }

    #[test]
    fn baryon_sector_text_round_trip(thirds in -60i64..60) {
        let b = BaryonSector::new(thirds);
        prop_assert_eq!(b.to_string().parse::<BaryonSector>().unwrap(), b);
        prop_assert_eq!(format!("B={b}").parse::<BaryonSector>().unwrap(), b);
    }

    #[test]
    fn state_spec_text_round_trip(labels in prop::collection::vec((1u8..=8, any::<bool>()), 1..8)) {
        let s = StateSpec::Basis(labels);
        prop_assert_eq!(s.to_string().parse::<StateSpec>().unwrap(), s.clone());
        let ascii = s.to_string().replace('\u{304}', "bar");
        prop_assert_eq!(ascii.parse::<StateSpec>().unwrap(), s);
    }

    #[test]
    fn trotter_steps_preserve_norm(
        e in amplitudes(64),
        mass in 0.1..3.0f64,
        g in 0.1..3.0f64,
        h in 0.0..3.0f64,
        dt in 0.01..0.5f64,
        order in 1u8..=2,
    ) {
        let p = LatticeParams::uniform(1, 1, mass, g, h);
        let ham = build_qu8it_hamiltonian(&p).unwrap();
        let plan = build_trotter_plan(&ham, order).unwrap();
        let prepared = plan.prepare(dt);
        let mut psi = random_state(64, &e);
        for _ in 0..200 {
            prepared.apply(&mut psi);
        }
        prop_assert!((psi.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn exact_evolution_conserves_charges(
        e in amplitudes(64),
        mass in 0.1..3.0f64,
        g in 0.1..3.0f64,
        h in 0.0..3.0f64,
        t in 0.0..10.0f64,
    ) {
        let p = LatticeParams::uniform(1, 1, mass, g, h);
        let ham = build_qu8it_hamiltonian(&p).unwrap();
        let charges = conserved_charges(&p).unwrap();
        let exact = ExactEvolver::auto(&ham.matrix, 64).unwrap();
        let psi0 = random_state(64, &e);
        let psi = exact.evolve(&psi0, t).unwrap();
        for op in [&ham.matrix, &charges.baryon] {
            let before = op.expectation(&psi0.amplitudes).re;
            let after = op.expectation(&psi.amplitudes).re;
            prop_assert!((before - after).abs() < 1e-10, "{before} vs {after}");
        }
        // A singlet stays a singlet.
        let vac = exact.evolve(&StateVector::basis(64, 0), t).unwrap();
        prop_assert!(charges.casimir.expectation(&vac.amplitudes).re.abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn two_site_expansion_reconstructs(e in amplitudes(64 * 64)) {
        let h = hermitian(64, &e);
        let terms = decompose_two_site(&h).unwrap();
        prop_assert!(max_abs_diff(&terms.reconstruct(2), &h) < 1e-12);
    }
}
