//! Long Trotter runs keep the state normalized to within 1e-12 per
//! thousand steps.

use qu8it::evolution::{build_trotter_plan, StateVector};
use qu8it::lattice::{build_qu8it_hamiltonian, LatticeParams};

const DRIFT_PER_THOUSAND: f64 = 1e-12;

fn max_drift(l: usize, h: f64, order: u8) -> f64 {
    let p = LatticeParams::uniform(1, l, 1.0, 1.0, h);
    let ham = build_qu8it_hamiltonian(&p).unwrap();
    let plan = build_trotter_plan(&ham, order).unwrap();
    let prepared = plan.prepare(0.1);
    let mut psi = StateVector::basis(ham.dim(), 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        prepared.apply(&mut psi);
        worst = worst.max((psi.norm() - 1.0).abs());
    }
    worst
}

#[test]
fn single_site_norm_drift() {
    for order in [1, 2] {
        let d = max_drift(1, 1.0, order);
        assert!(d <= DRIFT_PER_THOUSAND, "order {order}: drift {d:e}");
    }
}

#[test]
fn two_site_norm_drift() {
    for order in [1, 2] {
        let d = max_drift(2, 0.5, order);
        assert!(d <= DRIFT_PER_THOUSAND, "order {order}: drift {d:e}");
    }
}
