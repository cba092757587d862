use proptest::prelude::*;

use qradius_core::kernel::spectral_norm;
use qradius_core::matrix::{inner, vnorm};
use qradius_core::qnr::{classical_radius, q_objective, q_radius, QParam, SolverCfg};
use qradius_core::random::{self, rng_from};
use qradius_core::{c, CMatrix, CVector};

fn wq(t: &CMatrix, q: QParam, seed: u64) -> f64 {
    q_radius(None, t, q, &SolverCfg::default().with_seed(seed)).unwrap().value
}

fn ginibre(seed: u64, n: usize) -> CMatrix {
    random::ginibre(&mut rng_from(seed, &[1]), n, n)
}

#[test]
fn objective_matches_partner_sampling() {
    // In C^2 the partners of x form a circle, so a phase grid is exhaustive.
    let mut rng = rng_from(11, &[]);
    for _ in 0..20 {
        let t = random::ginibre(&mut rng, 2, 2);
        let x = random::unit_vector(&mut rng, 2);
        let z0 = CVector::from_vec(vec![-x[1].conj(), x[0].conj()]);
        for qv in [0.0, 0.3, 0.8, 1.0] {
            let q = QParam::real(qv).unwrap();
            let s = (1.0 - qv * qv).sqrt();
            let tx = t.mul_vec(&x);
            let mut best: f64 = 0.0;
            for k in 0..100_000 {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / 100_000.0;
                let y = &x * c(qv, 0.0) + &z0 * (c(s, 0.0) * c(0.0, phi).exp());
                best = best.max(inner(&tx, &y).norm());
            }
            let f = q_objective(&t, &x, q).unwrap();
            assert!(f >= best - 1e-12, "objective {f} below sampled {best}");
            assert!(f - best < 1e-8, "objective {f} far above sampled {best}");
        }
    }
}

#[test]
fn objective_rejects_bad_vectors() {
    let t = ginibre(0, 3);
    let q = QParam::real(0.5).unwrap();
    assert!(q_objective(&t, &CVector::from_element(3, c(1.0, 0.0)), q).is_err());
    assert!(q_objective(&t, &CVector::from_element(2, c(0.5f64.sqrt(), 0.0)), q).is_err());
}

#[test]
fn jordan_golden_values() {
    let j = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    for q in [0.0, 0.3, 0.6, 1.0] {
        let r = q_radius(None, &j, QParam::real(q).unwrap(), &SolverCfg::default()).unwrap();
        let want = (1.0 + (1.0 - q * q).sqrt()) / 2.0;
        assert!((r.value - want).abs() < 1e-9, "q = {q}: {} vs {want}", r.value);
        assert!(r.oracle_lower <= r.value + 1e-12);
    }
}

#[test]
fn witness_is_admissible() {
    let t = ginibre(5, 3);
    let q = QParam::real(0.4).unwrap();
    let r = q_radius(None, &t, q, &SolverCfg::default()).unwrap();
    let (x, y) = (&r.witness.x, &r.witness.y);
    assert!((vnorm(x) - 1.0).abs() < 1e-10 && (vnorm(y) - 1.0).abs() < 1e-10);
    assert!((inner(x, y) - c(0.4, 0.0)).norm() < 1e-10);
    assert!((inner(&t.mul_vec(x), y).norm() - r.value).abs() < 1e-9);
}

#[test]
fn q_one_is_classical_radius() {
    for seed in 0..10 {
        let t = ginibre(seed, 2 + seed as usize % 3);
        let w1 = wq(&t, QParam::real(1.0).unwrap(), seed);
        assert!((w1 - classical_radius(&t).unwrap()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phase_of_q_is_irrelevant(seed in any::<u64>(), n in 2usize..=4, m in 0.05f64..=1.0, th in 0.0f64..6.28) {
        let t = ginibre(seed, n);
        let real = wq(&t, QParam::real(m).unwrap(), seed);
        let rotated = wq(&t, QParam::new(c(m, 0.0) * c(0.0, th).exp()).unwrap(), seed ^ 1);
        prop_assert!((real - rotated).abs() < 1e-8);
    }

    #[test]
    fn homogeneous_and_unitarily_invariant(seed in any::<u64>(), n in 2usize..=4, q in 0.0f64..=1.0, s in 0.1f64..3.0) {
        let t = ginibre(seed, n);
        let u = random::unitary(&mut rng_from(seed, &[2]), n);
        let qp = QParam::real(q).unwrap();
        let w = wq(&t, qp, seed);
        let cc = c(s, 0.0) * c(0.0, seed as f64).exp();
        prop_assert!((wq(&t.scale(cc), qp, seed) - s * w).abs() < 1e-8 * s.max(1.0));
        let conj = &(&u.adjoint() * &t) * &u;
        prop_assert!((wq(&conj, qp, seed) - w).abs() < 1e-8);
    }

    #[test]
    fn bounded_by_operator_norm(seed in any::<u64>(), n in 2usize..=4, q in 0.0f64..=1.0) {
        let t = ginibre(seed, n);
        let r = q_radius(None, &t, QParam::real(q).unwrap(), &SolverCfg::default().with_seed(seed)).unwrap();
        prop_assert!(r.value <= spectral_norm(&t) * (1.0 + 1e-12));
        prop_assert!(r.oracle_lower <= r.value + 1e-12);
        prop_assert!(r.value >= q * classical_radius(&t).unwrap() - 1e-9);
    }
}
