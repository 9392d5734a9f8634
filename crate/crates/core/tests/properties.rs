use approx::assert_relative_eq;
use proptest::prelude::*;

use opmeans_core::harness::{lemma22_witness, phi, phi_inverse, replay, Witness};
use opmeans_core::hermitian::{
    congruence, inv_pd, jordan_decompose, lowner_compare, random_pd, spectral_decompose, sqrt_pd,
    HermitianMatrix, PdMatrix, ToleranceConfig,
};
use opmeans_core::means::{
    alm_geometric, n_arithmetic, n_harmonic, AlmConfig, OperatorMean, SymmetricMeanMeasure,
};

const TOL: f64 = 1e-9;

fn pd(dim: usize, seed: u64) -> PdMatrix {
    random_pd(dim, seed, 1e2).unwrap()
}

fn geq(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    lowner_compare(a, b, &ToleranceConfig::default()).unwrap().geq_margin
}

fn rel_dist(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    a.dist(b) / ToleranceConfig::scale(&[a.norm(), b.norm()])
}

fn means() -> Vec<OperatorMean> {
    vec![
        OperatorMean::arith(),
        OperatorMean::harm(),
        OperatorMean::geom(),
        OperatorMean::geometric(0.3).unwrap(),
        OperatorMean::from_measure(SymmetricMeanMeasure::new(0.5, vec![(1.0, 0.5)]).unwrap()),
        OperatorMean::from_measure(
            SymmetricMeanMeasure::new(0.2, vec![(0.5, 0.4), (3.0, 0.4)]).unwrap(),
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weighted_agh_order(dim in 1usize..6, s in any::<u64>(), w in 0.05f64..0.95) {
        let (a, b) = (pd(dim, s), pd(dim, s ^ 0x9e37));
        let ar = OperatorMean::arithmetic(w).unwrap().apply(&a, &b).unwrap();
        let ge = OperatorMean::geometric(w).unwrap().apply(&a, &b).unwrap();
        let ha = OperatorMean::harmonic(w).unwrap().apply(&a, &b).unwrap();
        prop_assert!(geq(&ar, &ge) >= -TOL);
        prop_assert!(geq(&ge, &ha) >= -TOL);
    }

    #[test]
    fn every_mean_lies_between_harmonic_and_arithmetic(dim in 1usize..5, s in any::<u64>()) {
        let (a, b) = (pd(dim, s), pd(dim, s.wrapping_add(1)));
        let ar = OperatorMean::arith().apply(&a, &b).unwrap();
        let ha = OperatorMean::harm().apply(&a, &b).unwrap();
        for sigma in means().into_iter().filter(OperatorMean::is_symmetric) {
            let m = sigma.apply(&a, &b).unwrap();
            prop_assert!(geq(&ar, &m) >= -TOL, "{}", sigma);
            prop_assert!(geq(&m, &ha) >= -TOL, "{}", sigma);
        }
    }

    #[test]
    fn symmetric_means_commute(dim in 1usize..5, s in any::<u64>()) {
        let (a, b) = (pd(dim, s), pd(dim, s.wrapping_mul(3)));
        for sigma in means().into_iter().filter(OperatorMean::is_symmetric) {
            let ab = sigma.apply(&a, &b).unwrap();
            let ba = sigma.apply(&b, &a).unwrap();
            prop_assert!(rel_dist(&ab, &ba) < 1e-9, "{}", sigma);
        }
    }

    #[test]
    fn means_are_monotone(dim in 1usize..5, s in any::<u64>()) {
        let (a, b) = (pd(dim, s), pd(dim, s ^ 0xff));
        let a2 = PdMatrix::new(&*a + &*pd(dim, s ^ 0x1234)).unwrap();
        let b2 = PdMatrix::new(&*b + &*pd(dim, s ^ 0x4321)).unwrap();
        for sigma in means() {
            let lo = sigma.apply(&a, &b).unwrap();
            let hi = sigma.apply(&a2, &b2).unwrap();
            prop_assert!(geq(&hi, &lo) >= -TOL, "{}", sigma);
        }
    }

    #[test]
    fn transformer_identity(dim in 1usize..5, s in any::<u64>()) {
        let (a, b) = (pd(dim, s), pd(dim, s ^ 0xabc));
        let x = random_pd(dim, s ^ 0xdef, 10.0).unwrap().matmul(&random_pd(dim, s ^ 0x777, 10.0).unwrap());
        let xa = PdMatrix::new(congruence(&x, &a).unwrap()).unwrap();
        let xb = PdMatrix::new(congruence(&x, &b).unwrap()).unwrap();
        for sigma in means() {
            let lhs = congruence(&x, &sigma.apply(&a, &b).unwrap()).unwrap();
            let rhs = sigma.apply(&xa, &xb).unwrap();
            prop_assert!(rel_dist(&lhs, &rhs) < 1e-8, "{}", sigma);
        }
    }

    #[test]
    fn geometric_mean_is_self_adjoint_and_solves_riccati(dim in 1usize..5, s in any::<u64>()) {
        let (a, b) = (pd(dim, s), pd(dim, s ^ 0x55));
        let g = OperatorMean::geom().apply(&a, &b).unwrap();
        let adj = OperatorMean::geom().adjoint().unwrap().apply(&a, &b).unwrap();
        prop_assert!(rel_dist(&g, &adj) < 1e-9);
        let riccati = inv_pd(&a).unwrap().sandwich(&g);
        prop_assert!(rel_dist(&riccati, &b) < 1e-8);
    }

    #[test]
    fn harmonic_and_arithmetic_are_adjoint(dim in 1usize..5, s in any::<u64>()) {
        let (a, b) = (pd(dim, s), pd(dim, s ^ 0x66));
        let adj = OperatorMean::arith().adjoint().unwrap().apply(&a, &b).unwrap();
        let h = OperatorMean::harm().apply(&a, &b).unwrap();
        prop_assert!(rel_dist(&adj, &h) < 1e-9);
    }

    #[test]
    fn scalar_means_follow_representing_function(x in 1e-3f64..1e3, y in 1e-3f64..1e3) {
        for sigma in means() {
            let direct = sigma.scalar(x, y).unwrap();
            assert_relative_eq!(direct, x * sigma.h().eval(y / x), max_relative = 1e-12);
            let lifted = sigma
                .apply(&PdMatrix::scalar(x).unwrap(), &PdMatrix::scalar(y).unwrap())
                .unwrap();
            assert_relative_eq!(lifted.get(0, 0).re, direct, max_relative = 1e-10);
        }
    }

    #[test]
    fn phi_inverse_inverts_phi(t in 0.0f64..1.0) {
        for sigma in [OperatorMean::harm(), OperatorMean::geom()] {
            let y = phi(&sigma, t).unwrap();
            let back = phi(&sigma, phi_inverse(&sigma, y, 1e-12).unwrap()).unwrap();
            prop_assert!((back - y).abs() <= 1e-11);
        }
    }

    #[test]
    fn spectral_reconstruction_and_roots(dim in 1usize..7, s in any::<u64>()) {
        let a = pd(dim, s);
        let d = spectral_decompose(&a).unwrap();
        prop_assert!(rel_dist(&d.recompose(&d.eigenvalues), &a) < 1e-12);
        let r = sqrt_pd(&a).unwrap();
        prop_assert!(rel_dist(&r.square(), &a) < 1e-12);
    }

    #[test]
    fn lowner_margins_are_antisymmetric(dim in 1usize..5, s in any::<u64>()) {
        let (a, b) = (pd(dim, s), pd(dim, s ^ 0x99));
        let cfg = ToleranceConfig::default();
        let ab = lowner_compare(&a, &b, &cfg).unwrap();
        let ba = lowner_compare(&b, &a, &cfg).unwrap();
        prop_assert_eq!(ab.geq_margin, ba.leq_margin);
        prop_assert_eq!(ab.is_geq(), ba.is_leq());
    }

    #[test]
    fn jordan_parts_are_orthogonal(dim in 1usize..5, s in any::<u64>()) {
        let h = &*pd(dim, s) - &*pd(dim, s ^ 0x31);
        let (plus, minus) = jordan_decompose(&h).unwrap();
        prop_assert!(rel_dist(&(&*plus - &*minus), &h) < 1e-12);
        let prod = plus.matmul(&minus);
        prop_assert!(prod.norm() <= 1e-12 * h.norm().max(1.0) * h.norm().max(1.0));
    }

    #[test]
    fn alm_mean_is_between_harmonic_and_arithmetic(dim in 1usize..4, s in any::<u64>()) {
        let list: Vec<PdMatrix> = (0..3).map(|k| pd(dim, s ^ (k + 1))).collect();
        let g = alm_geometric(&list, &AlmConfig::default()).unwrap();
        prop_assert!(geq(&n_arithmetic(&list).unwrap(), &g) >= -1e-8);
        prop_assert!(geq(&g, &n_harmonic(&list).unwrap()) >= -1e-8);
    }

    #[test]
    fn projection_witness_round_trips(theta in 0.01f64..1.5, eps in 1e-6f64..1e-2) {
        let w = lemma22_witness(theta, eps, &OperatorMean::harm()).unwrap();
        let back = Witness::from_json(&w.to_json()).unwrap();
        prop_assert_eq!(&back, &w);
        prop_assert_eq!(replay(&back).unwrap(), w.margin);
    }
}
