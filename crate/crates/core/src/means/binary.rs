use super::OperatorMean;
use crate::error::{Error, Result};
use crate::hermitian::{
    apply_function, inv_pd, inv_sqrt_pd, sqrt_pd, Domain, HermitianMatrix, PdMatrix, PsdMatrix,
};

fn check_weight(weight: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidParameter(format!(
            "mean weight must lie in [0, 1], got {weight}"
        )));
    }
    Ok(())
}

/// `(1−λ)A + λB`
pub fn arithmetic(a: &PdMatrix, b: &PdMatrix, weight: f64) -> Result<PdMatrix> {
    check_weight(weight)?;
    a.check_same_dim(b)?;
    PdMatrix::new(&(&**a * (1.0 - weight)) + &(&**b * weight))
}

/// Parallel sum `A : B = (A⁻¹ + B⁻¹)⁻¹`.
pub fn parallel_sum(a: &PdMatrix, b: &PdMatrix) -> Result<PdMatrix> {
    a.check_same_dim(b)?;
    let s = PdMatrix::new(&*inv_pd(a)? + &*inv_pd(b)?)?;
    inv_pd(&s)
}

/// `((1−λ)A⁻¹ + λB⁻¹)⁻¹`
pub fn harmonic(a: &PdMatrix, b: &PdMatrix, weight: f64) -> Result<PdMatrix> {
    check_weight(weight)?;
    a.check_same_dim(b)?;
    let s = PdMatrix::new(&(&*inv_pd(a)? * (1.0 - weight)) + &(&*inv_pd(b)? * weight))?;
    inv_pd(&s)
}

/// Weighted geometric mean `A^{1/2}(A^{-1/2}BA^{-1/2})^λ A^{1/2}`.
pub fn geometric(a: &PdMatrix, b: &PdMatrix, weight: f64) -> Result<PdMatrix> {
    check_weight(weight)?;
    a.check_same_dim(b)?;
    let out = geometric_psd(a, b, weight)?;
    PdMatrix::new(out.into_hermitian())
}

/// `A #_λ C` for positive definite `A` and positive semidefinite `C`.
pub fn geometric_psd(a: &PdMatrix, c: &HermitianMatrix, weight: f64) -> Result<PsdMatrix> {
    check_weight(weight)?;
    a.check_same_dim(c)?;
    let half = sqrt_pd(a)?;
    let inv_half = inv_sqrt_pd(a)?;
    let inner = c.sandwich(&inv_half);
    let powered = apply_function(&inner, Domain::NonNegative, |x| x.powf(weight))?;
    PsdMatrix::new(powered.sandwich(&half))
}

/// Generic Kubo–Ando route `A^{1/2} h(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn kubo_ando(sigma: &OperatorMean, a: &PdMatrix, b: &PdMatrix) -> Result<PdMatrix> {
    a.check_same_dim(b)?;
    let half = sqrt_pd(a)?;
    let inv_half = inv_sqrt_pd(a)?;
    let inner = b.sandwich(&inv_half);
    let h = sigma.h();
    let mapped = apply_function(&inner, Domain::NonNegative, |x| h.eval(x))?;
    PdMatrix::new(mapped.sandwich(&half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{lowner_compare, random_pd, ToleranceConfig};

    fn s(x: f64) -> PdMatrix {
        PdMatrix::scalar(x).unwrap()
    }

    fn close(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn arithmetic_examples() {
        let a = PdMatrix::scaled_identity(2, 2.0).unwrap();
        let b = PdMatrix::scaled_identity(2, 4.0).unwrap();
        assert!(close(&arithmetic(&a, &b, 0.5).unwrap(), &HermitianMatrix::scaled_identity(2, 3.0), 1e-15));
        assert!(close(&arithmetic(&a, &b, 0.0).unwrap(), &a, 0.0));
        assert!(arithmetic(&a, &b, 1.2).is_err());
    }

    #[test]
    fn arithmetic_dominates_harmonic_on_random_pair() {
        let cfg = ToleranceConfig::default();
        let a = random_pd(3, 1, 100.0).unwrap();
        let b = random_pd(3, 2, 100.0).unwrap();
        let ar = arithmetic(&a, &b, 0.5).unwrap();
        let direct = (&*a + &*b) * 0.5;
        assert!(close(&ar, &direct, 1e-15));
        assert!(lowner_compare(&ar, &harmonic(&a, &b, 0.5).unwrap(), &cfg).unwrap().is_geq());
        assert!((ar.trace() - 0.5 * (a.trace() + b.trace())).abs() < 1e-14);
    }

    #[test]
    fn parallel_sum_examples() {
        assert!((parallel_sum(&s(2.0), &s(2.0)).unwrap().get(0, 0).re - 1.0).abs() < 1e-15);
        let i = PdMatrix::identity(3);
        assert!(close(&parallel_sum(&i, &i).unwrap(), &HermitianMatrix::scaled_identity(3, 0.5), 1e-15));
        let a = random_pd(3, 5, 50.0).unwrap();
        let b = random_pd(3, 6, 50.0).unwrap();
        let ab = parallel_sum(&a, &b).unwrap();
        let ba = parallel_sum(&b, &a).unwrap();
        assert!(close(&ab, &ba, 1e-12));
    }

    #[test]
    fn harmonic_examples() {
        assert!((harmonic(&s(2.0), &s(1.0), 0.5).unwrap().get(0, 0).re - 4.0 / 3.0).abs() < 1e-15);
        let a = PdMatrix::diag(&[2.0, 1.0]).unwrap();
        let b = PdMatrix::diag(&[1.0, 2.0]).unwrap();
        assert!(close(
            &harmonic(&a, &b, 0.5).unwrap(),
            &HermitianMatrix::diag(&[4.0 / 3.0, 4.0 / 3.0]),
            1e-15
        ));
        assert!(close(&harmonic(&a, &b, 0.0).unwrap(), &a, 1e-15));
    }

    #[test]
    fn geometric_examples() {
        assert!((geometric(&s(4.0), &s(9.0), 0.5).unwrap().get(0, 0).re - 6.0).abs() < 1e-14);
        let a = PdMatrix::diag(&[1.0, 4.0]).unwrap();
        let b = PdMatrix::diag(&[4.0, 1.0]).unwrap();
        assert!(close(
            &geometric(&a, &b, 0.5).unwrap(),
            &HermitianMatrix::diag(&[2.0, 2.0]),
            1e-14
        ));
    }

    #[test]
    fn geometric_solves_riccati_equation() {
        // Z A⁻¹ Z = B characterizes A # B.
        for seed in 0..10 {
            let a = random_pd(4, 100 + seed, 1e3).unwrap();
            let b = random_pd(4, 200 + seed, 1e3).unwrap();
            let z = geometric(&a, &b, 0.5).unwrap();
            let lhs = HermitianMatrix::new(z.matmul(&inv_pd(&a).unwrap()) * z.as_matrix()).unwrap();
            let scale = b.norm().max(1.0);
            assert!(lhs.dist(&b) / scale < 1e-9, "seed {seed}");
            // symmetric in its arguments
            let zr = geometric(&b, &a, 0.5).unwrap();
            assert!(z.dist(&zr) < 1e-9);
        }
    }

    #[test]
    fn generic_route_matches_closed_forms() {
        let a = random_pd(3, 31, 1e2).unwrap();
        let b = random_pd(3, 32, 1e2).unwrap();
        for mean in [
            OperatorMean::arith(),
            OperatorMean::harm(),
            OperatorMean::geom(),
            OperatorMean::geometric(0.3).unwrap(),
            OperatorMean::harmonic(0.8).unwrap(),
        ] {
            let closed = mean.apply(&a, &b).unwrap();
            let generic = kubo_ando(&mean, &a, &b).unwrap();
            assert!(closed.dist(&generic) < 1e-11, "{}", mean.id());
        }
    }

    #[test]
    fn h_is_recovered_from_identity_pair() {
        let i = PdMatrix::identity(2);
        for mean in [OperatorMean::arith(), OperatorMean::harm(), OperatorMean::geom()] {
            for x in [0.25, 1.0, 3.0] {
                let xi = PdMatrix::scaled_identity(2, x).unwrap();
                let r = kubo_ando(&mean, &i, &xi).unwrap();
                let expected = HermitianMatrix::scaled_identity(2, mean.h().eval(x));
                assert!(r.max_abs_diff(&expected) < 1e-14);
            }
        }
    }

    #[test]
    fn mean_of_equal_arguments() {
        let a = random_pd(3, 9, 10.0).unwrap();
        for mean in [OperatorMean::arith(), OperatorMean::harm(), OperatorMean::geom()] {
            assert!(kubo_ando(&mean, &a, &a).unwrap().dist(&a) < 1e-13);
        }
    }

    #[test]
    fn geometric_with_zero_is_zero() {
        let a = PdMatrix::diag(&[2.0, 3.0]).unwrap();
        let g = geometric_psd(&a, &HermitianMatrix::zeros(2), 0.5).unwrap();
        assert!(g.norm() < 1e-15);
    }
}
