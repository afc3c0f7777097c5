//! Poisson{λ}: P(n) = e^{−λ}·λ^n/n!.

use num_complex::Complex64;
use serde::Serialize;

use super::Family;
use crate::error::{Error, Result};
use crate::special::ln_factorial;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poisson {
    lambda: f64,
}

impl Poisson {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be a positive finite rate, got {lambda}"),
            });
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Family for Poisson {
    fn name(&self) -> &'static str {
        "poisson"
    }

    fn ln_pmf(&self, n: u64) -> f64 {
        n as f64 * self.lambda.ln() - self.lambda - ln_factorial(n)
    }

    fn cf(&self, omega: f64) -> Complex64 {
        // φ(ω) = exp(λ(e^{iω} − 1)); |φ| = exp(λ(cos ω − 1)).
        Complex64::new(
            self.lambda * (omega.cos() - 1.0),
            self.lambda * omega.sin(),
        )
        .exp()
    }

    fn pgf(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "pgf requires |z| <= 1, got |z| = {}",
                z.norm()
            )));
        }
        Ok(((z - 1.0) * self.lambda).exp())
    }

    fn closed_moments(&self) -> (f64, f64) {
        (self.lambda, self.lambda)
    }

    fn support_max(&self) -> Option<u64> {
        None
    }

    fn tail_bound(&self, d: u64) -> f64 {
        // Chernoff majorant P(N ≥ d) ≤ e^{−λ}(eλ/d)^d for d > λ.
        let d = d as f64;
        if d <= self.lambda {
            return 1.0;
        }
        (-self.lambda + d + d * (self.lambda / d).ln()).exp().min(1.0)
    }

    fn tail_ratio(&self, d: u64) -> Option<f64> {
        // pmf(n+1)/pmf(n) = λ/(n+1), decreasing in n.
        Some(self.lambda / (d as f64 + 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_at_zero_is_exp_neg_lambda() {
        let p = Poisson::new(4.0).unwrap();
        assert!((p.pmf(0) - (-4.0f64).exp()).abs() < 1e-18);
        assert!((p.pmf(0) - 0.018_315_638_888_734_18).abs() < 1e-15);
    }

    #[test]
    fn pmf_recurrence() {
        // P(n+1)/P(n) = λ/(n+1).
        let p = Poisson::new(2.5).unwrap();
        for n in 0..30u64 {
            let ratio = p.pmf(n + 1) / p.pmf(n);
            assert!((ratio - 2.5 / (n as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn cf_magnitude_closed_form() {
        let p = Poisson::new(3.0).unwrap();
        for i in 0..50 {
            let omega = i as f64 * 0.21;
            let expected = (3.0 * (omega.cos() - 1.0)).exp();
            assert!((p.cf(omega).norm() - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn pgf_at_zero_is_p0() {
        let p = Poisson::new(4.0).unwrap();
        let g = p.pgf(Complex64::new(0.0, 0.0)).unwrap();
        assert!((g.re - p.pmf(0)).abs() < 1e-16);
        assert_eq!(g.im, 0.0);
    }

    #[test]
    fn chernoff_bound_dominates_tail() {
        let p = Poisson::new(4.0).unwrap();
        for d in [5u64, 8, 16, 32] {
            let true_tail: f64 = (d..200).map(|n| p.pmf(n)).sum();
            assert!(p.tail_bound(d) >= true_tail, "d={d}");
        }
    }

    #[test]
    fn rejects_bad_lambda() {
        assert!(Poisson::new(0.0).is_err());
        assert!(Poisson::new(-1.0).is_err());
        assert!(Poisson::new(f64::INFINITY).is_err());
    }
}
