//! Geometric{p}: P(n) = (1−p)·p^n, n ≥ 0.
//!
//! The geometric law is NegativeBinomial{r=1, p} exactly; every method
//! delegates through a freshly assembled r = 1 negative binomial so
//! both families run the identical code path (the hierarchy identity
//! holds to the bit, not merely to tolerance).

use num_complex::Complex64;
use serde::Serialize;

use super::{check_open_unit, Family, NbConvention, NegativeBinomial};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Geometric {
    p: f64,
}

impl Geometric {
    pub fn new(p: f64) -> Result<Self> {
        check_open_unit("p", p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn as_nb(&self) -> NegativeBinomial {
        NegativeBinomial::new(1, self.p, NbConvention::Pmf).expect("p already validated")
    }
}

impl Family for Geometric {
    fn name(&self) -> &'static str {
        "geometric"
    }

    fn ln_pmf(&self, n: u64) -> f64 {
        self.as_nb().ln_pmf(n)
    }

    fn cf(&self, omega: f64) -> Complex64 {
        self.as_nb().cf(omega)
    }

    fn pgf(&self, z: Complex64) -> Result<Complex64> {
        self.as_nb().pgf(z)
    }

    fn closed_moments(&self) -> (f64, f64) {
        self.as_nb().closed_moments()
    }

    fn support_max(&self) -> Option<u64> {
        None
    }

    fn tail_bound(&self, d: u64) -> f64 {
        self.as_nb().tail_bound(d)
    }

    fn tail_ratio(&self, d: u64) -> Option<f64> {
        self.as_nb().tail_ratio(d)
    }
}
