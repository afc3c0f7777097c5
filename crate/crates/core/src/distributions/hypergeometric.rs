//! Hypergeometric{N, K, draws}: marked items found when sampling
//! without replacement.

use num_complex::Complex64;
use serde::Serialize;

use super::{check_count, Family};
use crate::error::{Error, Result};
use crate::special::{log_choose, KahanComplexSum};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypergeometric {
    population: u64,
    marked: u64,
    draws: u64,
}

impl Hypergeometric {
    pub fn new(population: u64, marked: u64, draws: u64) -> Result<Self> {
        check_count("population", population)?;
        if marked > population {
            return Err(Error::InvalidParameter {
                name: "marked",
                reason: format!("must be <= population ({population}), got {marked}"),
            });
        }
        if draws > population {
            return Err(Error::InvalidParameter {
                name: "draws",
                reason: format!("must be <= population ({population}), got {draws}"),
            });
        }
        Ok(Self {
            population,
            marked,
            draws,
        })
    }

    pub fn population(&self) -> u64 {
        self.population
    }

    pub fn marked(&self) -> u64 {
        self.marked
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Support window [lo, hi] of possible marked counts.
    pub fn support(&self) -> (u64, u64) {
        let lo = self
            .draws
            .saturating_sub(self.population - self.marked);
        let hi = self.marked.min(self.draws);
        (lo, hi)
    }

    /// No closed CF exists; φ and G evaluate by exact finite summation
    /// over the support window.
    fn transform_sum(&self, z: Complex64) -> Complex64 {
        let (lo, hi) = self.support();
        let mut acc = KahanComplexSum::new();
        for n in lo..=hi {
            acc.add(z.powu(n as u32) * self.pmf(n));
        }
        acc.value()
    }
}

impl Family for Hypergeometric {
    fn name(&self) -> &'static str {
        "hypergeometric"
    }

    fn ln_pmf(&self, n: u64) -> f64 {
        let (lo, hi) = self.support();
        if n < lo || n > hi {
            return f64::NEG_INFINITY;
        }
        let a = log_choose(self.marked, n).expect("n <= marked in support");
        let b = log_choose(self.population - self.marked, self.draws - n)
            .expect("draws - n <= population - marked in support");
        let c = log_choose(self.population, self.draws).expect("draws <= population");
        a + b - c
    }

    fn cf(&self, omega: f64) -> Complex64 {
        self.transform_sum(Complex64::new(omega.cos(), omega.sin()))
    }

    fn pgf(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "pgf requires |z| <= 1, got |z| = {}",
                z.norm()
            )));
        }
        Ok(self.transform_sum(z))
    }

    fn closed_moments(&self) -> (f64, f64) {
        if self.population == 0 {
            return (0.0, 0.0);
        }
        let nn = self.population as f64;
        let frac = self.marked as f64 / nn;
        let d = self.draws as f64;
        let mean = d * frac;
        let variance = if self.population <= 1 {
            0.0
        } else {
            d * frac * (1.0 - frac) * (nn - d) / (nn - 1.0)
        };
        (mean, variance)
    }

    fn support_max(&self) -> Option<u64> {
        Some(self.support().1)
    }

    fn tail_bound(&self, d: u64) -> f64 {
        if d > self.support().1 {
            0.0
        } else {
            1.0
        }
    }

    fn tail_ratio(&self, _d: u64) -> Option<f64> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_case_10_4_5() {
        // Exact fractions: pmf = (1/42, 10/42, 20/42, 10/42, 1/42).
        let h = Hypergeometric::new(10, 4, 5).unwrap();
        let expected = [1.0, 10.0, 20.0, 10.0, 1.0].map(|x| x / 42.0);
        for (n, e) in expected.iter().enumerate() {
            assert!(
                (h.pmf(n as u64) - e).abs() < 1e-14,
                "n={n}: {} vs {e}",
                h.pmf(n as u64)
            );
        }
        let (m, _) = h.closed_moments();
        assert!((m - 2.0).abs() < 1e-14);
    }

    #[test]
    fn support_window_enforced() {
        // N=10, K=8, draws=5: at least 3 marked must appear.
        let h = Hypergeometric::new(10, 8, 5).unwrap();
        assert_eq!(h.support(), (3, 5));
        assert_eq!(h.pmf(2), 0.0);
        assert_eq!(h.pmf(6), 0.0);
        let total: f64 = (0..=5).map(|n| h.pmf(n)).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn cf_at_zero_is_one() {
        let h = Hypergeometric::new(20, 7, 9).unwrap();
        assert!((h.cf(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn cf_magnitude_bounded() {
        let h = Hypergeometric::new(20, 7, 9).unwrap();
        for i in 0..60 {
            assert!(h.cf(i as f64 * 0.19).norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn rejects_inconsistent_counts() {
        assert!(Hypergeometric::new(10, 11, 5).is_err());
        assert!(Hypergeometric::new(10, 4, 11).is_err());
    }

    #[test]
    fn moments_match_direct_summation() {
        let h = Hypergeometric::new(50, 20, 15).unwrap();
        let (lo, hi) = h.support();
        let mean: f64 = (lo..=hi).map(|n| n as f64 * h.pmf(n)).sum();
        let (m, v) = h.closed_moments();
        assert!((m - mean).abs() < 1e-12);
        let var: f64 = (lo..=hi)
            .map(|n| (n as f64 - mean).powi(2) * h.pmf(n))
            .sum();
        assert!((v - var).abs() < 1e-11);
    }
}
