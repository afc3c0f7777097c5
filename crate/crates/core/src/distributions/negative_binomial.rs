//! NegativeBinomial{r, p}: support starts at 0, r is a positive
//! integer number of successes.
//!
//! Two parameter conventions circulate for this family and published
//! tables mix them, so the convention is an explicit field:
//!
//! * `Pmf` (default): P(n) = C(n+r−1, n)·(1−p)^r·p^n, so `p` weights
//!   the counted event. CF: ((1−p)/(1−p·e^{iω}))^r.
//! * `Swapped`: the same formulas with p ↔ 1−p.
//!
//! Internally everything evaluates through the effective `Pmf`-side
//! parameter, so the two conventions share one code path.

use num_complex::Complex64;
use serde::Serialize;

use super::{check_count, check_open_unit, Family};
use crate::error::{Error, Result};
use crate::special::log_choose;

/// Which side of the p ↔ 1−p ambiguity the stored `p` refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NbConvention {
    #[default]
    Pmf,
    Swapped,
}

impl std::fmt::Display for NbConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NbConvention::Pmf => write!(f, "pmf"),
            NbConvention::Swapped => write!(f, "swapped"),
        }
    }
}

impl std::str::FromStr for NbConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pmf" => Ok(NbConvention::Pmf),
            "swapped" => Ok(NbConvention::Swapped),
            other => Err(Error::InvalidParameter {
                name: "convention",
                reason: format!("expected `pmf` or `swapped`, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeBinomial {
    r: u64,
    p: f64,
    convention: NbConvention,
}

impl NegativeBinomial {
    pub fn new(r: u64, p: f64, convention: NbConvention) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: "must be a positive integer".into(),
            });
        }
        check_count("r", r)?;
        check_open_unit("p", p)?;
        Ok(Self { r, p, convention })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn convention(&self) -> NbConvention {
        self.convention
    }

    /// The `Pmf`-convention parameter all formulas are written in.
    pub fn p_eff(&self) -> f64 {
        match self.convention {
            NbConvention::Pmf => self.p,
            NbConvention::Swapped => 1.0 - self.p,
        }
    }
}

impl Family for NegativeBinomial {
    fn name(&self) -> &'static str {
        "negative_binomial"
    }

    fn ln_pmf(&self, n: u64) -> f64 {
        let pe = self.p_eff();
        // ln C(n+r−1, n) + r·ln(1−pe) + n·ln(pe); the b = min(n, r−1)
        // product form makes the r = 1 (geometric) case exact.
        let choose = log_choose(n + self.r - 1, n).expect("n <= n + r - 1");
        choose + self.r as f64 * (-pe).ln_1p() + n as f64 * pe.ln()
    }

    fn cf(&self, omega: f64) -> Complex64 {
        let pe = self.p_eff();
        let denom = Complex64::new(1.0 - pe * omega.cos(), -pe * omega.sin());
        (Complex64::new(1.0 - pe, 0.0) / denom).powu(self.r as u32)
    }

    fn pgf(&self, z: Complex64) -> Result<Complex64> {
        let pe = self.p_eff();
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "pgf requires |z| <= 1, got |z| = {}",
                z.norm()
            )));
        }
        if z.norm() * pe >= 1.0 {
            return Err(Error::Domain(format!(
                "pgf argument outside the radius of convergence 1/{pe}"
            )));
        }
        let denom = Complex64::new(1.0, 0.0) - z * pe;
        Ok((Complex64::new(1.0 - pe, 0.0) / denom).powu(self.r as u32))
    }

    fn closed_moments(&self) -> (f64, f64) {
        let pe = self.p_eff();
        let q = 1.0 - pe;
        (self.r as f64 * pe / q, self.r as f64 * pe / (q * q))
    }

    fn support_max(&self) -> Option<u64> {
        None
    }

    fn tail_bound(&self, d: u64) -> f64 {
        match self.tail_ratio(d) {
            Some(q) if q < 1.0 => (self.pmf(d) / (1.0 - q)).min(1.0),
            _ => 1.0,
        }
    }

    fn tail_ratio(&self, d: u64) -> Option<f64> {
        // pmf(n+1)/pmf(n) = pe·(n+r)/(n+1), decreasing in n.
        let pe = self.p_eff();
        Some(pe * (d as f64 + self.r as f64) / (d as f64 + 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r1_matches_geometric_formula() {
        let nb = NegativeBinomial::new(1, 1.0 / 6.0, NbConvention::Pmf).unwrap();
        for n in 0..20u64 {
            let direct = (5.0 / 6.0) * (1.0f64 / 6.0).powi(n as i32);
            assert!(
                (nb.pmf(n) - direct).abs() <= 1e-13 * direct,
                "n={n}: {} vs {direct}",
                nb.pmf(n)
            );
        }
    }

    #[test]
    fn swapped_convention_flips_p() {
        let a = NegativeBinomial::new(3, 0.25, NbConvention::Pmf).unwrap();
        let b = NegativeBinomial::new(3, 0.75, NbConvention::Swapped).unwrap();
        for n in 0..30u64 {
            assert_eq!(a.pmf(n), b.pmf(n));
        }
        assert_eq!(a.cf(0.7), b.cf(0.7));
    }

    #[test]
    fn pmf_sums_to_one() {
        let nb = NegativeBinomial::new(4, 0.4, NbConvention::Pmf).unwrap();
        let total: f64 = (0..200).map(|n| nb.pmf(n)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cf_magnitude_bounded() {
        let nb = NegativeBinomial::new(5, 0.3, NbConvention::Pmf).unwrap();
        for i in 0..100 {
            let omega = i as f64 * 0.173;
            assert!(nb.cf(omega).norm() <= 1.0 + 1e-12);
        }
        assert!((nb.cf(0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        let nb = NegativeBinomial::new(3, 0.5, NbConvention::Pmf).unwrap();
        for d in [5u64, 10, 20] {
            let true_tail: f64 = (d..200).map(|n| nb.pmf(n)).sum();
            assert!(nb.tail_bound(d) >= true_tail);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NegativeBinomial::new(0, 0.5, NbConvention::Pmf).is_err());
        assert!(NegativeBinomial::new(2, 0.0, NbConvention::Pmf).is_err());
        assert!(NegativeBinomial::new(2, 1.0, NbConvention::Pmf).is_err());
    }

    #[test]
    fn closed_moments_match_summation() {
        let nb = NegativeBinomial::new(4, 1.0 / 6.0, NbConvention::Pmf).unwrap();
        let mean: f64 = (0..400).map(|n| n as f64 * nb.pmf(n)).sum();
        let (m, v) = nb.closed_moments();
        assert!((m - mean).abs() < 1e-12);
        let var: f64 = (0..400).map(|n| (n as f64 - m).powi(2) * nb.pmf(n)).sum();
        assert!((v - var).abs() < 1e-11);
    }
}
