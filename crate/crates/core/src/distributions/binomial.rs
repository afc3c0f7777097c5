//! Binomial{n, p}: count of successes in n independent trials.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use super::{check_closed_unit, check_count, Family};
use crate::error::{Error, Result};
use crate::special::KahanSum;

/// Binomial family. `p` may sit on the boundary of [0, 1], which
/// degenerates to a point mass at 0 or at n.
#[derive(Debug, Serialize)]
pub struct Binomial {
    n: u64,
    p: f64,
    /// Cumulative ln k! table, built lazily on first pmf evaluation.
    #[serde(skip)]
    ln_fact: OnceLock<Vec<f64>>,
}

impl Binomial {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        check_count("n", n)?;
        check_closed_unit("p", p)?;
        Ok(Self {
            n,
            p,
            ln_fact: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// ln C(n, k) from the cached ln-factorial table, combined with
    /// compensated summation to keep the cancellation error near one
    /// ulp of the result.
    fn ln_choose(&self, k: u64) -> f64 {
        let table = self.ln_fact.get_or_init(|| {
            let mut table = Vec::with_capacity(self.n as usize + 1);
            let mut acc = KahanSum::new();
            table.push(0.0);
            for i in 1..=self.n {
                acc.add((i as f64).ln());
                table.push(acc.value());
            }
            table
        });
        let mut s = KahanSum::new();
        s.add(table[self.n as usize]);
        s.add(-table[k as usize]);
        s.add(-table[(self.n - k) as usize]);
        s.value()
    }
}

impl Clone for Binomial {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            p: self.p,
            ln_fact: OnceLock::new(),
        }
    }
}

impl PartialEq for Binomial {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.p == other.p
    }
}

impl Family for Binomial {
    fn name(&self) -> &'static str {
        "binomial"
    }

    fn ln_pmf(&self, k: u64) -> f64 {
        if k > self.n {
            return f64::NEG_INFINITY;
        }
        // Degenerate endpoints carry all mass on a single outcome.
        if self.p == 0.0 {
            return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
        }
        if self.p == 1.0 {
            return if k == self.n { 0.0 } else { f64::NEG_INFINITY };
        }
        self.ln_choose(k) + k as f64 * self.p.ln() + (self.n - k) as f64 * (-self.p).ln_1p()
    }

    fn cf(&self, omega: f64) -> Complex64 {
        // φ(ω) = (1 − p + p·e^{iω})^n
        let base = Complex64::new(1.0 - self.p + self.p * omega.cos(), self.p * omega.sin());
        base.powu(self.n as u32)
    }

    fn pgf(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "pgf requires |z| <= 1, got |z| = {}",
                z.norm()
            )));
        }
        let base = Complex64::new(1.0 - self.p, 0.0) + z * self.p;
        Ok(base.powu(self.n as u32))
    }

    fn closed_moments(&self) -> (f64, f64) {
        let mean = self.n as f64 * self.p;
        (mean, mean * (1.0 - self.p))
    }

    fn support_max(&self) -> Option<u64> {
        Some(self.n)
    }

    fn tail_bound(&self, d: u64) -> f64 {
        if d > self.n {
            0.0
        } else {
            1.0
        }
    }

    fn tail_ratio(&self, _d: u64) -> Option<f64> {
        None
    }
}
