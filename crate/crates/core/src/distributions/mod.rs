//! The five stochastic families behind a common strategy trait.
//!
//! Each family implements [`Family`]: exact scalar engines for the
//! probability mass function (always evaluated in log space), the
//! characteristic function, the probability generating function,
//! closed-form moments, and tail majorants used by adaptive
//! truncation. Families are registered by name in [`registry`] and
//! selected at runtime from parameter strings such as
//! `"poisson:lambda=4"`.

mod binomial;
mod geometric;
mod hypergeometric;
mod negative_binomial;
mod poisson;
pub mod registry;

pub use binomial::Binomial;
pub use geometric::Geometric;
pub use hypergeometric::Hypergeometric;
pub use negative_binomial::{NbConvention, NegativeBinomial};
pub use poisson::Poisson;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Strategy interface shared by all five families.
///
/// Implementations are pure and `Send + Sync`; a `&dyn Family` can be
/// evaluated concurrently without restriction.
pub trait Family: std::fmt::Debug + Send + Sync {
    /// Registry name ("binomial", "poisson", ...).
    fn name(&self) -> &'static str;

    /// Natural log of the pmf; `f64::NEG_INFINITY` outside the support.
    fn ln_pmf(&self, n: u64) -> f64;

    /// Probability mass at `n`; exactly 0 outside the support.
    fn pmf(&self, n: u64) -> f64 {
        let l = self.ln_pmf(n);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            l.exp()
        }
    }

    /// Characteristic function φ(ω) = E[e^{iωN}].
    fn cf(&self, omega: f64) -> Complex64;

    /// Probability generating function G(z) = E[z^N], |z| ≤ 1.
    fn pgf(&self, z: Complex64) -> Result<Complex64>;

    /// Closed-form (mean, variance).
    fn closed_moments(&self) -> (f64, f64);

    /// Largest support point, when the support is finite.
    fn support_max(&self) -> Option<u64>;

    /// Upper bound on P(N ≥ d). Exact 0 past a finite support; a
    /// Chernoff or geometric-series majorant for unbounded families.
    fn tail_bound(&self, d: u64) -> f64;

    /// Bound on pmf(n+1)/pmf(n) valid for every n ≥ d, when the family
    /// has one (unbounded families only). Callers must check it is
    /// below 1 before summing the implied geometric series.
    fn tail_ratio(&self, d: u64) -> Option<f64>;
}

/// Continuous parameters that information measures can differentiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    /// Success probability `p` (Binomial, NegativeBinomial, Geometric).
    P,
    /// Poisson rate `λ`.
    Lambda,
}

impl std::fmt::Display for Parameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parameter::P => write!(f, "p"),
            Parameter::Lambda => write!(f, "lambda"),
        }
    }
}

/// A validated stochastic-system family plus parameters.
///
/// This is the concrete, serializable form; algorithms consume the
/// [`Family`] strategy view via [`DistributionSpec::family`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    Binomial(Binomial),
    NegativeBinomial(NegativeBinomial),
    Geometric(Geometric),
    Poisson(Poisson),
    Hypergeometric(Hypergeometric),
}

impl DistributionSpec {
    pub fn binomial(n: u64, p: f64) -> Result<Self> {
        Ok(Self::Binomial(Binomial::new(n, p)?))
    }

    pub fn negative_binomial(r: u64, p: f64, convention: NbConvention) -> Result<Self> {
        Ok(Self::NegativeBinomial(NegativeBinomial::new(
            r, p, convention,
        )?))
    }

    pub fn geometric(p: f64) -> Result<Self> {
        Ok(Self::Geometric(Geometric::new(p)?))
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        Ok(Self::Poisson(Poisson::new(lambda)?))
    }

    pub fn hypergeometric(population: u64, marked: u64, draws: u64) -> Result<Self> {
        Ok(Self::Hypergeometric(Hypergeometric::new(
            population, marked, draws,
        )?))
    }

    /// Strategy view used by every downstream algorithm.
    pub fn family(&self) -> &dyn Family {
        match self {
            Self::Binomial(f) => f,
            Self::NegativeBinomial(f) => f,
            Self::Geometric(f) => f,
            Self::Poisson(f) => f,
            Self::Hypergeometric(f) => f,
        }
    }

    pub fn pmf(&self, n: u64) -> f64 {
        self.family().pmf(n)
    }

    pub fn ln_pmf(&self, n: u64) -> f64 {
        self.family().ln_pmf(n)
    }

    pub fn cf(&self, omega: f64) -> Complex64 {
        self.family().cf(omega)
    }

    pub fn pgf(&self, z: Complex64) -> Result<Complex64> {
        self.family().pgf(z)
    }

    pub fn closed_moments(&self) -> (f64, f64) {
        self.family().closed_moments()
    }

    /// Parse a runtime spec string, e.g. `"binomial:n=10,p=0.3"`.
    /// `default_convention` applies to `negative_binomial` specs that
    /// do not carry their own convention key.
    pub fn parse(s: &str, default_convention: NbConvention) -> Result<Self> {
        registry::parse_spec(s, default_convention)
    }

    /// Value of a continuous parameter.
    pub fn parameter_value(&self, parameter: Parameter) -> Result<f64> {
        match (self, parameter) {
            (Self::Binomial(f), Parameter::P) => Ok(f.p()),
            (Self::NegativeBinomial(f), Parameter::P) => Ok(f.p()),
            (Self::Geometric(f), Parameter::P) => Ok(f.p()),
            (Self::Poisson(f), Parameter::Lambda) => Ok(f.lambda()),
            _ => Err(Error::Domain(format!(
                "family `{}` has no continuous parameter `{parameter}`",
                self.family().name()
            ))),
        }
    }

    /// Same family with one continuous parameter replaced (revalidated).
    pub fn with_parameter(&self, parameter: Parameter, value: f64) -> Result<Self> {
        match (self, parameter) {
            (Self::Binomial(f), Parameter::P) => Self::binomial(f.n(), value),
            (Self::NegativeBinomial(f), Parameter::P) => {
                Self::negative_binomial(f.r(), value, f.convention())
            }
            (Self::Geometric(_), Parameter::P) => Self::geometric(value),
            (Self::Poisson(_), Parameter::Lambda) => Self::poisson(value),
            _ => Err(Error::Domain(format!(
                "family `{}` has no continuous parameter `{parameter}`",
                self.family().name()
            ))),
        }
    }

    /// Human-readable label, e.g. `binomial{n=10, p=0.3}`.
    pub fn label(&self) -> String {
        match self {
            Self::Binomial(f) => format!("binomial{{n={}, p={}}}", f.n(), f.p()),
            Self::NegativeBinomial(f) => format!(
                "negative_binomial{{r={}, p={}, convention={}}}",
                f.r(),
                f.p(),
                f.convention()
            ),
            Self::Geometric(f) => format!("geometric{{p={}}}", f.p()),
            Self::Poisson(f) => format!("poisson{{lambda={}}}", f.lambda()),
            Self::Hypergeometric(f) => format!(
                "hypergeometric{{n={}, k={}, draws={}}}",
                f.population(),
                f.marked(),
                f.draws()
            ),
        }
    }
}

/// Shared validation helper: probability strictly inside (0, 1).
pub(crate) fn check_open_unit(name: &'static str, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must lie strictly inside (0, 1), got {p}"),
        });
    }
    Ok(())
}

/// Shared validation helper: probability in the closed interval [0, 1].
pub(crate) fn check_closed_unit(name: &'static str, p: f64) -> Result<()> {
    // `!contains` keeps the NaN rejection a plain `p < 0.0 || p > 1.0` would lose.
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must lie in [0, 1], got {p}"),
        });
    }
    Ok(())
}

/// Shared cap keeping dense per-outcome work at desk scale.
pub(crate) const COUNT_CAP: u64 = 1 << 24;

pub(crate) fn check_count(name: &'static str, value: u64) -> Result<()> {
    if value > COUNT_CAP {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be <= {COUNT_CAP} (desk-scale cap), got {value}"),
        });
    }
    Ok(())
}
