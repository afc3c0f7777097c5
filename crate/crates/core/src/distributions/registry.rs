//! Name-based strategy registry for the distribution families.
//!
//! Each family registers a descriptor (name, aliases, parameter list,
//! builder). Runtime selection (the CLI `--spec` flag, config files,
//! tests sweeping families) goes through [`parse_spec`], so adding a
//! family is one new descriptor plus its `Family` impl.

use std::collections::BTreeMap;

use super::{DistributionSpec, NbConvention};
use crate::error::{Error, Result};

/// One named parameter of a family.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub doc: &'static str,
}

/// A registered family: how to name it and how to build it from a
/// parsed key=value map.
pub struct FamilyDescriptor {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub params: &'static [ParamSpec],
    build: fn(&BTreeMap<String, f64>, NbConvention) -> Result<DistributionSpec>,
}

impl FamilyDescriptor {
    pub fn build(
        &self,
        params: &BTreeMap<String, f64>,
        convention: NbConvention,
    ) -> Result<DistributionSpec> {
        for key in params.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(Error::InvalidParameter {
                    name: "spec",
                    reason: format!(
                        "unknown parameter `{key}` for family `{}` (expected: {})",
                        self.name,
                        self.param_names()
                    ),
                });
            }
        }
        (self.build)(params, convention)
    }

    fn param_names(&self) -> String {
        self.params
            .iter()
            .map(|p| p.name)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn require(params: &BTreeMap<String, f64>, name: &'static str) -> Result<f64> {
    params.get(name).copied().ok_or(Error::InvalidParameter {
        name,
        reason: "missing required parameter".into(),
    })
}

fn require_count(params: &BTreeMap<String, f64>, name: &'static str) -> Result<u64> {
    let v = require(params, name)?;
    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 2f64.powi(53)) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be a nonnegative integer, got {v}"),
        });
    }
    Ok(v as u64)
}

static FAMILIES: [FamilyDescriptor; 5] = [
    FamilyDescriptor {
        name: "binomial",
        aliases: &["bin"],
        params: &[
            ParamSpec {
                name: "n",
                doc: "trial count (nonnegative integer)",
            },
            ParamSpec {
                name: "p",
                doc: "success probability in [0, 1]",
            },
        ],
        build: |params, _| {
            DistributionSpec::binomial(require_count(params, "n")?, require(params, "p")?)
        },
    },
    FamilyDescriptor {
        name: "negative_binomial",
        aliases: &["nb", "negbin"],
        params: &[
            ParamSpec {
                name: "r",
                doc: "success count (positive integer)",
            },
            ParamSpec {
                name: "p",
                doc: "probability in (0, 1); meaning set by the convention flag",
            },
        ],
        build: |params, convention| {
            DistributionSpec::negative_binomial(
                require_count(params, "r")?,
                require(params, "p")?,
                convention,
            )
        },
    },
    FamilyDescriptor {
        name: "geometric",
        aliases: &["geom"],
        params: &[ParamSpec {
            name: "p",
            doc: "probability in (0, 1); P(n) = (1-p) p^n",
        }],
        build: |params, _| DistributionSpec::geometric(require(params, "p")?),
    },
    FamilyDescriptor {
        name: "poisson",
        aliases: &["pois"],
        params: &[ParamSpec {
            name: "lambda",
            doc: "positive rate",
        }],
        build: |params, _| DistributionSpec::poisson(require(params, "lambda")?),
    },
    FamilyDescriptor {
        name: "hypergeometric",
        aliases: &["hyper"],
        params: &[
            ParamSpec {
                name: "n",
                doc: "population size",
            },
            ParamSpec {
                name: "k",
                doc: "marked count (<= population)",
            },
            ParamSpec {
                name: "draws",
                doc: "sample size (<= population)",
            },
        ],
        build: |params, _| {
            DistributionSpec::hypergeometric(
                require_count(params, "n")?,
                require_count(params, "k")?,
                require_count(params, "draws")?,
            )
        },
    },
];

/// All registered families, in registration order.
pub fn registry() -> &'static [FamilyDescriptor] {
    &FAMILIES
}

/// Case-insensitive lookup by name or alias.
pub fn lookup(name: &str) -> Option<&'static FamilyDescriptor> {
    let lower = name.to_ascii_lowercase();
    FAMILIES
        .iter()
        .find(|d| d.name == lower || d.aliases.contains(&lower.as_str()))
}

/// Parse `family:key=value,key=value` into a validated spec.
pub fn parse_spec(s: &str, default_convention: NbConvention) -> Result<DistributionSpec> {
    let (family_part, param_part) = match s.split_once(':') {
        Some((f, p)) => (f.trim(), Some(p)),
        None => (s.trim(), None),
    };
    let descriptor = lookup(family_part).ok_or_else(|| Error::InvalidParameter {
        name: "spec",
        reason: format!(
            "unknown family `{family_part}` (known: {})",
            FAMILIES
                .iter()
                .map(|d| d.name)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    })?;

    let mut params = BTreeMap::new();
    if let Some(body) = param_part {
        for pair in body.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = pair.split_once('=').ok_or_else(|| Error::InvalidParameter {
                name: "spec",
                reason: format!("expected key=value, got `{pair}`"),
            })?;
            let key = key.trim().to_ascii_lowercase();
            let value: f64 = value.trim().parse().map_err(|_| Error::InvalidParameter {
                name: "spec",
                reason: format!("`{}` is not a number in `{pair}`", value.trim()),
            })?;
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "spec",
                    reason: format!("parameter `{key}` must be finite"),
                });
            }
            if params.insert(key.clone(), value).is_some() {
                return Err(Error::InvalidParameter {
                    name: "spec",
                    reason: format!("duplicate parameter `{key}`"),
                });
            }
        }
    }
    descriptor.build(&params, default_convention)
}
