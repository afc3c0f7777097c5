//! Amplitude states over the number basis and their information measures.
//!
//! A classical law P(n) becomes the state |psi> = sum_n sqrt(P(n)) |n>,
//! truncated at an adaptively chosen dimension with a certified tail
//! bound. Entropy and moments carry the truncation as an explicit
//! interval half-width instead of silently dropping it.

use serde::Serialize;

use crate::distributions::{DistributionSpec, Parameter};
use crate::error::{Error, Result};
use crate::special::KahanSum;

/// Hard cap on the adaptive truncation dimension.
pub const DIMENSION_CAP: usize = 1 << 20;

/// A value together with the half-width of its truncation interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measured {
    pub value: f64,
    pub half_width: f64,
}

/// Truncated amplitude vector alpha_0..alpha_{D-1} with tail bound.
///
/// Invariants: every amplitude is a nonnegative real (the positive
/// square-root phase convention) and sum(alpha^2) + tail_mass = 1
/// within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticState {
    amplitudes: Vec<f64>,
    tail_mass: f64,
    source: Option<DistributionSpec>,
}

impl StochasticState {
    /// Wrap an explicit amplitude vector. The normalization invariant
    /// is enforced at construction.
    pub fn from_amplitudes(amplitudes: Vec<f64>, tail_mass: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: "state must have at least one amplitude".into(),
            });
        }
        if !(tail_mass >= 0.0 && tail_mass.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tail_mass",
                reason: format!("must be finite and nonnegative, got {tail_mass}"),
            });
        }
        let mut norm = KahanSum::new();
        for (n, &a) in amplitudes.iter().enumerate() {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "amplitudes",
                    reason: format!("amplitude {n} = {a} is not a nonnegative real"),
                });
            }
            norm.add(a * a);
        }
        let total = norm.value() + tail_mass;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("sum of squares + tail = {total}, expected 1 within 1e-12"),
            });
        }
        Ok(StochasticState {
            amplitudes,
            tail_mass,
            source: None,
        })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn source(&self) -> Option<&DistributionSpec> {
        self.source.as_ref()
    }

    /// Probability of outcome n under the truncated law.
    pub fn probability(&self, n: usize) -> f64 {
        self.amplitudes.get(n).map_or(0.0, |a| a * a)
    }
}

/// Build the amplitude state of a distribution, truncated so the
/// certified tail bound is at most `tail_tolerance`.
///
/// Finite-support families are exact: the dimension spans the number
/// basis up to the top of the support and the tail is zero. Unbounded
/// families extend until the family's tail majorant (geometric for
/// NB/Geometric, Chernoff for Poisson) drops below tolerance.
pub fn build_state(spec: &DistributionSpec, tail_tolerance: f64) -> Result<StochasticState> {
    if !(tail_tolerance > 0.0 && tail_tolerance <= 1e-6) {
        return Err(Error::InvalidParameter {
            name: "tail_tolerance",
            reason: format!("must lie in (0, 1e-6], got {tail_tolerance}"),
        });
    }
    let family = spec.family();

    if let Some(top) = family.support_max() {
        let dim = (top + 1) as usize;
        if dim > DIMENSION_CAP {
            return Err(Error::Resource {
                context: format!("support of {} exceeds the 2^20 dimension cap", spec.label()),
                achieved: f64::NAN,
            });
        }
        let amplitudes: Vec<f64> = (0..dim as u64).map(|n| family.pmf(n).sqrt()).collect();
        return Ok(StochasticState {
            amplitudes,
            tail_mass: 0.0,
            source: Some(spec.clone()),
        });
    }

    let mut amplitudes = Vec::new();
    let mut head = KahanSum::new();
    loop {
        let n = amplitudes.len() as u64;
        let p = family.pmf(n);
        amplitudes.push(p.sqrt());
        head.add(p);
        let majorant = family.tail_bound(n + 1);
        if majorant <= tail_tolerance {
            // The reported tail is the sharper of the majorant and the
            // normalization gap, floored at zero against rounding.
            let tail_mass = (1.0 - head.value()).min(majorant).max(0.0);
            return Ok(StochasticState {
                amplitudes,
                tail_mass,
                source: Some(spec.clone()),
            });
        }
        if amplitudes.len() >= DIMENSION_CAP {
            return Err(Error::Resource {
                context: format!(
                    "tail tolerance {tail_tolerance:e} unreachable for {} within 2^20 terms",
                    spec.label()
                ),
                achieved: majorant,
            });
        }
    }
}

/// Shannon entropy of the state in the requested base, with the
/// truncation reported as an interval half-width tail * log(D).
pub fn shannon_entropy(state: &StochasticState, log_base: f64) -> Result<Measured> {
    if !(log_base > 1.0 && log_base.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "log_base",
            reason: format!("must be a finite real > 1, got {log_base}"),
        });
    }
    let ln_base = log_base.ln();
    let mut sum = KahanSum::new();
    for &a in &state.amplitudes {
        let p = a * a;
        if p > 0.0 {
            sum.add(-p * p.ln());
        }
    }
    let d_eff = state.dimension().max(2) as f64;
    Ok(Measured {
        value: sum.value() / ln_base,
        half_width: state.tail_mass * (d_eff.ln() / ln_base),
    })
}

/// Closed-form Fisher information of the family with respect to its
/// continuous parameter.
///
/// Binomial: n/(p(1-p)). Poisson: 1/lambda. NegativeBinomial in the
/// PMF convention P(n) = C(n+r-1,n)(1-p)^r p^n: r/(p(1-p)^2); in the
/// swapped convention: r/((1-p)p^2). Geometric is the r=1 case.
pub fn fisher_information(spec: &DistributionSpec, parameter: Parameter) -> Result<f64> {
    let theta = spec.parameter_value(parameter)?;
    match spec {
        DistributionSpec::Binomial(b) => {
            if !(theta > 0.0 && theta < 1.0) {
                return Err(Error::Domain(
                    "Fisher information requires p in the open interval (0, 1)".into(),
                ));
            }
            Ok(b.n() as f64 / (theta * (1.0 - theta)))
        }
        DistributionSpec::Poisson(_) => Ok(1.0 / theta),
        DistributionSpec::NegativeBinomial(nb) => {
            let r = nb.r() as f64;
            let pe = nb.p_eff();
            // d/dp and d/dp_eff differ only by sign, so the information
            // in p equals the information in p_eff of the PMF form.
            Ok(r / (pe * (1.0 - pe) * (1.0 - pe)))
        }
        DistributionSpec::Geometric(_) => {
            Ok(1.0 / (theta * (1.0 - theta) * (1.0 - theta)))
        }
        DistributionSpec::Hypergeometric(_) => Err(Error::Domain(
            "hypergeometric has no continuous parameter".into(),
        )),
    }
}

/// Finite-difference Fisher information 4 sum_n (d alpha_n / d theta)^2,
/// central differences refined by one Richardson step. Cross-check
/// path for [`fisher_information`].
pub fn fisher_information_fd(spec: &DistributionSpec, parameter: Parameter) -> Result<f64> {
    let theta = spec.parameter_value(parameter)?;
    let mut h = (1e-5 * theta.abs()).max(1e-5);
    if matches!(parameter, Parameter::P) {
        // Keep both probe points strictly inside (0, 1).
        h = h.min(theta / 2.0).min((1.0 - theta) / 2.0);
        if h <= 0.0 {
            return Err(Error::Domain(
                "Fisher information requires p in the open interval (0, 1)".into(),
            ));
        }
    } else {
        h = h.min(theta / 2.0);
    }
    let coarse = fd_quadratic_sum(spec, parameter, theta, h)?;
    let fine = fd_quadratic_sum(spec, parameter, theta, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn fd_quadratic_sum(
    spec: &DistributionSpec,
    parameter: Parameter,
    theta: f64,
    h: f64,
) -> Result<f64> {
    let plus = spec.with_parameter(parameter, theta + h)?;
    let minus = spec.with_parameter(parameter, theta - h)?;
    let dim = build_state(&plus, 1e-12)?
        .dimension()
        .max(build_state(&minus, 1e-12)?.dimension());
    let (fp, fm) = (plus.family(), minus.family());
    let mut sum = KahanSum::new();
    for n in 0..dim as u64 {
        let d = (fp.pmf(n).sqrt() - fm.pmf(n).sqrt()) / (2.0 * h);
        sum.add(d * d);
    }
    Ok(4.0 * sum.value())
}

/// k-th raw moment sum_n n^k P(n) of the truncated state, with a
/// majorant-based bound on the dropped tail as the half-width.
pub fn moment(state: &StochasticState, k: u32) -> Result<Measured> {
    if !(1..=8).contains(&k) {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("moment order must lie in 1..=8, got {k}"),
        });
    }
    let mut sum = KahanSum::new();
    for (n, &a) in state.amplitudes.iter().enumerate() {
        sum.add((n as f64).powi(k as i32) * a * a);
    }
    let half_width = if state.tail_mass == 0.0 {
        0.0
    } else {
        moment_tail_bound(state, k)
    };
    Ok(Measured {
        value: sum.value(),
        half_width,
    })
}

/// Upper bound on sum_{n >= D} n^k P(n) via the source family's
/// geometric tail majorant: P(D+j) <= P(D) q^j with q the pmf ratio
/// bound at D (non-increasing for the unbounded families here).
fn moment_tail_bound(state: &StochasticState, k: u32) -> f64 {
    let Some(spec) = &state.source else {
        return f64::INFINITY;
    };
    let family = spec.family();
    let d = state.dimension() as u64;
    let Some(q) = family.tail_ratio(d) else {
        return f64::INFINITY;
    };
    // NaN or q >= 1: no usable geometric bound.
    if q.is_nan() || q >= 1.0 {
        return f64::INFINITY;
    }
    let p_d = family.pmf(d);
    let mut acc = KahanSum::new();
    let mut weight = p_d;
    for j in 0..1_000_000u64 {
        let term = ((d + j) as f64).powi(k as i32) * weight;
        acc.add(term);
        if term < 1e-18 * acc.value().max(f64::MIN_POSITIVE) {
            break;
        }
        weight *= q;
    }
    acc.value()
}

/// Fidelity sum_n alpha_n beta_n, clamped to [0, 1], with the joint
/// tail bound sqrt(tail_a * tail_b) as the half-width.
pub fn overlap(a: &StochasticState, b: &StochasticState) -> Measured {
    let common = a.dimension().min(b.dimension());
    let mut sum = KahanSum::new();
    for n in 0..common {
        sum.add(a.amplitudes[n] * b.amplitudes[n]);
    }
    Measured {
        value: sum.value().clamp(0.0, 1.0),
        half_width: (a.tail_mass * b.tail_mass).sqrt(),
    }
}

/// Euclidean distance between amplitude vectors; indices beyond a
/// state's dimension contribute that state's amplitude as zero.
pub fn l2_distance(a: &StochasticState, b: &StochasticState) -> f64 {
    let dim = a.dimension().max(b.dimension());
    let mut sum = KahanSum::new();
    for n in 0..dim {
        let da = a.amplitudes.get(n).copied().unwrap_or(0.0);
        let db = b.amplitudes.get(n).copied().unwrap_or(0.0);
        let diff = da - db;
        sum.add(diff * diff);
    }
    sum.value().sqrt()
}

/// Negative Binomial hierarchy check: NB(1, p) and Geometric(p) must
/// build amplitude-identical states, term by term within one ulp.
pub fn nb_hierarchy_check(p: f64) -> Result<bool> {
    use crate::distributions::NbConvention;
    let nb = build_state(
        &DistributionSpec::negative_binomial(1, p, NbConvention::Pmf)?,
        1e-12,
    )?;
    let geom = build_state(&DistributionSpec::geometric(p)?, 1e-12)?;
    if nb.dimension() != geom.dimension() {
        return Ok(false);
    }
    Ok(nb
        .amplitudes
        .iter()
        .zip(&geom.amplitudes)
        .all(|(&x, &y)| ulp_distance(x, y) <= 1))
}

fn ulp_distance(x: f64, y: f64) -> u64 {
    if x == y {
        return 0;
    }
    if x.is_nan() || y.is_nan() || (x < 0.0) != (y < 0.0) {
        return u64::MAX;
    }
    x.to_bits().abs_diff(y.to_bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::NbConvention;

    fn binomial(n: u64, p: f64) -> DistributionSpec {
        DistributionSpec::binomial(n, p).unwrap()
    }

    fn poisson(lambda: f64) -> DistributionSpec {
        DistributionSpec::poisson(lambda).unwrap()
    }

    #[test]
    fn binomial_state_is_exact() {
        let state = build_state(&binomial(10, 0.3), 1e-12).unwrap();
        assert_eq!(state.dimension(), 11);
        assert_eq!(state.tail_mass(), 0.0);
        let norm: f64 = state.amplitudes().iter().map(|a| a * a).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_binomial_is_point_mass() {
        let state = build_state(&binomial(5, 0.0), 1e-12).unwrap();
        assert_eq!(state.amplitudes()[0], 1.0);
        assert!(state.amplitudes()[1..].iter().all(|&a| a == 0.0));
    }

    #[test]
    fn poisson_state_respects_tolerance() {
        let state = build_state(&poisson(4.0), 1e-12).unwrap();
        assert!(state.tail_mass() <= 1e-12);
        // alpha_n^2 = e^{-4} 4^n / n!.
        assert!((state.probability(0) - (-4.0f64).exp()).abs() < 1e-16);
        assert!((state.probability(3) - (-4.0f64).exp() * 64.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn unreachable_tolerance_reports_resource_error() {
        // A fat geometric tail cannot reach 1e-300... but tolerances are
        // capped at 1e-6, so force the cap with p extremely close to 1.
        let spec = DistributionSpec::geometric(1.0 - 1e-9).unwrap();
        match build_state(&spec, 1e-6) {
            Err(Error::Resource { achieved, .. }) => assert!(achieved > 1e-6),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    // Oracle digits kept verbatim; they round to the nearest f64.
    #[allow(clippy::excessive_precision)]
    fn entropy_matches_frozen_oracles() {
        // Frozen high-precision sums over the exact pmf. The oracle is
        // the infinite sum, so the unbounded state is built at 1e-15:
        // the truncation then sits well under the 1e-12 gate.
        let b = build_state(&binomial(10, 0.3), 1e-12).unwrap();
        let nats = shannon_entropy(&b, std::f64::consts::E).unwrap();
        assert!((nats.value - 1.7790787840900631).abs() < 1e-12);

        let p = build_state(&poisson(4.0), 1e-15).unwrap();
        let nats = shannon_entropy(&p, std::f64::consts::E).unwrap();
        let bits = shannon_entropy(&p, 2.0).unwrap();
        assert!((nats.value - 2.0866726998809638).abs() < 1e-12);
        assert!((bits.value - 3.0104323560766508).abs() < 1e-12);
        assert!(bits.half_width <= 1e-12 * (p.dimension() as f64).log2());
    }

    #[test]
    fn point_mass_entropy_is_zero() {
        let state = StochasticState::from_amplitudes(vec![1.0, 0.0], 0.0).unwrap();
        assert_eq!(shannon_entropy(&state, 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn entropy_rejects_bad_base() {
        let state = StochasticState::from_amplitudes(vec![1.0], 0.0).unwrap();
        assert!(shannon_entropy(&state, 1.0).is_err());
    }

    #[test]
    fn fisher_closed_forms() {
        let f = fisher_information(&binomial(10, 0.3), Parameter::P).unwrap();
        assert!((f - 10.0 / (0.3 * 0.7)).abs() < 1e-12);
        let f = fisher_information(&poisson(4.0), Parameter::Lambda).unwrap();
        assert!((f - 0.25).abs() < 1e-15);
        let f =
            fisher_information(&DistributionSpec::geometric(0.5).unwrap(), Parameter::P).unwrap();
        assert!((f - 8.0).abs() < 1e-12);
        let nb = DistributionSpec::negative_binomial(3, 0.4, NbConvention::Pmf).unwrap();
        let f = fisher_information(&nb, Parameter::P).unwrap();
        assert!((f - 3.0 / (0.4 * 0.36)).abs() < 1e-10);
    }

    #[test]
    fn fisher_rejects_boundary_and_mismatch() {
        assert!(fisher_information(&binomial(10, 0.0), Parameter::P).is_err());
        assert!(fisher_information(&binomial(10, 0.3), Parameter::Lambda).is_err());
        let h = DistributionSpec::hypergeometric(10, 4, 5).unwrap();
        assert!(fisher_information(&h, Parameter::P).is_err());
    }

    #[test]
    fn fisher_fd_agrees_with_analytic() {
        let cases: Vec<(DistributionSpec, Parameter)> = vec![
            (binomial(10, 0.3), Parameter::P),
            (poisson(4.0), Parameter::Lambda),
            (DistributionSpec::geometric(0.5).unwrap(), Parameter::P),
            (
                DistributionSpec::negative_binomial(3, 0.4, NbConvention::Pmf).unwrap(),
                Parameter::P,
            ),
            (
                DistributionSpec::negative_binomial(2, 0.7, NbConvention::Swapped).unwrap(),
                Parameter::P,
            ),
        ];
        for (spec, param) in cases {
            let analytic = fisher_information(&spec, param).unwrap();
            let fd = fisher_information_fd(&spec, param).unwrap();
            assert!(
                (fd - analytic).abs() <= 1e-4 * analytic.abs(),
                "{}: analytic {analytic} vs fd {fd}",
                spec.label()
            );
        }
    }

    #[test]
    fn moments_match_closed_forms() {
        let state = build_state(&poisson(4.0), 1e-12).unwrap();
        let m1 = moment(&state, 1).unwrap();
        assert!((m1.value - 4.0).abs() < 1e-9 + m1.half_width);

        let state = build_state(&binomial(10, 0.3), 1e-12).unwrap();
        let m2 = moment(&state, 2).unwrap();
        assert!((m2.value - 11.1).abs() < 1e-9);
        assert_eq!(m2.half_width, 0.0);

        let state = build_state(&DistributionSpec::geometric(1.0 / 6.0).unwrap(), 1e-12).unwrap();
        let m1 = moment(&state, 1).unwrap();
        assert!((m1.value - 0.2).abs() < 1e-9 + m1.half_width);
    }

    #[test]
    fn moment_rejects_out_of_envelope_order() {
        let state = build_state(&poisson(4.0), 1e-12).unwrap();
        assert!(moment(&state, 0).is_err());
        assert!(moment(&state, 9).is_err());
    }

    #[test]
    fn overlap_identity_and_orthogonality() {
        let psi = build_state(&binomial(10, 0.3), 1e-12).unwrap();
        let same = overlap(&psi, &psi);
        assert!((same.value - 1.0).abs() < 1e-12);

        let zero = StochasticState::from_amplitudes(vec![1.0, 0.0], 0.0).unwrap();
        let one = StochasticState::from_amplitudes(vec![0.0, 1.0], 0.0).unwrap();
        assert_eq!(overlap(&zero, &one).value, 0.0);
    }

    #[test]
    fn poisson_limit_overlap_anchor() {
        // Frozen oracle: <psi_B(100, 0.04) | psi_P(4)>.
        let b = build_state(&binomial(100, 0.04), 1e-12).unwrap();
        let p = build_state(&poisson(4.0), 1e-12).unwrap();
        let ov = overlap(&b, &p);
        assert!((ov.value - 0.9998953164648199).abs() < 1e-12);
        assert!(ov.value > 0.99 && ov.value < 1.0);
    }

    #[test]
    fn l2_distance_decreases_along_poisson_limit() {
        // Frozen oracle sequence for ||psi_B(n, 4/n) - psi_P(4)||.
        let expected = [
            (10, 0.18693390468814),
            (100, 0.014469522119273),
            (1000, 0.001417404468789),
            (10000, 0.00014145318494303),
        ];
        // Built at 1e-15: the oracle distances integrate the full tail,
        // and the finest row (1.4e-4) resolves truncation at 1e-12.
        let target = build_state(&poisson(4.0), 1e-15).unwrap();
        let mut last = f64::INFINITY;
        for (n, frozen) in expected {
            let b = build_state(&binomial(n, 4.0 / n as f64), 1e-15).unwrap();
            let d = l2_distance(&b, &target);
            assert!((d - frozen).abs() < 1e-10, "n={n}: {d} vs {frozen}");
            assert!(d < last);
            last = d;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn l2_orthogonal_point_masses() {
        let zero = StochasticState::from_amplitudes(vec![1.0, 0.0], 0.0).unwrap();
        let one = StochasticState::from_amplitudes(vec![0.0, 1.0], 0.0).unwrap();
        assert!((l2_distance(&zero, &one) - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(l2_distance(&zero, &zero), 0.0);
    }

    #[test]
    fn hierarchy_check_holds_across_p() {
        for p in [0.1, 1.0 / 6.0, 0.5, 0.9, 0.999] {
            assert!(nb_hierarchy_check(p).unwrap(), "p={p}");
        }
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(StochasticState::from_amplitudes(vec![], 0.0).is_err());
        assert!(StochasticState::from_amplitudes(vec![0.5], 0.0).is_err());
        assert!(StochasticState::from_amplitudes(vec![-1.0], 0.0).is_err());
        let half = std::f64::consts::FRAC_1_SQRT_2;
        assert!(StochasticState::from_amplitudes(vec![half, half], 0.0).is_ok());
    }
}
