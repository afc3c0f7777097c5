//! Modular projection: fold a distribution into M residue classes.
//!
//! Two independent routes compute the same law. `project_direct` sums
//! the pmf over each residue lattice; `project_cf` evaluates the
//! M-point inverse DFT of characteristic-function samples. Their
//! agreement is the executable form of the DFT identity
//! Pr[N mod M = r] = (1/M) sum_k phi(2 pi k / M) e^{-2 pi i k r / M}.

use num_complex::Complex64;
use serde::Serialize;

use crate::distributions::{DistributionSpec, NbConvention};
use crate::error::{Error, Result};
use crate::special::{KahanComplexSum, KahanSum};

/// Hard cap on lattice terms folded by the direct route.
pub const FOLD_CAP: usize = 1 << 20;

const TAU: f64 = std::f64::consts::TAU;

/// Probabilities of the M residue classes with deviation metrics.
///
/// `cf_bound` is the analytic per-point bound
/// (1/M) sum_{k=1}^{M-1} |phi(2 pi k / M)|, which dominates
/// `max_abs_deviation` for every law (bound dominance).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModularLaw {
    pub modulus: u64,
    pub probs: Vec<f64>,
    /// beta_k = sqrt(probs_k), the projected amplitudes.
    pub amplitudes: Vec<f64>,
    pub max_abs_deviation: f64,
    pub tv_distance: f64,
    pub cf_bound: f64,
    /// Unassigned pmf mass beyond the folding cutoff. It is spread
    /// uniformly over the residues, so each prob carries an implicit
    /// +/- residual_tail interval.
    pub residual_tail: f64,
}

/// Deviation of a law from exact uniform 1/M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformDeviation {
    pub max_abs: f64,
    pub tv: f64,
    /// M * sum_k (probs_k - 1/M)^2, the population chi-square.
    pub chi2_population: f64,
}

/// Analytic CF decay data for (spec, M).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfDecayBound {
    /// max over k in [1, M-1] of |phi(2 pi k / M)|.
    pub max_cf_magnitude: f64,
    /// (1/M) sum_{k=1}^{M-1} |phi(2 pi k / M)|.
    pub per_point_bound: f64,
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "modulus",
            reason: format!("must be an integer >= 2, got {m}"),
        });
    }
    Ok(())
}

fn finalize(spec: &DistributionSpec, m: u64, probs: Vec<f64>, residual_tail: f64) -> ModularLaw {
    let uniform = 1.0 / m as f64;
    let mut max_abs: f64 = 0.0;
    let mut tv = KahanSum::new();
    for &p in &probs {
        let dev = (p - uniform).abs();
        max_abs = max_abs.max(dev);
        tv.add(dev);
    }
    let bound = cf_decay_bound(spec, m).expect("modulus already validated");
    ModularLaw {
        modulus: m,
        amplitudes: probs.iter().map(|p| p.sqrt()).collect(),
        probs,
        max_abs_deviation: max_abs,
        tv_distance: 0.5 * tv.value(),
        cf_bound: bound.per_point_bound,
        residual_tail,
    }
}

/// Fold the pmf over residue lattices: probs_r = sum_j pmf(r + jM).
///
/// Unbounded supports truncate once the family's tail majorant drops
/// to `tail_tolerance`; the leftover mass is spread uniformly and
/// reported in `residual_tail` so conservation stays honest.
pub fn project_direct(
    spec: &DistributionSpec,
    m: u64,
    tail_tolerance: f64,
) -> Result<ModularLaw> {
    check_modulus(m)?;
    if !(tail_tolerance > 0.0 && tail_tolerance <= 1e-10) {
        return Err(Error::InvalidParameter {
            name: "tail_tolerance",
            reason: format!("must lie in (0, 1e-10], got {tail_tolerance}"),
        });
    }
    let family = spec.family();
    let mut residues: Vec<KahanSum> = (0..m).map(|_| KahanSum::new()).collect();

    if let Some(top) = family.support_max() {
        for n in 0..=top {
            residues[(n % m) as usize].add(family.pmf(n));
        }
        let probs = residues.iter().map(|s| s.value()).collect();
        return Ok(finalize(spec, m, probs, 0.0));
    }

    let mut head = KahanSum::new();
    let mut n: u64 = 0;
    let tail = loop {
        let p = family.pmf(n);
        residues[(n % m) as usize].add(p);
        head.add(p);
        let majorant = family.tail_bound(n + 1);
        if majorant <= tail_tolerance {
            break majorant.min((1.0 - head.value()).max(0.0));
        }
        n += 1;
        if n as usize >= FOLD_CAP {
            return Err(Error::Resource {
                context: format!(
                    "tail tolerance {tail_tolerance:e} unreachable for {} within 2^20 lattice terms",
                    spec.label()
                ),
                achieved: majorant,
            });
        }
    };
    let share = tail / m as f64;
    let probs = residues.iter().map(|s| s.value() + share).collect();
    Ok(finalize(spec, m, probs, tail))
}

/// Evaluate the M-point inverse DFT of CF samples.
///
/// The imaginary residue of each probability must vanish below 1e-10;
/// anything larger is a numerical-consistency failure, not noise.
pub fn project_cf(spec: &DistributionSpec, m: u64) -> Result<ModularLaw> {
    check_modulus(m)?;
    let samples: Vec<Complex64> = (0..m)
        .map(|k| spec.cf(TAU * k as f64 / m as f64))
        .collect();
    let mut probs = Vec::with_capacity(m as usize);
    for r in 0..m {
        let mut acc = KahanComplexSum::new();
        for (k, &phi) in samples.iter().enumerate() {
            // e^{-2 pi i k r / M} depends only on k r mod M; reducing
            // first keeps the angle small and the twiddle accurate.
            let angle = -TAU * ((k as u64 * r) % m) as f64 / m as f64;
            acc.add(phi * Complex64::from_polar(1.0, angle));
        }
        let z = acc.value() / m as f64;
        if z.im.abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "imaginary residue {:e} at residue {r} exceeds 1e-10 for {}",
                z.im,
                spec.label()
            )));
        }
        if z.re < -1e-10 {
            return Err(Error::Numerical(format!(
                "negative probability {:e} at residue {r} for {}",
                z.re,
                spec.label()
            )));
        }
        probs.push(z.re.clamp(0.0, 1.0));
    }
    Ok(finalize(spec, m, probs, 0.0))
}

/// Deviation metrics of a law against exact uniform.
pub fn uniform_deviation(law: &ModularLaw) -> UniformDeviation {
    let uniform = 1.0 / law.modulus as f64;
    let mut max_abs: f64 = 0.0;
    let mut tv = KahanSum::new();
    let mut sq = KahanSum::new();
    for &p in &law.probs {
        let dev = p - uniform;
        max_abs = max_abs.max(dev.abs());
        tv.add(dev.abs());
        sq.add(dev * dev);
    }
    UniformDeviation {
        max_abs,
        tv: 0.5 * tv.value(),
        chi2_population: law.modulus as f64 * sq.value(),
    }
}

/// CF magnitudes at the nonzero DFT nodes and the per-point bound they
/// imply on deviation from uniform.
pub fn cf_decay_bound(spec: &DistributionSpec, m: u64) -> Result<CfDecayBound> {
    check_modulus(m)?;
    let mut max_mag: f64 = 0.0;
    let mut sum = KahanSum::new();
    for k in 1..m {
        let mag = spec.cf(TAU * k as f64 / m as f64).norm();
        max_mag = max_mag.max(mag);
        sum.add(mag);
    }
    Ok(CfDecayBound {
        max_cf_magnitude: max_mag,
        per_point_bound: sum.value() / m as f64,
    })
}

/// Which family's scale parameter to search in [`turng_advise`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleQuery {
    /// Search lambda on a 0.1 grid, then bisect.
    Poisson,
    /// Search the trial count n upward from 1.
    Binomial { p: f64 },
    /// Search the success count r upward from 1.
    NegativeBinomial { p: f64, convention: NbConvention },
}

/// Advisor output: the minimal scale meeting the deviation target and
/// the coarse mean >= 2M heuristic for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Advice {
    pub minimal_scale: f64,
    pub achieved_deviation: f64,
    pub heuristic_scale: f64,
}

/// Search caps: integer scales stop at 4096, lambda at 512.
pub const SCALE_CAP_INTEGER: u64 = 4096;
pub const SCALE_CAP_LAMBDA: f64 = 512.0;

const ADVISE_TAIL: f64 = 1e-12;

/// Find the smallest scale parameter whose direct projection deviates
/// from uniform by at most epsilon.
pub fn turng_advise(query: &ScaleQuery, m: u64, epsilon: f64) -> Result<Advice> {
    check_modulus(m)?;
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must lie in (0, 0.1], got {epsilon}"),
        });
    }
    match *query {
        ScaleQuery::Poisson => advise_poisson(m, epsilon),
        ScaleQuery::Binomial { p } => {
            let build = |n: u64| DistributionSpec::binomial(n, p);
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter {
                    name: "p",
                    reason: format!("scale search requires p in (0, 1), got {p}"),
                });
            }
            let heuristic = (2.0 * m as f64 / p).ceil();
            advise_integer(m, epsilon, heuristic, &build)
        }
        ScaleQuery::NegativeBinomial { p, convention } => {
            let build = |r: u64| DistributionSpec::negative_binomial(r, p, convention);
            let spec1 = build(1)?;
            let (mean1, _) = spec1.closed_moments();
            let heuristic = (2.0 * m as f64 / mean1).ceil();
            advise_integer(m, epsilon, heuristic, &build)
        }
    }
}

fn deviation(spec: &DistributionSpec, m: u64) -> Result<f64> {
    Ok(project_direct(spec, m, ADVISE_TAIL)?.max_abs_deviation)
}

fn advise_poisson(m: u64, epsilon: f64) -> Result<Advice> {
    let dev_at = |lambda: f64| -> Result<f64> {
        deviation(&DistributionSpec::poisson(lambda)?, m)
    };
    let mut best = f64::INFINITY;
    let mut hit: Option<(f64, f64)> = None; // (lo bracket, hi bracket)
    let mut step = 1u64;
    while (step as f64) * 0.1 <= SCALE_CAP_LAMBDA {
        let lambda = step as f64 * 0.1;
        let dev = dev_at(lambda)?;
        best = best.min(dev);
        if dev <= epsilon {
            let lo = if step == 1 { 1e-6 } else { (step - 1) as f64 * 0.1 };
            hit = Some((lo, lambda));
            break;
        }
        step += 1;
    }
    let (mut lo, mut hi) = hit.ok_or(Error::Resource {
        context: format!("no lambda <= {SCALE_CAP_LAMBDA} meets deviation {epsilon:e} at M = {m}"),
        achieved: best,
    })?;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if dev_at(mid)? <= epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Advice {
        minimal_scale: hi,
        achieved_deviation: dev_at(hi)?,
        heuristic_scale: 2.0 * m as f64,
    })
}

fn advise_integer(
    m: u64,
    epsilon: f64,
    heuristic: f64,
    build: &dyn Fn(u64) -> Result<DistributionSpec>,
) -> Result<Advice> {
    let mut best = f64::INFINITY;
    for scale in 1..=SCALE_CAP_INTEGER {
        let dev = deviation(&build(scale)?, m)?;
        best = best.min(dev);
        if dev <= epsilon {
            return Ok(Advice {
                minimal_scale: scale as f64,
                achieved_deviation: dev,
                heuristic_scale: heuristic,
            });
        }
    }
    Err(Error::Resource {
        context: format!("no scale <= {SCALE_CAP_INTEGER} meets deviation {epsilon:e} at M = {m}"),
        achieved: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson(lambda: f64) -> DistributionSpec {
        DistributionSpec::poisson(lambda).unwrap()
    }

    #[test]
    fn conservation_and_geometric_closed_form() {
        // Folding the geometric series mod 4 has the closed form
        // probs_r = (1-p) p^r / (1 - p^4).
        let p: f64 = 1.0 / 6.0;
        let spec = DistributionSpec::geometric(p).unwrap();
        let law = project_direct(&spec, 4, 1e-13).unwrap();
        let total: f64 = law.probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for r in 0..4 {
            let expected = (1.0 - p) * p.powi(r as i32) / (1.0 - p.powi(4));
            assert!((law.probs[r] - expected).abs() < 1e-12, "residue {r}");
        }
        assert!((law.probs[0] - 0.83397683397683).abs() < 1e-12);
    }

    #[test]
    fn dual_routes_agree() {
        for (spec, m) in [
            (poisson(1.0), 4),
            (poisson(8.0), 5),
            (DistributionSpec::binomial(12, 1.0 / 6.0).unwrap(), 4),
            (DistributionSpec::hypergeometric(20, 8, 9).unwrap(), 3),
        ] {
            let direct = project_direct(&spec, m, 1e-13).unwrap();
            let via_cf = project_cf(&spec, m).unwrap();
            for r in 0..m as usize {
                assert!(
                    (direct.probs[r] - via_cf.probs[r]).abs() < 1e-10,
                    "{} M={m} r={r}",
                    spec.label()
                );
            }
        }
    }

    #[test]
    fn two_point_dft_formula() {
        let spec = DistributionSpec::binomial(7, 0.3).unwrap();
        let law = project_cf(&spec, 2).unwrap();
        let phi = spec.cf(std::f64::consts::PI);
        assert!(phi.im.abs() < 1e-12 || phi.im.abs() < 1e-10);
        assert!((law.probs[0] - (1.0 + phi.re) / 2.0).abs() < 1e-12);
        assert!((law.probs[1] - (1.0 - phi.re) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn poisson_lambda4_deviation_anchor() {
        // Frozen oracle: max deviation of the lambda=4, M=4 projection.
        let law = project_direct(&poisson(4.0), 4, 1e-13).unwrap();
        let dev = uniform_deviation(&law);
        assert!((dev.max_abs - 0.0070145).abs() < 1e-6);
        assert!(dev.max_abs <= law.cf_bound + 1e-10);
    }

    #[test]
    fn point_mass_deviation_extreme() {
        let spec = DistributionSpec::binomial(0, 0.3).unwrap();
        let law = project_direct(&spec, 4, 1e-13).unwrap();
        let dev = uniform_deviation(&law);
        assert!((dev.max_abs - 0.75).abs() < 1e-15);
        assert!((dev.tv - 0.75).abs() < 1e-15);
    }

    #[test]
    fn exact_uniform_law_has_zero_deviation() {
        // A fair coin folded mod 2 is exactly uniform: phi(pi) = 0.
        let spec = DistributionSpec::binomial(9, 0.5).unwrap();
        let law = project_direct(&spec, 2, 1e-13).unwrap();
        let dev = uniform_deviation(&law);
        assert!(dev.max_abs < 1e-15);
        assert!(dev.chi2_population < 1e-30);
        let bound = cf_decay_bound(&spec, 2).unwrap();
        assert!(bound.max_cf_magnitude < 1e-15);
    }

    #[test]
    fn poisson_cf_bound_closed_form() {
        // |phi(2 pi k / M)| = exp(lambda (cos(2 pi k / M) - 1)).
        let bound = cf_decay_bound(&poisson(8.0), 4).unwrap();
        let e8 = (-8.0f64).exp();
        let e16 = (-16.0f64).exp();
        assert!((bound.max_cf_magnitude - e8).abs() < 1e-18);
        assert!((bound.per_point_bound - (2.0 * e8 + e16) / 4.0).abs() < 1e-18);
    }

    #[test]
    fn imaginary_residue_gate_passes_for_families() {
        for m in [2u64, 3, 5, 8] {
            let law = project_cf(&poisson(2.0), m).unwrap();
            let total: f64 = law.probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(project_direct(&poisson(1.0), 1, 1e-13).is_err());
        assert!(project_direct(&poisson(1.0), 4, 1e-9).is_err());
        assert!(project_cf(&poisson(1.0), 0).is_err());
        assert!(turng_advise(&ScaleQuery::Poisson, 4, 0.2).is_err());
        assert!(turng_advise(&ScaleQuery::Binomial { p: 0.0 }, 4, 0.01).is_err());
    }

    #[test]
    fn advise_poisson_mod2_matches_bound_inversion() {
        // dev(lambda) = e^{-2 lambda} / 2 at M = 2, so the target
        // epsilon = e^{-4} is met exactly at lambda = 2 - ln(2)/2.
        let eps = (-4.0f64).exp();
        let advice = turng_advise(&ScaleQuery::Poisson, 2, eps).unwrap();
        let exact = 2.0 - 0.5 * std::f64::consts::LN_2;
        assert!(
            (advice.minimal_scale - exact).abs() < 1e-3,
            "lambda* = {}",
            advice.minimal_scale
        );
        assert!(advice.achieved_deviation <= eps);
        assert!((advice.heuristic_scale - 4.0).abs() < 1e-12);
    }

    #[test]
    fn advise_binomial_scale() {
        let advice = turng_advise(
            &ScaleQuery::Binomial { p: 1.0 / 6.0 },
            4,
            5e-5,
        )
        .unwrap();
        assert!(advice.minimal_scale <= 96.0);
        assert!(advice.achieved_deviation <= 5e-5);
        assert_eq!(advice.heuristic_scale, 48.0);
    }

    #[test]
    fn residual_tail_is_tiny_and_reported() {
        let law = project_direct(&poisson(1.0), 4, 1e-13).unwrap();
        assert!(law.residual_tail <= 1e-13);
        assert!(law.residual_tail >= 0.0);
    }
}
