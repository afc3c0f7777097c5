//! Independent oracles for the five families: exact big-integer
//! binomial coefficients and direct Kahan summation recompute every
//! closed form by a second route, so a regression in the log-space
//! engines cannot hide behind its own arithmetic.

use num_bigint::BigUint;
use num_complex::Complex64;

use qstoch::distributions::{DistributionSpec, NbConvention};
use qstoch::special::{log_choose, KahanComplexSum, KahanSum};

/// Exact C(a, b) by the multiplicative ladder; every division in the
/// loop is exact because i consecutive integers contain a multiple
/// of i!.
fn exact_choose(a: u64, b: u64) -> BigUint {
    let b = b.min(a - b);
    let mut c = BigUint::from(1u32);
    for i in 1..=b {
        c = c * BigUint::from(a - b + i) / BigUint::from(i);
    }
    c
}

/// Correctly rounded f64 of a big integer (Rust's decimal parser
/// rounds to nearest); all oracle values here stay below f64::MAX.
fn to_f64(x: &BigUint) -> f64 {
    x.to_string().parse::<f64>().expect("decimal parse")
}

/// Direct CF oracle: sum pmf(n) e^{i omega n} until the certified
/// tail majorant is negligible.
fn cf_by_sum(spec: &DistributionSpec, omega: f64) -> Complex64 {
    let family = spec.family();
    let mut sum = KahanComplexSum::new();
    let mut n = 0u64;
    loop {
        let p = family.pmf(n);
        sum.add(Complex64::from_polar(p, omega * n as f64));
        if family.support_max() == Some(n) || family.tail_bound(n + 1) <= 1e-17 {
            return sum.value();
        }
        n += 1;
        assert!(n < 1 << 21, "oracle sum runaway for {}", spec.label());
    }
}

fn pgf_by_sum(spec: &DistributionSpec, z: Complex64) -> Complex64 {
    let family = spec.family();
    let mut sum = KahanComplexSum::new();
    let mut zn = Complex64::new(1.0, 0.0);
    let mut n = 0u64;
    loop {
        sum.add(zn * family.pmf(n));
        if family.support_max() == Some(n) || family.tail_bound(n + 1) <= 1e-17 {
            return sum.value();
        }
        zn *= z;
        n += 1;
        assert!(n < 1 << 21, "oracle sum runaway for {}", spec.label());
    }
}

fn oracle_specs() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::binomial(10, 0.3).unwrap(),
        DistributionSpec::binomial(100, 0.04).unwrap(),
        DistributionSpec::binomial(96, 1.0 / 6.0).unwrap(),
        DistributionSpec::negative_binomial(3, 0.4, NbConvention::Pmf).unwrap(),
        DistributionSpec::negative_binomial(8, 0.75, NbConvention::Swapped).unwrap(),
        DistributionSpec::geometric(1.0 / 6.0).unwrap(),
        DistributionSpec::geometric(0.85).unwrap(),
        DistributionSpec::poisson(4.0).unwrap(),
        DistributionSpec::poisson(0.37).unwrap(),
        DistributionSpec::poisson(31.0).unwrap(),
        DistributionSpec::hypergeometric(52, 13, 5).unwrap(),
        DistributionSpec::hypergeometric(60, 24, 15).unwrap(),
    ]
}

#[test]
fn log_choose_matches_big_integer_oracle_exhaustively() {
    for a in 0..=60u64 {
        for b in 0..=a {
            let exact = to_f64(&exact_choose(a, b)).ln();
            let got = log_choose(a, b).unwrap();
            assert!(
                (got - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                "C({a},{b}): {got} vs {exact}"
            );
        }
    }
}

#[test]
fn log_choose_deep_anchors() {
    // The 1e-12 exp-space accuracy claim, at its worst cases.
    for (a, b) in [
        (200u64, 71u64),
        (500, 250),
        (777, 33),
        (1000, 1),
        (1000, 167),
        (1000, 500),
        (1000, 999),
    ] {
        let exact = to_f64(&exact_choose(a, b)).ln();
        let got = log_choose(a, b).unwrap();
        assert!(
            (got - exact).abs() <= 1e-12 * exact.abs().max(1.0),
            "C({a},{b}): {got} vs {exact}"
        );
    }
}

#[test]
fn binomial_pmf_matches_exact_coefficient_route() {
    for (n, p) in [(10u64, 0.3f64), (60, 0.5), (100, 0.04), (250, 1.0 / 6.0)] {
        let spec = DistributionSpec::binomial(n, p).unwrap();
        for k in 0..=n {
            let direct =
                to_f64(&exact_choose(n, k)) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
            if direct < 1e-280 {
                continue; // the oracle's powi route loses range first
            }
            let got = spec.pmf(k);
            assert!(
                (got - direct).abs() <= 1e-10 * direct,
                "n={n} p={p} k={k}: {got} vs {direct}"
            );
        }
    }
}

#[test]
fn negative_binomial_pmf_matches_exact_coefficient_route() {
    for (r, p, conv) in [
        (3u64, 0.4f64, NbConvention::Pmf),
        (12, 0.7, NbConvention::Pmf),
        (8, 0.25, NbConvention::Swapped),
    ] {
        let spec = DistributionSpec::negative_binomial(r, p, conv).unwrap();
        let pe = match conv {
            NbConvention::Pmf => p,
            NbConvention::Swapped => 1.0 - p,
        };
        for n in 0..300u64 {
            let direct = to_f64(&exact_choose(n + r - 1, n))
                * (1.0 - pe).powi(r as i32)
                * pe.powi(n as i32);
            if direct < 1e-280 {
                break;
            }
            let got = spec.pmf(n);
            assert!(
                (got - direct).abs() <= 1e-10 * direct,
                "r={r} p={p} n={n}: {got} vs {direct}"
            );
        }
    }
}

#[test]
fn hypergeometric_pmf_matches_exact_ratio() {
    for (pop, marked, draws) in [(52u64, 13u64, 5u64), (60, 24, 15), (500, 200, 100)] {
        let spec = DistributionSpec::hypergeometric(pop, marked, draws).unwrap();
        let denom = to_f64(&exact_choose(pop, draws));
        for k in 0..=draws.min(marked) {
            if draws - k > pop - marked {
                continue;
            }
            let direct =
                to_f64(&(exact_choose(marked, k) * exact_choose(pop - marked, draws - k))) / denom;
            let got = spec.pmf(k);
            assert!(
                (got - direct).abs() <= 1e-11 * direct.max(1e-30),
                "N={pop} K={marked} d={draws} k={k}: {got} vs {direct}"
            );
        }
    }
}

#[test]
fn characteristic_functions_match_direct_sums() {
    let omegas = [0.0, 0.1, 0.7, 1.3, std::f64::consts::PI, 2.9, 5.5];
    for spec in oracle_specs() {
        for &omega in &omegas {
            let closed = spec.cf(omega);
            let direct = cf_by_sum(&spec, omega);
            assert!(
                (closed - direct).norm() <= 1e-12,
                "{} at omega={omega}: {closed} vs {direct}",
                spec.label()
            );
        }
    }
}

#[test]
fn generating_functions_match_direct_sums() {
    let points = [
        Complex64::new(0.3, 0.4),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.99, 0.0),
        Complex64::new(1.0, 0.0),
    ];
    for spec in oracle_specs() {
        for &z in &points {
            let closed = spec.pgf(z).unwrap();
            let direct = pgf_by_sum(&spec, z);
            assert!(
                (closed - direct).norm() <= 1e-12,
                "{} at z={z}: {closed} vs {direct}",
                spec.label()
            );
        }
    }
}

#[test]
fn pgf_rejects_points_outside_the_disc() {
    for spec in oracle_specs() {
        assert!(spec.pgf(Complex64::new(1.2, 0.0)).is_err(), "{}", spec.label());
    }
}

#[test]
fn closed_moments_match_direct_sums() {
    for spec in oracle_specs() {
        let family = spec.family();
        let (mean, var) = spec.closed_moments();
        let mut m1 = KahanSum::new();
        let mut m2 = KahanSum::new();
        let mut n = 0u64;
        loop {
            let p = family.pmf(n);
            m1.add(n as f64 * p);
            m2.add((n as f64 - mean) * (n as f64 - mean) * p);
            if family.support_max() == Some(n) || family.tail_bound(n + 1) <= 1e-16 {
                break;
            }
            n += 1;
        }
        let scale_1 = mean.abs().max(1.0);
        let scale_2 = var.abs().max(1.0);
        assert!(
            (m1.value() - mean).abs() <= 1e-10 * scale_1,
            "{} mean: {} vs {mean}",
            spec.label(),
            m1.value()
        );
        assert!(
            (m2.value() - var).abs() <= 1e-9 * scale_2,
            "{} var: {} vs {var}",
            spec.label(),
            m2.value()
        );
    }
}
