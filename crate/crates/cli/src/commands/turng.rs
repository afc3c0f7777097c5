//! `qstoch turng`: generate modular digits and certify uniformity.
//! The verdict combines the analytic deviation of the projected law
//! with a two-sided chi-square test on the sampled stream.

use qstoch::distributions::NbConvention;
use qstoch::turng::{certify, generate, to_raw_bytes, Verdict};
use qstoch::DistributionSpec;

use crate::report::{Cell, Check, Report, Table};

/// Two-sided significance level: pass requires the chi-square p-value
/// inside [alpha, 1 - alpha].
pub const ALPHA: f64 = 1e-3;

/// Analytic gate: the projected law must sit within this distance of
/// uniform before the sampled stream is even consulted.
pub const ANALYTIC_GATE: f64 = 1e-3;

/// Runs the certification; when `want_stream` is set, also returns the
/// digit stream as raw bytes (one digit per byte) for the caller to
/// write out.
pub fn run(
    spec_arg: &str,
    modulus: u64,
    count: u64,
    seed: u64,
    convention: NbConvention,
    want_stream: bool,
) -> qstoch::Result<(Report, Option<Vec<u8>>)> {
    let spec = DistributionSpec::parse(spec_arg, convention)?;
    let cert = certify(&spec, modulus, count, seed, ALPHA)?;

    let mut report = Report::new("turng");
    report.input("spec", spec.label());
    report.input("modulus", modulus);
    report.input("count", count);
    report.input("seed", seed);
    report.input("alpha", format!("{ALPHA:e}"));

    report.metric("chi_square", cert.chi_square);
    report.metric("p_value", cert.p_value);
    report.metric("empirical_entropy_bits", cert.empirical_entropy_bits);
    report.metric("analytic_max_deviation", cert.analytic_max_deviation);

    let rows = cert
        .observed_counts
        .iter()
        .enumerate()
        .map(|(r, &c)| {
            vec![
                Cell::Int(r as u64),
                Cell::Int(c),
                Cell::Number(c as f64 / count as f64),
            ]
        })
        .collect();
    report.tables.push(Table {
        name: "residues".into(),
        columns: vec!["residue".into(), "count".into(), "frequency".into()],
        rows,
    });

    report.checks.push(Check {
        name: format!("p_value_in_[{ALPHA}, {}]", 1.0 - ALPHA),
        passed: cert.p_value >= ALPHA && cert.p_value <= 1.0 - ALPHA,
        observed: cert.p_value,
        bound: 1.0 - ALPHA,
    });
    report.checks.push(Check::against(
        "analytic_deviation",
        cert.analytic_max_deviation,
        ANALYTIC_GATE,
    ));
    // The two checks are exactly the certification legs.
    debug_assert_eq!(report.all_passed(), cert.verdict == Verdict::Pass);
    report.note(format!(
        "verdict: {}",
        if cert.verdict == Verdict::Pass {
            "pass"
        } else {
            "fail"
        }
    ));

    let stream = if want_stream {
        // Same spec, modulus, count, and seed: the regenerated stream
        // is the one the certification consumed.
        let digits = generate(&spec, modulus, count, seed)?;
        report.note("stream bytes carry one digit per byte");
        Some(to_raw_bytes(&digits)?)
    } else {
        None
    };
    Ok((report, stream))
}
