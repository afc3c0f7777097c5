//! `qstoch measures`: information measures of one distribution:
//! Shannon entropy in nats and bits, Fisher information for the
//! continuous parameter, and the first four raw moments, each with a
//! certified truncation half-width.

use qstoch::distributions::NbConvention;
use qstoch::hilbert::{build_state, fisher_information, moment, shannon_entropy, Measured};
use qstoch::{DistributionSpec, Parameter};

use super::TAIL_TOLERANCE;
use crate::report::{Cell, Report, Table};

pub fn run(spec_arg: &str, convention: NbConvention) -> qstoch::Result<Report> {
    let spec = DistributionSpec::parse(spec_arg, convention)?;
    let state = build_state(&spec, TAIL_TOLERANCE)?;

    let mut report = Report::new("measures");
    report.input("spec", spec.label());
    report.input("tail_tolerance", format!("{TAIL_TOLERANCE:e}"));
    if let DistributionSpec::NegativeBinomial(nb) = &spec {
        report.input(
            "nb_convention",
            match nb.convention() {
                NbConvention::Pmf => "pmf",
                NbConvention::Swapped => "swapped",
            },
        );
    }

    let nats = shannon_entropy(&state, std::f64::consts::E)?;
    let bits = shannon_entropy(&state, 2.0)?;
    put(&mut report, "entropy_nats", &nats);
    put(&mut report, "entropy_bits", &bits);

    match continuous_parameter(&spec) {
        Some(parameter) => match fisher_information(&spec, parameter) {
            Ok(info) => report.metric(&format!("fisher_{parameter}"), info),
            // A degenerate parameter (p at 0 or 1) still has entropy
            // and moments; report the gap instead of failing.
            Err(qstoch::Error::Domain(reason)) => {
                report.note(format!("fisher_{parameter} omitted: {reason}"));
            }
            Err(other) => return Err(other),
        },
        None => report.note(
            "all hypergeometric parameters are integral; \
             no continuous parameter carries Fisher information",
        ),
    }

    let mut rows = Vec::new();
    for k in 1..=4u32 {
        let m = moment(&state, k)?;
        put(&mut report, &format!("moment_{k}"), &m);
        rows.push(vec![
            Cell::Int(u64::from(k)),
            Cell::Number(m.value),
            Cell::Number(m.half_width),
        ]);
    }
    report.tables.push(Table {
        name: "moments".into(),
        columns: vec!["k".into(), "value".into(), "half_width".into()],
        rows,
    });

    report.note(
        "half_width entries bound the truncation uncertainty \
         contributed by the certified tail mass",
    );
    Ok(report)
}

fn put(report: &mut Report, name: &str, measured: &Measured) {
    report.metric(name, measured.value);
    report.metric(&format!("{name}_half_width"), measured.half_width);
}

fn continuous_parameter(spec: &DistributionSpec) -> Option<Parameter> {
    match spec {
        DistributionSpec::Binomial(_)
        | DistributionSpec::NegativeBinomial(_)
        | DistributionSpec::Geometric(_) => Some(Parameter::P),
        DistributionSpec::Poisson(_) => Some(Parameter::Lambda),
        DistributionSpec::Hypergeometric(_) => None,
    }
}
