//! Verification suites behind `verify`.
//!
//! Every suite returns one report record per check with a boolean `passed`
//! field. With `parallel` set, independent work items (indices or sample
//! points) run on the rayon pool; results are collected in item order so the
//! report does not depend on scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use zeta_alpha_core::alpha::{alpha_prime_via_integral, coefficient_bound, structural_checks_at, AlphaSequence};
use zeta_alpha_core::combinatorics::{
    laurent_to_series_in_u, power_sum_by_differentiation, power_sum_by_eulerian, power_sum_by_stirling2,
    power_sum_series_brute,
};
use zeta_alpha_core::special_values::{euler_formula, residue_identities_with, zeta_nonpositive_with};
use zeta_alpha_core::{
    build_alpha_prime, AlphaTable, Evaluator, HPComplex, Identity, SeriesError,
};

use crate::args::Suite;
use crate::input::{format_complex, parse_complex};
use crate::output::{finite, Kind, Record};
use crate::{exit, CliError};

pub const DEFAULT_STRUCTURE_KMAX: usize = 41;
pub const DEFAULT_BOUNDS_KMAX: usize = 10_000;

/// Points at which the coefficient bound is checked.
pub const BOUND_POINTS: [&str; 5] = ["2", "1/2", "-3/2", "3,4", "1/2,14"];

/// Points at which the two shifted forms are compared. All have `|s| < 2`,
/// where the positive-majorant certificate falls off like `1/N`.
pub const SHIFT_POINTS: [&str; 5] = ["1/2", "3/2", "-1/2,1", "6/5,-7/10", "1/3,3/2"];

/// Tolerance of the shifted-form comparison.
pub const SHIFT_TOL: f64 = 1e-3;

const PRECISION: usize = 128;

fn map_items<T: Sync, R: Send>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

fn point(text: &str) -> HPComplex {
    let (re, im) = parse_complex(text).expect("built-in point");
    HPComplex::from_rationals(&re, &im, PRECISION)
}

fn point_label(text: &str) -> String {
    let (re, im) = parse_complex(text).expect("built-in point");
    format_complex(&re, &im)
}

fn report(suite: &str, check: &str) -> Record {
    Record::new(Kind::Report).with("suite", suite).with("check", check)
}

/// One record per named check, listing the failing indices.
fn grouped(suite: &str, items: impl IntoIterator<Item = (&'static str, usize, bool)>) -> Vec<Record> {
    let mut groups: BTreeMap<&str, (usize, Vec<usize>)> = BTreeMap::new();
    let mut order = Vec::new();
    for (name, index, passed) in items {
        let g = groups.entry(name).or_insert_with(|| {
            order.push(name);
            (0, Vec::new())
        });
        g.0 += 1;
        if !passed {
            g.1.push(index);
        }
    }
    order
        .into_iter()
        .map(|name| {
            let (count, failed) = &groups[name];
            report(suite, name).with("count", *count).with("failed", failed.clone()).with("passed", failed.is_empty())
        })
        .collect()
}

pub fn structure(table: &AlphaTable, kmax: usize, parallel: bool) -> Vec<Record> {
    let ks: Vec<usize> = (0..=kmax).collect();
    let checks: Vec<_> = map_items(&ks, parallel, |&k| structural_checks_at(table, k, kmax)).into_iter().flatten().collect();
    let mut records = grouped("structure", checks.iter().map(|c| (c.property.name(), c.k, c.passed)));
    if kmax >= 2 {
        let residues = residue_identities_with(table, (kmax - 2) / 2);
        records.extend(grouped("structure", residues.checks.iter().map(|c| (c.name, c.index, c.passed))));
    }
    records
}

pub fn bounds(kmax: usize, parallel: bool) -> Result<Vec<Record>, CliError> {
    let results = map_items(&BOUND_POINTS, parallel, |text| {
        let s = point(text);
        let mut seq = AlphaSequence::new(&s, kmax + 1).map_err(|e| CliError::usage(e.to_string()))?;
        seq.extend_to(kmax);
        let (mut worst_k, mut worst) = (0, 0.0f64);
        let mut passed = true;
        for k in 0..=kmax {
            let a = seq.get(k).expect("extended").abs_upper();
            let b = coefficient_bound(&s, k);
            passed &= a <= b;
            let ratio = if b > 0.0 { a / b } else if a > 0.0 { f64::INFINITY } else { 0.0 };
            if ratio > worst {
                worst = ratio;
                worst_k = k;
            }
        }
        Ok(report("bounds", "coefficient_bound")
            .with("s", point_label(text))
            .with("kmax", kmax)
            .with("worst_k", worst_k)
            .with("worst_ratio", finite(worst))
            .with("passed", passed))
    });
    results.into_iter().collect()
}

fn shift_agreement(ev: &Evaluator, lambda: u32, text: &str) -> Record {
    let s = point(text);
    let a = ev.evaluate(Identity::ShiftStirling2 { lambda }, &s, SHIFT_TOL);
    let b = ev.evaluate(Identity::ShiftEulerian { lambda }, &s, SHIFT_TOL);
    let rec = report("identities", "shift_forms_agree").with("lambda", lambda).with("s", point_label(text));
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let diff = a.value.sub(&b.value).abs_upper();
            rec.with("stirling2", a.value.to_string())
                .with("eulerian", b.value.to_string())
                .with("difference", finite(diff))
                .with("tail_bound", finite(a.tail_bound.max(b.tail_bound)))
                .with("passed", diff <= 4.0 * SHIFT_TOL)
        }
        (a, b) => {
            let why = |r: Result<_, SeriesError>| r.err().map(|e| e.to_string()).unwrap_or_default();
            rec.with("error", format!("{} {}", why(a), why(b)).trim().to_string()).with("passed", false)
        }
    }
}

pub fn identities(lambda_max: usize, parallel: bool) -> Vec<Record> {
    let mut records = Vec::new();

    let primes = build_alpha_prime(lambda_max.max(20));
    let special = (1..=lambda_max).map(|l| ("special_values_match_euler", l, zeta_nonpositive_with(l, &primes).agree));
    records.extend(grouped("identities", special));

    let integral = (1..=20).map(|k| ("derivative_matches_integral", k, alpha_prime_via_integral(k) == primes.values[k]));
    records.extend(grouped("identities", integral));

    let forms = (0..=10).map(|l| {
        let brute = power_sum_series_brute(l, 12);
        let agree = [power_sum_by_differentiation(l), power_sum_by_stirling2(l), power_sum_by_eulerian(l)]
            .iter()
            .all(|laurent| laurent_to_series_in_u(laurent, 12) == brute);
        ("power_sum_forms_agree", l, agree)
    });
    records.extend(grouped("identities", forms));

    let ev = Evaluator::default();
    let one = HPComplex::from_i64(1, PRECISION);
    let collapse = (1..=6u32).map(|l| {
        let want = HPComplex::from_rational(&euler_formula(l as usize), PRECISION);
        let ok = [Identity::ShiftStirling2 { lambda: l }, Identity::ShiftEulerian { lambda: l }].iter().all(|id| {
            ev.evaluate(*id, &one, SHIFT_TOL)
                .is_ok_and(|r| r.tail_bound == 0.0 && r.value.sub(&want).abs_upper() < 1e-30)
        });
        ("collapse_at_one", l as usize, ok)
    });
    records.extend(grouped("identities", collapse));

    let items: Vec<(u32, &str)> = (1..=4).flat_map(|l| SHIFT_POINTS.iter().map(move |p| (l, *p))).collect();
    records.extend(map_items(&items, parallel, |(l, p)| shift_agreement(&ev, *l, p)));
    records
}

/// Runs `suite`; `table_for(k)` supplies an exact table covering `k`.
pub fn run_suite(
    suite: Suite,
    kmax: Option<usize>,
    parallel: bool,
    table_for: &dyn Fn(usize) -> Result<AlphaTable, CliError>,
) -> Result<Vec<Record>, CliError> {
    let mut records = Vec::new();
    if matches!(suite, Suite::Structure | Suite::All) {
        let k = kmax.unwrap_or(DEFAULT_STRUCTURE_KMAX);
        records.extend(structure(&table_for(k)?, k, parallel));
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        let l = kmax.unwrap_or(zeta_alpha_core::special_values::DEFAULT_MAX_LAMBDA);
        if l == 0 {
            return Err(CliError::new(exit::USAGE, "--kmax must be at least 1 for the identities suite"));
        }
        records.extend(identities(l, parallel));
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        records.extend(bounds(kmax.unwrap_or(DEFAULT_BOUNDS_KMAX), parallel)?);
    }
    Ok(records)
}

