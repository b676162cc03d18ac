//! Subcommand execution.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use num_traits::Zero;
use zeta_alpha_core::alpha::AlphaTable;
use zeta_alpha_core::series::{SeriesConfig, TailMethod, DEFAULT_EXACT_TABLE};
use zeta_alpha_core::special_values::zeta_nonpositive_with;
use zeta_alpha_core::{build_alpha_prime, build_alpha_table, format_rational, BigRational, Evaluator, HPComplex, SeriesError, SeriesResult};

use crate::args::{AlphaArgs, CacheCommand, Cli, Command, EvalArgs, SpecialArgs, VerifyArgs};
use crate::cache::{self, CacheError};
use crate::input::{format_complex, parse_complex};
use crate::output::{finite, write_records, Format, Kind, Record};
use crate::{exit, verify, CliError};

/// Runs one invocation and returns its exit code. Records go to `out`,
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if shown { write!(out, "{e}") } else { write!(err, "{e}") };
            return if shown { exit::OK } else { exit::USAGE };
        }
    };
    let ctx = Context { format: cli.format, cache: cli.cache.clone(), table_limit: cli.table_limit };
    let outcome = match &cli.command {
        Command::Alpha(a) => cmd_alpha(&ctx, a),
        Command::Eval(a) => cmd_eval(&ctx, a),
        Command::Special(a) => cmd_special(a),
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Cache(c) => cmd_cache(&ctx, c),
    };
    let (records, code) = match outcome {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.code;
        }
    };
    if let Err(e) = write_records(out, ctx.format, &records) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return exit::USAGE;
    }
    code
}

type Outcome = Result<(Vec<Record>, i32), CliError>;

struct Context {
    format: Format,
    cache: Option<PathBuf>,
    table_limit: usize,
}

impl Context {
    /// An exact table covering `k`: the configured cache, extended when
    /// `extend` is set, or a freshly built table within the on-demand limit.
    fn table(&self, k: usize, extend: bool) -> Result<AlphaTable, CliError> {
        match &self.cache {
            Some(path) => {
                let mut t = cache::load(path, None).map_err(cache_error)?;
                if k > t.max_k() {
                    if !extend {
                        return Err(limit_error(k, t.max_k()));
                    }
                    t.extend_to(k);
                }
                Ok(t)
            }
            None => {
                if k > self.table_limit {
                    return Err(limit_error(k, self.table_limit));
                }
                Ok(build_alpha_table(k))
            }
        }
    }
}

fn limit_error(k: usize, max_k: usize) -> CliError {
    CliError::new(exit::TABLE_LIMIT, format!("index {k} is beyond the table limit {max_k}"))
}

fn cache_error(e: CacheError) -> CliError {
    match e {
        CacheError::Limit { requested, available } => limit_error(requested, available),
        other => CliError::new(exit::CACHE, other.to_string()),
    }
}

fn cmd_alpha(ctx: &Context, a: &AlphaArgs) -> Outcome {
    let rec = Record::new(Kind::Exact).with("k", a.k);
    if a.prime {
        if a.k > ctx.table_limit {
            return Err(limit_error(a.k, ctx.table_limit));
        }
        let v = &build_alpha_prime(a.k).values[a.k];
        return Ok((vec![rec.with("quantity", "alpha_prime_at_1").with("value", format_rational(v))], exit::OK));
    }
    let table = ctx.table(a.k, false)?;
    let rec = match &a.at {
        Some(text) => {
            let (re, im) = parse_complex(text).map_err(CliError::usage)?;
            let p = table.alpha(a.k).expect("table covers k");
            // Horner over Gaussian rationals keeps the value exact.
            let (mut xr, mut xi) = (BigRational::zero(), BigRational::zero());
            for c in p.coeffs().iter().rev() {
                let nr = &xr * &re - &xi * &im + c;
                xi = &xr * &im + &xi * &re;
                xr = nr;
            }
            rec.with("quantity", "alpha_at")
                .with("s", format_complex(&re, &im))
                .with("value", format_complex(&xr, &xi))
        }
        None => rec.with("quantity", "alpha").with("value", table.format_alpha(a.k).expect("table covers k")),
    };
    Ok((vec![rec], exit::OK))
}

fn method_name(m: Option<TailMethod>) -> serde_json::Value {
    match m {
        Some(TailMethod::Exact) => "exact".into(),
        Some(TailMethod::PerTermBound) => "per-term-bound".into(),
        Some(TailMethod::PositiveMajorant) => "positive-majorant".into(),
        None => serde_json::Value::Null,
    }
}

/// The record for a numeric result; `value` and `value_im` are decimal
/// strings carrying the working precision.
pub fn numeric_record(identity: &str, s: Option<&str>, lambda: Option<u32>, r: &SeriesResult) -> Record {
    let (re, im) = r.value.to_decimal_parts(r.value.decimal_digits());
    let mut rec = Record::new(Kind::Numeric).with("identity", identity);
    if let Some(s) = s {
        rec = rec.with("s", s);
    }
    if let Some(l) = lambda {
        rec = rec.with("lambda", l);
    }
    rec.with("value", re)
        .with("value_im", im)
        .with("terms_used", r.terms_used)
        .with("tail_bound", finite(r.tail_bound))
        .with("tol", finite(r.target_tol))
        .with("precision", r.precision)
        .with("certified", r.certified())
        .with("method", method_name(r.method))
}

fn cmd_eval(ctx: &Context, a: &EvalArgs) -> Outcome {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(CliError::usage("--tol must be a positive number"));
    }
    let lambda = if a.identity.needs_lambda() {
        match a.lambda {
            Some(l) if l >= 1 => Some(l),
            Some(_) => return Err(CliError::usage("--lambda must be at least 1")),
            None => return Err(CliError::usage(format!("{} requires --lambda", a.identity.name()))),
        }
    } else {
        None
    };
    let prec = a.prec as usize;
    let (s, s_text) = match (&a.s, a.identity) {
        (_, crate::args::IdentityArg::Eulergamma) => (HPComplex::zero(prec), None),
        (Some(text), _) => {
            let (re, im) = parse_complex(text).map_err(CliError::usage)?;
            (HPComplex::from_rationals(&re, &im, prec), Some(format_complex(&re, &im)))
        }
        (None, _) => return Err(CliError::usage(format!("{} requires --s", a.identity.name()))),
    };
    let mut config = SeriesConfig { term_cap: a.term_cap as usize, ..SeriesConfig::default() };
    if let Some(l) = lambda {
        config.max_lambda = config.max_lambda.max(l);
    }
    let exact = ctx.table(DEFAULT_EXACT_TABLE, true)?;
    let ev = Evaluator::new(exact, config);
    let result = match a.identity.identity(lambda.unwrap_or(0)) {
        Some(id) => ev.evaluate(id, &s, a.tol),
        None => ev.zeta(&s, a.tol),
    };
    let record = |r: &SeriesResult| numeric_record(a.identity.name(), s_text.as_deref(), lambda, r);
    match result {
        Ok(r) => Ok((vec![record(&r)], exit::OK)),
        Err(SeriesError::BudgetExceeded { partial }) => Ok((vec![record(&partial)], exit::BUDGET)),
        Err(SeriesError::PoleAt { re, im }) => {
            Err(CliError::new(exit::POLE, format!("pole at s = {re}{}", if im != 0.0 { format!(",{im}") } else { String::new() })))
        }
        Err(SeriesError::PreconditionViolated(why)) => Err(CliError::usage(why)),
    }
}

fn cmd_special(a: &SpecialArgs) -> Outcome {
    let (lo, hi) = match (a.lambda, &a.range) {
        (Some(l), _) => (l, l),
        (None, Some(r)) => (r[0], r[1]),
        (None, None) => unreachable!("clap requires one of the two"),
    };
    if lo < 1 || lo > hi || hi > a.max_lambda {
        return Err(CliError::usage(format!("lambda range must satisfy 1 <= A <= B <= {}", a.max_lambda)));
    }
    let primes = build_alpha_prime(hi);
    let records = (lo..=hi)
        .map(|l| {
            let r = zeta_nonpositive_with(l, &primes);
            Record::new(Kind::Exact)
                .with("lambda", l)
                .with("value", format_rational(&r.via_alpha_prime))
                .with("euler_formula", format_rational(&r.via_euler))
                .with("k0_term", format_rational(&r.delta_term))
                .with("agree", r.agree)
        })
        .collect();
    Ok((records, exit::OK))
}

fn cmd_verify(ctx: &Context, a: &VerifyArgs) -> Outcome {
    let table_for = |k: usize| ctx.table(k + 1, true);
    let records = verify::run_suite(a.suite, a.kmax, a.parallel, &table_for)?;
    let passed = records.iter().all(|r| r.get("passed").and_then(|v| v.as_bool()).unwrap_or(true));
    let failures = records.iter().filter(|r| r.get("passed").and_then(|v| v.as_bool()) == Some(false)).count();
    let summary = Record::new(Kind::Report)
        .with("suite", "summary")
        .with("checks", records.len())
        .with("failures", failures)
        .with("passed", passed);
    let mut records = records;
    records.push(summary);
    Ok((records, if passed { exit::OK } else { exit::VERIFY_FAILED }))
}

fn cache_path<'a>(ctx: &'a Context, path: &'a Option<PathBuf>) -> Result<&'a Path, CliError> {
    path.as_deref()
        .or(ctx.cache.as_deref())
        .ok_or_else(|| CliError::usage("no cache path: pass --path, --cache or set ZETA_ALPHA_CACHE"))
}

fn cmd_cache(ctx: &Context, c: &CacheCommand) -> Outcome {
    match c {
        CacheCommand::Save { path, kmax } => {
            let path = cache_path(ctx, path)?;
            let table = build_alpha_table(*kmax);
            let sum = cache::save(path, &table).map_err(cache_error)?;
            let rec = Record::new(Kind::Report)
                .with("action", "save")
                .with("path", path.display().to_string())
                .with("max_k", table.max_k())
                .with("checksum", sum);
            Ok((vec![rec], exit::OK))
        }
        CacheCommand::Load { path, kmax } => {
            let path = cache_path(ctx, path)?;
            let table = cache::load(path, *kmax).map_err(cache_error)?;
            let rec = Record::new(Kind::Report)
                .with("action", "load")
                .with("path", path.display().to_string())
                .with("max_k", table.max_k())
                .with("checksum", cache::table_checksum(&table));
            Ok((vec![rec], exit::OK))
        }
    }
}
