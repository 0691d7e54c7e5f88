use std::path::PathBuf;

use rug::{Float, Rational};

use regrep_core::bench::{self, emit_csv, BenchConfig, DiscrepancyReport, TABLE_IDS};
use regrep_core::convergence::{analyze, auto_offset, limit_ratio, symbolic_shift, ConvergenceReport, LimitPrediction};
use regrep_core::iterative::{run_method, Method, DEFAULT_DIGIT_CEILING};
use regrep_core::numeric::{format_sci, log10_abs, parse_rational_list};
use regrep_core::powers::{
    accelerated_sequence, mat_pow, ratio_sequence, ApproximationRecord, ErrorOracle, FloatReference, PowerSchedule,
    SequencePoint,
};
use regrep_core::regrep::build;
use regrep_core::roots::{all_roots, MAX_PRECISION_BITS};
use regrep_core::{parse_rational, EntryIndex, Polynomial, RealRoot, RegRepMatrix, Weights};

use crate::args::{Command, PolyArgs, RatioArgs, Schedule, WeightArgs, OUT_DIR_ENV};
use crate::output::{render_all, Block};
use crate::{CliError, Ctx};

/// Text for the data stream, plus an error to report after it is written.
pub struct Outcome {
    pub text: String,
    pub deferred: Option<CliError>,
}

impl Outcome {
    fn done(ctx: &Ctx, blocks: &[Block]) -> Result<Outcome, CliError> {
        Ok(Outcome {
            text: render_all(blocks, ctx.format),
            deferred: None,
        })
    }
}

const APPROX_HEADER: [&str; 6] = ["n", "value_num", "value_den", "abs_error", "den_digits", "reduced_den_digits"];

pub fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Outcome, CliError> {
    match cmd {
        Command::Repr { poly, weights } => repr(ctx, poly, weights),
        Command::Power { poly, weights, n } => power(ctx, poly, weights, n.as_deref()),
        Command::Approx {
            poly,
            weights,
            ratio,
            offset,
            n,
            stride,
            schedule,
        } => approx(ctx, poly, weights, ratio, offset.as_deref(), n.as_deref(), *stride, *schedule),
        Command::CRatio { poly, weights } => c_ratio(ctx, poly, weights),
        Command::Limits { poly, weights, ratio } => limits(ctx, poly, weights, ratio),
        Command::Compare {
            poly,
            methods,
            x0,
            steps,
            digit_ceiling,
        } => compare(ctx, poly, methods.as_deref(), x0.as_deref(), *steps, *digit_ceiling),
        Command::Tables { id, out } => tables(ctx, id.as_deref(), out.clone()),
        Command::Roots { poly } => roots(ctx, poly),
    }
}

fn core<T>(param: &str, r: regrep_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::from_core(param, e))
}

fn polynomial(ctx: &Ctx, args: &PolyArgs) -> Result<Polynomial, CliError> {
    let text = ctx.req(args.poly.as_deref(), "poly")?;
    core("poly", text.parse::<Polynomial>())
}

fn weights(ctx: &Ctx, args: &WeightArgs, f: &Polynomial) -> Result<Weights, CliError> {
    let text = ctx.req(args.x.as_deref(), "x")?;
    let x = core("x", parse_rational_list(&text))?;
    if x.len() != f.degree() {
        return Err(CliError::Usage(format!(
            "--x: expected {} weights for a degree-{} polynomial, found {}",
            f.degree(),
            f.degree(),
            x.len()
        )));
    }
    core("x", Weights::new(x))
}

fn matrix(ctx: &Ctx, poly: &PolyArgs, w: &WeightArgs) -> Result<RegRepMatrix, CliError> {
    let f = polynomial(ctx, poly)?;
    let x = weights(ctx, w, &f)?;
    core("x", build(&f, &x))
}

fn entry(ctx: &Ctx, cli: Option<&str>, key: &str, m: usize) -> Result<Option<EntryIndex>, CliError> {
    match ctx.opt(cli, key)? {
        None => Ok(None),
        Some(s) => {
            let idx = core(key, s.parse::<EntryIndex>())?;
            core(key, idx.validate(m)).map(Some)
        }
    }
}

/// `5,20,35` or the inclusive range `1..20`.
fn n_list(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("--n: cannot parse {text:?}: {why}"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad("expected nonnegative integers"));
    let list = match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(bad("empty range"));
            }
            (a..=b).collect()
        }
        None => text.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
    };
    if list.is_empty() {
        return Err(bad("no values"));
    }
    Ok(list)
}

fn matrix_block(m: &regrep_core::RationalMatrix) -> Block {
    let mut b = Block::default();
    for row in m.rows() {
        b.push(row.iter().map(|q| q.to_string()).collect());
    }
    b
}

fn repr(ctx: &Ctx, poly: &PolyArgs, w: &WeightArgs) -> Result<Outcome, CliError> {
    let m = matrix(ctx, poly, w)?;
    Outcome::done(ctx, &[matrix_block(&m.entries)])
}

fn power(ctx: &Ctx, poly: &PolyArgs, w: &WeightArgs, n: Option<&str>) -> Result<Outcome, CliError> {
    let m = matrix(ctx, poly, w)?;
    let text = ctx.req(n, "n")?;
    let n = text
        .trim()
        .parse::<u64>()
        .map_err(|_| CliError::Usage(format!("--n: expected a nonnegative integer, found {text:?}")))?;
    Outcome::done(ctx, &[matrix_block(&mat_pow(&m, n).entries)])
}

/// Measures against `α_k + shift` with a certified root.
struct ShiftedRoot {
    root: RealRoot,
    shift: Rational,
}

impl ErrorOracle for ShiftedRoot {
    fn abs_error(&mut self, value: &Rational) -> regrep_core::Result<Float> {
        let v = Rational::from(value - &self.shift);
        self.root.abs_error(&v)
    }
}

fn record_row(r: &ApproximationRecord) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.value.numer().to_string(),
        r.value.denom().to_string(),
        format_sci(&r.abs_error, 6),
        r.den_digits.to_string(),
        r.reduced_den_digits.to_string(),
    ]
}

/// Significant-digit fixed notation for moderate magnitudes, e.g. `2.08815`.
fn fixed(x: &Float, sig: i32) -> String {
    let v = x.to_f64();
    if v == 0.0 || !v.is_finite() || v.abs() >= 1e15 || v.abs() < 1e-4 {
        return format_sci(x, sig as usize);
    }
    let e = v.abs().log10().floor() as i32;
    let decimals = (sig - 1 - e).max(0) as usize;
    format!("{v:.decimals$}")
}

#[allow(clippy::too_many_arguments)]
fn approx(
    ctx: &Ctx,
    poly: &PolyArgs,
    w: &WeightArgs,
    ratio: &RatioArgs,
    offset: Option<&str>,
    n: Option<&str>,
    stride: Option<u64>,
    schedule: Option<Schedule>,
) -> Result<Outcome, CliError> {
    let m = matrix(ctx, poly, w)?;
    let f = m.poly.clone();
    let dim = m.dim();
    let num = entry(ctx, ratio.num.as_deref(), "num", dim)?
        .ok_or_else(|| CliError::Usage("missing required parameter --num".into()))?;
    let den = entry(ctx, ratio.den.as_deref(), "den", dim)?
        .ok_or_else(|| CliError::Usage("missing required parameter --den".into()))?;
    let offset_text = ctx.opt(offset, "offset")?.unwrap_or_else(|| "0".into());
    let offset = if offset_text.trim() == "auto" {
        core("offset", auto_offset(&f, num, den))?
    } else {
        core("offset", parse_rational(&offset_text))?
    };
    let ns = n_list(&ctx.req(n, "n")?)?;
    let stride = ctx.parsed(stride, "stride")?;
    let schedule = match ctx.opt(schedule.map(|s| if s == Schedule::Linear { "linear" } else { "geometric" }), "schedule")? {
        None => None,
        Some(s) => match s.as_str() {
            "linear" => Some(PowerSchedule::Linear),
            "geometric" => Some(PowerSchedule::Geometric),
            other => return Err(CliError::Usage(format!("--schedule: expected linear or geometric, found {other:?}"))),
        },
    };
    if schedule.is_some() && stride.is_none() {
        return Err(CliError::Usage("--schedule: requires --stride".into()));
    }
    if stride.is_none() && ns.contains(&0) {
        return Err(CliError::Usage("--n: exponents must be at least 1 for a ratio".into()));
    }

    let report = core("x", analyze(&f, &m.weights, ctx.precision_bits))?;
    let k = report.dominant;
    let mut block = Block::with_header(&APPROX_HEADER);
    block.comment(format!("offset={offset}"));
    block.comment(format!(
        "dominant root index {k}, c = {}",
        fixed(&report.c_value, 6)
    ));
    let max_exponent = match (stride, schedule.unwrap_or(PowerSchedule::Linear)) {
        (None, _) => ns.iter().copied().max().unwrap_or(1) as f64,
        (Some(s), PowerSchedule::Linear) => (s * ns.iter().copied().max().unwrap_or(1)) as f64,
        (Some(s), PowerSchedule::Geometric) => (s as f64).powf(ns.iter().copied().max().unwrap_or(1) as f64),
    };

    let mut oracle: Box<dyn ErrorOracle> = match symbolic_shift(&f, num, den) {
        Some(shift) if report.roots.roots[k].is_real => {
            let total = Rational::from(&shift + &offset);
            block.comment(format!("errors against alpha_{k} + {total} (certified)"));
            Box::new(ShiftedRoot {
                root: core("poly", report.roots.real_root(k))?,
                shift: total,
            })
        }
        _ => {
            let log2_c = log10_abs(&report.c_value) / std::f64::consts::LOG10_2;
            let wanted = (max_exponent * log2_c + 64.0).min(f64::from(MAX_PRECISION_BITS));
            let bits = (wanted.ceil() as u32).max(ctx.precision_bits);
            let fine = if bits > report.precision_bits {
                core("x", analyze(&f, &m.weights, bits))?
            } else {
                report.clone()
            };
            let pred = core("num", limit_ratio(&fine, num, den))?;
            let target = Float::with_val(pred.limit.re.prec(), &pred.limit.re + &offset);
            block.comment(format!(
                "errors against the predicted limit {} (radius {})",
                format_sci(&target, 20),
                format_sci(&pred.limit_radius, 2)
            ));
            if wanted >= f64::from(MAX_PRECISION_BITS) {
                block.comment(format!("reference precision capped at {MAX_PRECISION_BITS} bits"));
            }
            Box::new(FloatReference(target))
        }
    };

    let points = match stride {
        None => ratio_sequence(&m, num, den, &offset, &ns, oracle.as_mut()),
        Some(s) => {
            block.comment(format!("n counts steps of N = M^{s}"));
            accelerated_sequence(
                &m,
                s,
                schedule.unwrap_or(PowerSchedule::Linear),
                num,
                den,
                &offset,
                &ns,
                oracle.as_mut(),
            )
        }
    };
    let points = core("den", points)?;
    for p in &points {
        match p {
            SequencePoint::Record(r) => block.push(record_row(r)),
            SequencePoint::Unavailable { n } => {
                eprintln!("note: M^n_({},{}) = 0 at n = {n}, skipped", den.row, den.col)
            }
        }
    }
    Outcome::done(ctx, &[block])
}

fn c_ratio(ctx: &Ctx, poly: &PolyArgs, w: &WeightArgs) -> Result<Outcome, CliError> {
    let f = polynomial(ctx, poly)?;
    let x = weights(ctx, w, &f)?;
    let r = core("x", analyze(&f, &x, ctx.precision_bits))?;
    let mut b = Block::with_header(&["key", "value"]);
    let mut kv = |k: &str, v: String| b.push(vec![k.to_string(), v]);
    kv("c", fixed(&r.c_value, 6));
    kv("c_digits", format_sci(&r.c_value, 20));
    kv("c_lower", format_sci(&r.c_lower, 6));
    kv("certified", r.certified.to_string());
    kv("dominant", r.dominant.to_string());
    kv("dominant_root", format_sci(&r.dominant_root().re, 20));
    kv("runner_up", r.runner_up.to_string());
    for (j, g) in r.gamma.iter().enumerate() {
        kv(&format!("gamma_modulus_{j}"), format_sci(&g.abs(), 12));
    }
    kv("precision_bits", r.precision_bits.to_string());
    Outcome::done(ctx, &[b])
}

fn limit_text(p: &LimitPrediction) -> String {
    if let Some(q) = &p.exact_limit {
        return q.to_string();
    }
    let mag = p.limit.abs();
    let digits = if p.limit_radius.is_zero() || mag.is_zero() {
        40
    } else {
        (log10_abs(&mag) - log10_abs(&p.limit_radius)).floor().clamp(3.0, 40.0) as usize
    };
    if p.limit.im.clone().abs() <= p.limit_radius {
        format_sci(&p.limit.re, digits)
    } else {
        format!("{}{:+}i", format_sci(&p.limit.re, digits), p.limit.im.to_f64())
    }
}

fn limit_row(p: &LimitPrediction) -> Vec<String> {
    vec![
        p.num.row.to_string(),
        p.num.col.to_string(),
        p.den.row.to_string(),
        p.den.col.to_string(),
        limit_text(p),
        format_sci(&p.rate_constant, 6),
        p.degenerate.to_string(),
    ]
}

fn limits(ctx: &Ctx, poly: &PolyArgs, w: &WeightArgs, ratio: &RatioArgs) -> Result<Outcome, CliError> {
    let f = polynomial(ctx, poly)?;
    let x = weights(ctx, w, &f)?;
    let m = f.degree();
    let num = entry(ctx, ratio.num.as_deref(), "num", m)?;
    let den = entry(ctx, ratio.den.as_deref(), "den", m)?;
    let report: ConvergenceReport = core("x", analyze(&f, &x, ctx.precision_bits))?;
    let mut b = Block::with_header(&["i", "j", "p", "q", "L", "rate_constant", "degenerate"]);
    b.comment(format!(
        "dominant root index {}, c = {}",
        report.dominant,
        fixed(&report.c_value, 6)
    ));
    let all: Vec<EntryIndex> = (1..=m).flat_map(|i| (1..=m).map(move |j| EntryIndex::new(i, j))).collect();
    let pairs: Vec<(EntryIndex, EntryIndex)> = match (num, den) {
        (Some(a), Some(b)) => vec![(a, b)],
        (Some(a), None) => all.iter().filter(|&&d| d != a).map(|&d| (a, d)).collect(),
        (None, Some(d)) => all.iter().filter(|&&a| a != d).map(|&a| (a, d)).collect(),
        (None, None) => all
            .iter()
            .flat_map(|&a| all.iter().filter(move |&&d| d != a).map(move |&d| (a, d)))
            .collect(),
    };
    let single = pairs.len() == 1;
    for (a, d) in pairs {
        match limit_ratio(&report, a, d) {
            Ok(p) => b.push(limit_row(&p)),
            Err(e) if !single => eprintln!("note: ({},{})/({},{}) skipped: {e}", a.row, a.col, d.row, d.col),
            Err(e) => return Err(CliError::from_core("den", e)),
        }
    }
    Outcome::done(ctx, &[b])
}

fn compare(
    ctx: &Ctx,
    poly: &PolyArgs,
    methods: Option<&str>,
    x0: Option<&str>,
    steps: Option<u64>,
    ceiling: Option<u64>,
) -> Result<Outcome, CliError> {
    let f = polynomial(ctx, poly)?;
    let methods: Vec<Method> = match ctx.opt(methods, "methods")? {
        None => Method::ALL.to_vec(),
        Some(s) => s
            .split(',')
            .map(|t| core("methods", t.parse::<Method>()))
            .collect::<Result<_, _>>()?,
    };
    let x0 = core("x0", parse_rational(&ctx.req(x0, "x0")?))?;
    let steps = ctx
        .parsed(steps, "steps")?
        .ok_or_else(|| CliError::Usage("missing required parameter --steps".into()))?;
    let ceiling = ctx.parsed(ceiling, "digit-ceiling")?.unwrap_or(DEFAULT_DIGIT_CEILING);
    let roots = core("poly", all_roots(&f, ctx.precision_bits))?;
    let idx = roots
        .nearest_real(x0.to_f64())
        .ok_or_else(|| CliError::Domain("--poly: no real root to measure against".into()))?;
    let mut blocks = Vec::new();
    let mut deferred = None;
    for method in methods {
        let mut b = Block::with_header(&APPROX_HEADER);
        b.comment(format!("method={method} x0={x0} root index {idx}"));
        let mut root = core("poly", roots.real_root(idx))?;
        match run_method(method, &f, &x0, steps, &mut root, ceiling) {
            Ok(recs) => {
                if (recs.len() as u64) < steps && recs.last().is_some_and(|r| !r.abs_error.is_zero()) {
                    b.comment(format!("stopped after {} steps at the digit ceiling {ceiling}", recs.len()));
                }
                for r in &recs {
                    b.push(record_row(r));
                }
            }
            Err(e) => {
                b.comment(format!("failed: {e}"));
                deferred.get_or_insert(CliError::from_core("methods", e));
            }
        }
        blocks.push(b);
    }
    Ok(Outcome {
        text: render_all(&blocks, ctx.format),
        deferred,
    })
}

fn tables(ctx: &Ctx, id: Option<&str>, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let id = ctx.opt(id, "id")?.unwrap_or_else(|| "all".into());
    let ids: Vec<u8> = if id.trim() == "all" {
        TABLE_IDS.to_vec()
    } else {
        id.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .ok()
                    .filter(|v| TABLE_IDS.contains(v))
                    .ok_or_else(|| CliError::Usage(format!("--id: expected 1..7 or all, found {t:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    let dir = match out {
        Some(d) => d,
        None => match ctx.file.get("out")? {
            Some(d) => PathBuf::from(d),
            None => std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from),
        },
    };
    let config = BenchConfig {
        precision_bits: ctx.precision_bits,
        ..BenchConfig::default()
    };
    let mut summary = Block::with_header(&["table", "file", "cells", "mismatches"]);
    let mut all = DiscrepancyReport::default();
    for id in ids {
        let t = core("id", bench::reproduce_table(id, &config))?;
        core("out", t.write(&dir))?;
        for note in &t.notes {
            eprintln!("table {id}: {note}");
        }
        summary.push(vec![
            id.to_string(),
            dir.join(t.file_name()).display().to_string(),
            t.report.rows.len().to_string(),
            t.report.mismatches().count().to_string(),
        ]);
        all.extend(t.report);
    }
    let path = dir.join("discrepancies.csv");
    core("out", emit_csv(&path, &DiscrepancyReport::header(), &all.csv_rows()))?;
    summary.comment(format!("per-cell comparison in {}", path.display()));
    Outcome::done(ctx, &[summary])
}

fn roots(ctx: &Ctx, poly: &PolyArgs) -> Result<Outcome, CliError> {
    let f = polynomial(ctx, poly)?;
    let set = core("poly", all_roots(&f, ctx.precision_bits))?;
    let digits = ((f64::from(ctx.precision_bits) * std::f64::consts::LOG10_2).floor() as usize).max(6);
    let mut b = Block::with_header(&["index", "re", "im", "radius", "is_real"]);
    for r in &set.roots {
        b.push(vec![
            r.index.to_string(),
            format_sci(&r.center.re, digits),
            format_sci(&r.center.im, digits),
            format_sci(&r.radius, 3),
            r.is_real.to_string(),
        ]);
    }
    Outcome::done(ctx, &[b])
}
