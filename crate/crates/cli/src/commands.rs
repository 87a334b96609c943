use std::fmt;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use seqforge::discovery::{berlekamp_massey_from, discover_order, RecurrenceReport};
use seqforge::fasteval::{eval_fast, tail_recurrence_of, EvalMode};
use seqforge::identities::{self, ConvergenceReport, IdentityReport};
use seqforge::recurrences::{even_gap_counts, generate, min_size_odd_gap_count, odd_gap_counts};
use seqforge::{BigCount, Condition, Error, GapParity, Oracle, SequenceId, SequenceWindow};

use crate::args::{
    Command, ConditionArgs, CountArgs, CountEngine, DiscoverArgs, EnumerateArgs, Format, RunConfig,
    SeqArgs, SeqEngine, VerifyArgs,
};

const SCHEMA: u32 = 1;

/// Exit statuses that still come with output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    VerificationFailed = 1,
    Inconclusive = 4,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Resource(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Resource(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EnumerationLimit { .. } => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(String, Status), Failure>;

pub fn dispatch(command: &Command, config: &RunConfig) -> Outcome {
    if config.format == Format::Bfile && !matches!(command, Command::Seq(_)) {
        return Err(Failure::Usage("b-file output is only available for seq".into()));
    }
    let oracle = Oracle::new(config.enum_limit)?;
    match command {
        Command::Count(args) => count(args, &oracle, config.format),
        Command::Seq(args) => seq(args, config.format),
        Command::Verify(args) => verify(args, &oracle, config.format),
        Command::Discover(args) => discover(args, config.format),
        Command::Enumerate(args) => enumerate(args, &oracle, config.format),
    }
}

fn condition(args: &ConditionArgs) -> Condition {
    Condition {
        alpha: args.alpha,
        beta: args.beta,
        gap_parity: args.gap_parity,
        min_size: args.min_size,
        forced_max: args.forced_max,
    }
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

fn condition_json(c: &Condition) -> Value {
    json!({
        "alpha": c.alpha,
        "beta": c.beta,
        "gap_parity": c.gap_parity.to_string(),
        "min_size": c.min_size,
        "forced_max": c.forced_max,
    })
}

fn count(args: &CountArgs, oracle: &Oracle, format: Format) -> Outcome {
    let c = condition(&args.condition);
    c.validate(args.n)?;
    let within_limit = args.n <= oracle.limit();
    let (value, engine) = match args.engine {
        CountEngine::Oracle | CountEngine::Auto if within_limit => {
            (oracle.count(args.n, &c)?, "oracle")
        }
        CountEngine::Oracle => {
            return Err(Error::EnumerationLimit { n: args.n, limit: oracle.limit() }.into());
        }
        CountEngine::Auto | CountEngine::Recurrence => match count_by_formula(args.n, &c) {
            Some(v) => (v?, "recurrence"),
            None => {
                return Err(Failure::Resource(format!(
                    "no recurrence engine covers this condition; n = {} needs enumeration \
                     (limit {})",
                    args.n,
                    oracle.limit()
                )))
            }
        },
    };
    let text = match format {
        Format::Table => format!("{value}\n"),
        Format::Csv => format!("n,count\n{},{value}\n", args.n),
        Format::Json => json_text(&json!({
            "schema": SCHEMA,
            "command": "count",
            "n": args.n,
            "condition": condition_json(&c),
            "engine": engine,
            "count": value.to_string(),
        })),
        Format::Bfile => unreachable!("rejected in dispatch"),
    };
    Ok((text, Status::Ok))
}

/// Counts from closed forms, recurrences or the dynamic program, for the
/// conditions that have one.
fn count_by_formula(n: u32, c: &Condition) -> Option<seqforge::Result<BigCount>> {
    if n == 0 {
        // only the empty set is available
        let empty_ok = c.min_size == 0 && c.forced_max.is_none();
        return Some(Ok(BigCount::from(u32::from(empty_ok))));
    }
    let no_gap_rules = c.alpha.is_none() && c.beta.is_none();
    match (c.gap_parity, c.forced_max) {
        (GapParity::Any, None) if c.min_size == 0 => match (c.alpha, c.beta) {
            (None, None) => Some(Ok(BigCount::from(1u32) << n)),
            (Some(alpha), beta) => Some(family_term(
                &SequenceId::SchreierZeckendorf { alpha, beta: beta.unwrap_or(1) },
                n.into(),
            )),
            (None, Some(_)) => None,
        },
        (GapParity::AllOdd, None) if no_gap_rules => {
            Some(Ok(min_size_odd_gap_count(n, c.min_size)))
        }
        (GapParity::AllOdd, Some(m)) if no_gap_rules && c.min_size <= 1 => {
            Some(odd_gap_counts(m).map(|(contain, _)| contain))
        }
        (GapParity::AllEven, Some(m)) if no_gap_rules && c.min_size <= 1 => {
            Some(even_gap_counts(m).map(|(contain, _)| contain))
        }
        (GapParity::AllEven, None) if no_gap_rules && c.min_size <= 1 => {
            Some(even_gap_counts(n).map(|(_, total)| total - c.min_size))
        }
        _ => None,
    }
}

fn family_term(id: &SequenceId, index: i64) -> seqforge::Result<BigCount> {
    let r = tail_recurrence_of(id)?;
    if index < r.valid_from() {
        return generate(id, index)?
            .get(index)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("{id} has no term at {index}")));
    }
    to_count(eval_fast(&r, index, EvalMode::exact())?)
}

fn to_count(v: BigInt) -> seqforge::Result<BigCount> {
    v.to_biguint()
        .ok_or_else(|| Error::InvalidParameter(format!("negative term {v} in a count sequence")))
}

fn family(args: &SeqArgs) -> Result<SequenceId, Failure> {
    let given = [("--alpha", args.alpha), ("--beta", args.beta), ("--n", args.n), ("--k", args.k)];
    let need = |flag: &str| -> Result<u32, Failure> {
        given
            .iter()
            .find(|(f, _)| *f == flag)
            .and_then(|(_, v)| *v)
            .ok_or_else(|| Failure::Usage(format!("family {} needs {flag}", args.family)))
    };
    let (id, used): (SequenceId, &[&str]) = match args.family.as_str() {
        "sz" => (
            SequenceId::SchreierZeckendorf { alpha: need("--alpha")?, beta: need("--beta")? },
            &["--alpha", "--beta"],
        ),
        "fib" | "F" => (SequenceId::Fibonacci, &[]),
        "H" | "h" => (SequenceId::H, &[]),
        "genfib" => (SequenceId::GenFib { n: need("--n")? }, &["--n"]),
        "genk" => (SequenceId::GenK { n: need("--n")? }, &["--n"]),
        "genh" => (SequenceId::GenH { n: need("--n")? }, &["--n"]),
        "oddgap-contain" => (SequenceId::OddGapContain, &[]),
        "oddgap-total" => (SequenceId::OddGapTotal, &[]),
        "evengap-contain" => (SequenceId::EvenGapContain, &[]),
        "evengap-total" => (SequenceId::EvenGapTotal, &[]),
        "minsize-oddgap" => (SequenceId::MinSizeOddGap { k: need("--k")? }, &["--k"]),
        other => return Err(Failure::Usage(format!("unknown family {other:?}"))),
    };
    if let Some((flag, _)) = given.iter().find(|(f, v)| v.is_some() && !used.contains(f)) {
        return Err(Failure::Usage(format!("{flag} does not apply to family {}", args.family)));
    }
    Ok(id)
}

fn seq(args: &SeqArgs, format: Format) -> Outcome {
    let id = family(args)?;
    let from = args.from.unwrap_or_else(|| id.natural_offset());
    if from < id.natural_offset() {
        return Err(Failure::Usage(format!(
            "{id} starts at index {}, not {from}",
            id.natural_offset()
        )));
    }
    if args.to < from {
        return Err(Failure::Usage(format!("empty range {from}..={}", args.to)));
    }
    let mode = match args.modulus {
        Some(m) => EvalMode::modular(m)?,
        None => EvalMode::exact(),
    };
    let mut window = match args.engine {
        SeqEngine::Direct => generate(&id, args.to)?.slice(from, args.to),
        SeqEngine::Fast => {
            let r = tail_recurrence_of(&id)?;
            let head = generate(&id, r.valid_from() - 1)?;
            let terms = (from..=args.to)
                .map(|i| match head.get(i) {
                    Some(t) => Ok(t.clone()),
                    None => to_count(eval_fast(&r, i, mode)?),
                })
                .collect::<seqforge::Result<Vec<_>>>()?;
            SequenceWindow::new(id.clone(), from, terms)
        }
    };
    if let Some(m) = args.modulus {
        let m = BigUint::from(m);
        for t in &mut window.terms {
            *t %= &m;
        }
    }
    Ok((render_window(&window, format), Status::Ok))
}

pub fn render_window(w: &SequenceWindow, format: Format) -> String {
    match format {
        Format::Bfile => w.to_bfile(),
        Format::Csv => {
            let mut out = String::from("index,value\n");
            for (i, t) in w.iter() {
                let _ = writeln!(out, "{i},{t}");
            }
            out
        }
        Format::Json => json_text(&json!({
            "schema": SCHEMA,
            "family": w.id.to_string(),
            "offset": w.offset,
            "terms": w.terms.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let width = w.last_index().map_or(5, |i| i.to_string().len().max(5));
            let mut out = format!("# {}\n{:>width$}  value\n", w.id, "index");
            for (i, t) in w.iter() {
                let _ = writeln!(out, "{i:>width$}  {t}");
            }
            out
        }
    }
}

/// Parses `0.001`, `1e-3`, `2.5E-4` and similar into an exact rational.
fn parse_decimal(s: &str) -> Option<num_rational::BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.trim_start_matches(['-', '+']).bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        num_rational::BigRational::from_integer(numer * pow)
    } else {
        num_rational::BigRational::new(numer, pow)
    })
}

const IDENTITY_IDS: [&str; 9] = [
    "fib-h",
    "gen-sum",
    "gen-shift",
    "min2-oddgap",
    "schreier-zeckendorf",
    "odd-gap",
    "even-gap",
    "bijection",
    "ratio",
];

fn verify(args: &VerifyArgs, oracle: &Oracle, format: Format) -> Outcome {
    let ids: Vec<&str> = match args.id.as_str() {
        "all" => IDENTITY_IDS.to_vec(),
        "sz" => vec!["schreier-zeckendorf"],
        id if IDENTITY_IDS.contains(&id) => vec![id],
        other => return Err(Failure::Usage(format!("unknown identity {other:?}"))),
    };
    let threshold = match &args.threshold {
        Some(t) => Some(
            parse_decimal(t).ok_or_else(|| Failure::Usage(format!("bad threshold {t:?}")))?,
        ),
        None => None,
    };
    if args.n.is_some_and(|n| n < 2) {
        return Err(Failure::Usage("--n must be >= 2".into()));
    }
    let gen_orders: Vec<u32> = args.n.map_or_else(|| (2..=8).collect(), |n| vec![n]);
    let enum_default = 20.min(oracle.limit());

    let mut reports: Vec<IdentityReport> = Vec::new();
    let mut convergence: Option<ConvergenceReport> = None;
    for id in ids {
        match id {
            "fib-h" => reports.push(identities::check_fib_h(args.to.unwrap_or(200))),
            "gen-sum" | "gen-shift" => {
                let to = args.to.unwrap_or(300);
                for &n in &gen_orders {
                    let mut report = if id == "gen-sum" {
                        identities::check_gen_sum(n, to)?
                    } else {
                        identities::check_gen_shift(n, to)?
                    };
                    report.identity_id = format!("{id}(n={n})");
                    reports.push(report);
                }
            }
            "min2-oddgap" => {
                let to = args.to.unwrap_or(500);
                let oracle_to = args.oracle_to.unwrap_or(enum_default.min(to));
                reports.push(identities::check_min2_odd_gap(oracle, oracle_to, to)?);
            }
            "schreier-zeckendorf" => reports.push(identities::check_schreier_zeckendorf(
                oracle,
                args.param_max,
                args.to.unwrap_or(18.min(oracle.limit())),
            )?),
            "odd-gap" => {
                reports.push(identities::check_odd_gap(oracle, args.to.unwrap_or(enum_default))?)
            }
            "even-gap" => {
                reports.push(identities::check_even_gap(oracle, args.to.unwrap_or(enum_default))?)
            }
            "bijection" => reports.push(identities::check_bijection(
                oracle,
                args.param_max,
                args.to.unwrap_or(15.min(oracle.limit())),
            )?),
            "ratio" => {
                let to = args.to.unwrap_or(60);
                reports.push(identities::check_ratio(oracle, to, threshold.as_ref())?);
                convergence = Some(identities::ratio_report(to)?);
            }
            _ => unreachable!("ids are validated above"),
        }
    }

    let passed = reports.iter().all(|r| r.passed);
    let text = match format {
        Format::Table => {
            let mut out = String::new();
            for r in &reports {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                let (lo, hi) = r.range_checked;
                let _ = write!(out, "{verdict} {} [{lo}, {hi}]", r.identity_id);
                if let Some(c) = &r.first_counterexample {
                    let _ = write!(out, " first counterexample at {}: {} != {}", c.index, c.lhs, c.rhs);
                }
                out.push('\n');
            }
            if let Some(conv) = &convergence {
                let last = conv.samples.last().expect("at least one sample");
                let _ = writeln!(
                    out,
                    "r({}) = {} = {}; 1 - r = {}",
                    last.n, last.ratio, last.ratio_decimal, conv.final_gap_decimal
                );
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("identity,from,to,passed,index,lhs,rhs\n");
            for r in &reports {
                let (lo, hi) = r.range_checked;
                let (index, lhs, rhs) = match &r.first_counterexample {
                    Some(c) => (c.index.to_string(), csv_field(&c.lhs), csv_field(&c.rhs)),
                    None => Default::default(),
                };
                let _ = writeln!(out, "{},{lo},{hi},{},{index},{lhs},{rhs}", r.identity_id, r.passed);
            }
            out
        }
        Format::Json => {
            let mut value = json!({
                "schema": SCHEMA,
                "command": "verify",
                "passed": passed,
                "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            });
            if let Some(conv) = &convergence {
                value["convergence"] = convergence_json(conv);
            }
            json_text(&value)
        }
        Format::Bfile => unreachable!("rejected in dispatch"),
    };
    Ok((text, if passed { Status::Ok } else { Status::VerificationFailed }))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn report_json(r: &IdentityReport) -> Value {
    json!({
        "identity": r.identity_id,
        "range": [r.range_checked.0, r.range_checked.1],
        "passed": r.passed,
        "counterexample": r.first_counterexample.as_ref().map(|c| json!({
            "index": c.index,
            "lhs": c.lhs,
            "rhs": c.rhs,
        })),
    })
}

fn convergence_json(c: &ConvergenceReport) -> Value {
    json!({
        "final_gap": c.final_gap.to_string(),
        "final_gap_decimal": c.final_gap_decimal,
        "samples": c.samples.iter().map(|s| json!({
            "n": s.n,
            "odd": s.odd.to_string(),
            "even": s.even.to_string(),
            "both": s.both.to_string(),
            "union": s.union.to_string(),
            "ratio": s.ratio.to_string(),
            "ratio_decimal": s.ratio_decimal,
            "even_to_odd": s.even_to_odd.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn discover(args: &DiscoverArgs, format: Format) -> Outcome {
    let report = match &args.terms {
        Some(terms) => {
            let terms = terms
                .iter()
                .map(|t| t.trim().parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(format!("bad term in --terms: {e}")))?;
            berlekamp_massey_from(&terms, args.offset)
        }
        None => {
            let (alpha, beta) = args.alpha.zip(args.beta).expect("clap enforces both");
            let probe = args.probe.unwrap_or(8 * (alpha + beta) as usize);
            discover_order(alpha, beta, probe)?
        }
    };
    let status = if !report.conclusive {
        Status::Inconclusive
    } else if args.expect_order.is_some_and(|e| e != report.order) {
        Status::VerificationFailed
    } else {
        Status::Ok
    };
    let text = match format {
        Format::Table => discovery_table(&report),
        Format::Csv => {
            let mut out = String::from("lag,coefficient\n");
            for (i, c) in report.rational_coeffs.iter().enumerate() {
                let _ = writeln!(out, "{},{c}", i + 1);
            }
            out
        }
        Format::Json => json_text(&json!({
            "schema": SCHEMA,
            "command": "discover",
            "conclusive": report.conclusive,
            "order": report.order,
            "coefficients": report.rational_coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "integral": report.found.is_some(),
            "valid_from": report.offset,
            "verified_upto": report.verified_upto,
            "minimal": report.minimal,
            "prefix_len": report.prefix_len,
            "expected_order": args.expect_order,
        })),
        Format::Bfile => unreachable!("rejected in dispatch"),
    };
    Ok((text, status))
}

fn discovery_table(report: &RecurrenceReport) -> String {
    if !report.conclusive {
        return format!(
            "inconclusive: {} terms from index {} are too few to fix the order\n",
            report.prefix_len, report.offset
        );
    }
    let coeffs: Vec<String> = report.rational_coeffs.iter().map(ToString::to_string).collect();
    let mut out = String::new();
    let _ = writeln!(out, "order: {}", report.order);
    let _ = writeln!(out, "coefficients: {}", coeffs.join(" "));
    let _ = writeln!(out, "valid from: {}", report.offset);
    match report.verified_upto {
        Some(i) => {
            let _ = writeln!(out, "verified up to: {i}");
        }
        None => out.push_str("verified up to: -\n"),
    }
    let _ = writeln!(out, "minimal: {}", if report.minimal { "yes" } else { "no" });
    out
}

fn enumerate(args: &EnumerateArgs, oracle: &Oracle, format: Format) -> Outcome {
    let c = condition(&args.condition);
    let subsets: Vec<_> = oracle.enumerate(args.n, &c)?.collect();
    let text = match format {
        Format::Table => subsets.iter().map(|s| format!("{s}\n")).collect(),
        Format::Csv => {
            let mut out = String::from("size,elements\n");
            for s in &subsets {
                let elems: Vec<String> = s.elements().iter().map(u32::to_string).collect();
                let _ = writeln!(out, "{},{}", s.len(), elems.join(" "));
            }
            out
        }
        Format::Json => json_text(&json!({
            "schema": SCHEMA,
            "command": "enumerate",
            "n": args.n,
            "condition": condition_json(&c),
            "count": subsets.len(),
            "subsets": subsets,
        })),
        Format::Bfile => unreachable!("rejected in dispatch"),
    };
    Ok((text, Status::Ok))
}
