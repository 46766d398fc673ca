use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use weingarten::arith::{laurent_at_infinity, rf_eval, BigRational, Field, Matrix};
use weingarten::brauer::{e_of_a, h_series_of_a, mobius_matrix, mu_of_a};
use weingarten::json::{
    laurent_to_json, matrix_to_json, mc_estimate_to_json, parse_matrix, pole_report_to_json,
    ratfunc_to_json, rational_to_json,
};
use weingarten::montecarlo::{mc_integral, HaarSampleConfig};
use weingarten::pairings::{enumerate_pairings_with_limit, ExponentMatrix, Pairing};
use weingarten::selftest::{run_all, Level, SelftestConfig};
use weingarten::weingarten::{
    integral, weingarten_numeric, weingarten_symbolic, Limits, Mode, DENSE_K_LIMIT,
};
use weingarten::zonal::{pole_candidates, pole_check, ZonalEngine};
use weingarten::Error;

/// Exact moments of Haar-random orthogonal matrices.
#[derive(Parser, Debug)]
#[command(name = "weingarten", version)]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct MatrixInput {
    /// Exponent matrix as JSON, e.g. "[[2,0],[0,2]]".
    #[arg(long)]
    pub inline: Option<String>,
    /// File holding the exponent matrix as JSON.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// I(a) as a rational function of n.
    Exact {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// I(a) at a fixed n.
    Eval {
        #[command(flatten)]
        input: MatrixInput,
        /// Matrix size.
        #[arg(long)]
        n: u64,
    },
    /// Laurent coefficients of I(a) through n^-(k+D), with signed path counts.
    Asympt {
        #[command(flatten)]
        input: MatrixInput,
        /// Highest defect D to report.
        #[arg(long)]
        order: usize,
    },
    /// The Weingarten matrix, symbolic or at a fixed n.
    Wg {
        /// Half the number of points; rows are pairings of 1..2k.
        #[arg(long)]
        k: usize,
        /// Evaluate at this n; symbolic when omitted.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Distance and Moebius matrices of the Brauer space D_k.
    Mobius {
        /// Half the number of points.
        #[arg(long)]
        k: usize,
    },
    /// Zonal-function Weingarten matrix with per-partition terms.
    Zonal {
        /// Half the number of points.
        #[arg(long)]
        k: usize,
    },
    /// Poles of I(a) against the candidate set.
    Poles {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Monte Carlo estimate of I(a).
    Mc {
        #[command(flatten)]
        input: MatrixInput,
        /// Matrix size.
        #[arg(long)]
        n: usize,
        /// Number of Haar samples.
        #[arg(long)]
        samples: u64,
        /// PRNG seed.
        #[arg(long)]
        seed: u64,
        /// Worker threads; each owns its own stream.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run the acceptance checks.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Computation(String),
    /// Checks ran but some failed; carries the report.
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read_matrix(input: &MatrixInput) -> Result<ExponentMatrix, Failure> {
    let text = match (&input.inline, &input.matrix) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            return Err(Failure::Usage(
                "one of --inline or --matrix is required".into(),
            ))
        }
    };
    parse_matrix(&text).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(pretty: bool, value: &Value, text: impl FnOnce() -> String) -> String {
    if pretty {
        text()
    } else {
        value.to_string()
    }
}

fn pairing_labels(k: usize) -> Result<Vec<Pairing>, Failure> {
    Ok(enumerate_pairings_with_limit(k, DENSE_K_LIMIT)?)
}

fn table<T>(labels: &[Pairing], m: &Matrix<T>, cell: impl Fn(&T) -> String) -> String
where
    T: Field,
{
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate() {
        let cells: Vec<String> = m.row(i).iter().map(&cell).collect();
        let _ = writeln!(out, "{label:>12}  {}", cells.join("  "));
    }
    out.trim_end().to_string()
}

pub fn run(cli: &Cli) -> Outcome {
    let pretty = cli.pretty;
    match &cli.verb {
        Verb::Exact { input } => {
            let a = read_matrix(input)?;
            let f = integral(&a, Mode::Symbolic)?
                .value
                .symbolic()
                .cloned()
                .expect("symbolic mode");
            Ok(emit(pretty, &ratfunc_to_json(&f), || f.to_string()))
        }
        Verb::Eval { input, n } => {
            let a = read_matrix(input)?;
            let x = eval(&a, *n)?;
            Ok(emit(pretty, &rational_to_json(&x), || x.to_string()))
        }
        Verb::Asympt { input, order } => asympt(&read_matrix(input)?, *order, pretty),
        Verb::Wg { k, n } => wg(*k, *n, pretty),
        Verb::Mobius { k } => mobius(*k, pretty),
        Verb::Zonal { k } => zonal(*k, pretty),
        Verb::Poles { input } => {
            let report = pole_check(&read_matrix(input)?)?;
            let v = pole_report_to_json(&report);
            Ok(emit(pretty, &v, || {
                let list = |xs: Vec<String>| xs.join(", ");
                format!(
                    "candidates: {{{}}}\nactual:     {{{}}}\ncontained:  {}",
                    list(report.candidates.iter().map(i64::to_string).collect()),
                    list(report.actual.iter().map(BigRational::to_string).collect()),
                    report.contained
                )
            }))
        }
        Verb::Mc {
            input,
            n,
            samples,
            seed,
            workers,
        } => mc(&read_matrix(input)?, *n, *samples, *seed, *workers, pretty),
        Verb::Selftest { level } => selftest(*level, pretty),
    }
}

/// Symbolic evaluation when `n >= k`; the pseudo-inverse at fixed `n`
/// otherwise, or when the symbolic guard is exceeded.
fn eval(a: &ExponentMatrix, n: u64) -> Result<BigRational, Failure> {
    let k = a.total() / 2;
    if n >= k && (k as usize) <= Limits::from_env().symbolic_k {
        let need = a.p().max(a.q()) as u64;
        if n < need {
            return Err(Failure::Computation(format!(
                "n = {n} is smaller than the matrix dimensions (needs n >= {need})"
            )));
        }
        let f = integral(a, Mode::Symbolic)?
            .value
            .symbolic()
            .cloned()
            .expect("symbolic mode");
        return Ok(rf_eval(&f, &BigRational::from_integer(n.into()))?);
    }
    Ok(integral(a, Mode::Numeric(n))?
        .value
        .numeric()
        .cloned()
        .expect("numeric mode"))
}

fn asympt(a: &ExponentMatrix, order: usize, pretty: bool) -> Outcome {
    let result = integral(a, Mode::Symbolic)?;
    let f = result.value.symbolic().expect("symbolic mode");
    let k = result.k;
    let series = laurent_at_infinity(f, (k + order) as i64)?;
    // non-admissible matrices have no admissible paths at all
    let (paths, e, mu) = match h_series_of_a(a, order) {
        Ok(h) => (h, Some(e_of_a(a)?), Some(mu_of_a(a)?)),
        Err(Error::NoAdmissiblePairings) => (vec![0.into(); order + 1], None, None),
        Err(e) => return Err(e.into()),
    };
    let mut terms = Vec::new();
    let mut all_agree = true;
    for (d, h) in paths.iter().enumerate() {
        let coeff = series.coeff((k + d) as i64).expect("within truncation");
        let agrees = coeff == BigRational::from_integer(h.clone());
        all_agree &= agrees;
        terms.push(json!({
            "d": d,
            "order": -((k + d) as i64),
            "coeff": rational_to_json(&coeff),
            "h_d": h.to_string(),
            "agrees": agrees,
        }));
    }
    let v = json!({
        "k": k,
        "e": e,
        "mu": mu.as_ref().map(ToString::to_string),
        "series": laurent_to_json(&series),
        "terms": terms,
        "all_agree": all_agree,
    });
    Ok(emit(pretty, &v, || {
        let mut out = format!("I(a) = {series}\n");
        for t in &terms {
            let _ = writeln!(
                out,
                "n^{:<4} coeff {:>10}  H_{} = {:>8}  {}",
                t["order"],
                t["coeff"].as_str().unwrap_or(""),
                t["d"],
                t["h_d"].as_str().unwrap_or(""),
                if t["agrees"] == true {
                    "ok"
                } else {
                    "MISMATCH"
                }
            );
        }
        out.trim_end().to_string()
    }))
}

fn wg(k: usize, n: Option<u64>, pretty: bool) -> Outcome {
    if k == 0 || k > DENSE_K_LIMIT {
        return Err(Failure::Usage(format!(
            "--k must be between 1 and {DENSE_K_LIMIT}"
        )));
    }
    let limits = Limits::from_env();
    let labels = pairing_labels(k)?;
    let names: Vec<String> = labels.iter().map(ToString::to_string).collect();
    match n {
        None => {
            let m = weingarten_symbolic(k, &limits)?.to_matrix()?;
            let v =
                json!({"k": k, "pairings": names, "matrix": matrix_to_json(&m, ratfunc_to_json)});
            Ok(emit(pretty, &v, || table(&labels, &m, ToString::to_string)))
        }
        Some(n0) => {
            let w = weingarten_numeric(k, n0, &limits)?;
            let m = w.to_matrix()?;
            let v = json!({
                "k": k,
                "n": n0,
                "pseudo_inverse": w.is_pseudo_inverse(),
                "pairings": names,
                "matrix": matrix_to_json(&m, rational_to_json),
            });
            Ok(emit(pretty, &v, || table(&labels, &m, ToString::to_string)))
        }
    }
}

fn mobius(k: usize, pretty: bool) -> Outcome {
    if k == 0 || k > DENSE_K_LIMIT {
        return Err(Failure::Usage(format!(
            "--k must be between 1 and {DENSE_K_LIMIT}"
        )));
    }
    let labels = pairing_labels(k)?;
    let (dist, mu) = mobius_matrix(k)?;
    let v = json!({
        "k": k,
        "pairings": labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "distance": dist,
        "mobius": mu.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(emit(pretty, &v, || {
        let mut out = String::new();
        for (i, label) in labels.iter().enumerate() {
            let cells: Vec<String> = (0..labels.len())
                .map(|j| format!("{}:{:>3}", dist[i][j], mu[i][j]))
                .collect();
            let _ = writeln!(out, "{label:>12}  {}", cells.join(" "));
        }
        out.trim_end().to_string()
    }))
}

fn zonal(k: usize, pretty: bool) -> Outcome {
    let engine = ZonalEngine::cached(k)?;
    let labels = pairing_labels(k)?;
    let base = &labels[0];
    // one representative column per loop type
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut types = Vec::new();
    let mut text = String::new();
    for sigma in labels.iter() {
        let loop_type = weingarten::pairings::loop_type(base, sigma)?;
        if seen.contains(&loop_type) {
            continue;
        }
        seen.push(loop_type.clone());
        let terms = engine.contributions(base, sigma)?;
        let value = engine.entry(base, sigma)?;
        let _ = writeln!(
            text,
            "W({base}, {sigma}) = {value}   loop type {loop_type:?}"
        );
        let audit: Vec<Value> = terms
            .iter()
            .map(|t| {
                let _ = writeln!(
                    text,
                    "    lambda {:<10} f = {:<4} w = {:<8} term {}",
                    t.lambda.to_string(),
                    t.dimension,
                    t.spherical,
                    t.term
                );
                json!({
                    "lambda": t.lambda.parts(),
                    "dimension": t.dimension.to_string(),
                    "spherical": rational_to_json(&t.spherical),
                    "denominator": t.denominator.to_string(),
                    "term": ratfunc_to_json(&t.term),
                })
            })
            .collect();
        types.push(json!({
            "loop_type": loop_type,
            "pi": base.to_string(),
            "sigma": sigma.to_string(),
            "value": ratfunc_to_json(&value),
            "terms": audit,
        }));
    }
    let mut v = json!({
        "k": k,
        "pole_candidates": pole_candidates(k).iter().map(i64::to_string).collect::<Vec<_>>(),
        "types": types,
    });
    if k <= 3 {
        let m = engine.matrix()?;
        v["pairings"] = json!(labels.iter().map(ToString::to_string).collect::<Vec<_>>());
        v["matrix"] = matrix_to_json(&m, ratfunc_to_json);
    }
    Ok(emit(pretty, &v, || text.trim_end().to_string()))
}

fn mc(
    a: &ExponentMatrix,
    n: usize,
    samples: u64,
    seed: u64,
    workers: usize,
    pretty: bool,
) -> Outcome {
    let cfg = HaarSampleConfig {
        n,
        samples,
        seed,
        workers,
    };
    let estimate = mc_integral(a, &cfg)?;
    let mut v = json!({
        "n": n,
        "seed": seed,
        "workers": workers,
        "estimate": mc_estimate_to_json(&estimate),
    });
    // the exact value is skipped when it is out of reach
    if let Ok(result) = integral(a, Mode::Numeric(n as u64)) {
        let exact = result.value.numeric().expect("numeric mode").clone();
        let approx = exact.to_f64().unwrap_or(f64::NAN);
        let deviation = estimate.deviation(approx);
        v["exact"] = rational_to_json(&exact);
        v["exact_approx"] = json!(approx);
        v["deviation_sigma"] = json!(deviation);
        v["within_5_sigma"] = json!(deviation <= 5.0);
    }
    Ok(emit(pretty, &v, || {
        let mut out = format!(
            "mean {:.6} +- {:.6} over {} samples",
            estimate.mean, estimate.std_error, estimate.samples
        );
        if let Some(exact) = v.get("exact") {
            let _ = write!(
                out,
                "\nexact {} ({:.6}), {:.2} sigma",
                exact.as_str().unwrap_or(""),
                v["exact_approx"].as_f64().unwrap_or(f64::NAN),
                v["deviation_sigma"].as_f64().unwrap_or(f64::NAN)
            );
        }
        out
    }))
}

fn selftest(level: LevelArg, pretty: bool) -> Outcome {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let reports = run_all(&SelftestConfig::new(level));
    let passed = reports.iter().all(|r| r.passed);
    let v = json!({
        "level": match level { Level::Quick => "quick", Level::Full => "full" },
        "passed": passed,
        "criteria": reports.iter().map(|r| json!({
            "id": r.id,
            "title": r.title,
            "passed": r.passed,
            "detail": r.detail,
            "seconds": r.seconds,
        })).collect::<Vec<_>>(),
    });
    let out = emit(pretty, &v, || {
        reports
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n")
    });
    if passed {
        Ok(out)
    } else {
        Err(Failure::Checks(out))
    }
}
