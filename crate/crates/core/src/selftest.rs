//! Cross-oracle checks of the exact back-ends, shared by the `selftest`
//! command and the acceptance tests.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, laurent_at_infinity, BigRational, RatFunc};
use crate::brauer::{e_of_a, h_series_of_a, k_g, mobius_matrix, mu_of_a};
use crate::error::Result;
use crate::montecarlo::{mc_integral, HaarSampleConfig};
use crate::pairings::{enumerate_pairings, is_admissible, ExponentMatrix};
use crate::weingarten::{
    check_diagonal_bound, closed_form_n2, closed_form_row, double_factorial, integral,
    integral_with, weingarten_dense_symbolic, weingarten_symbolic, IntegralOptions, Limits, Mode,
};
use crate::zonal::{calibrate, pole_candidates, pole_check, ZonalEngine, FROZEN_CONVENTION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn parse(s: &str) -> Option<Level> {
        match s {
            "quick" => Some(Level::Quick),
            "full" => Some(Level::Full),
            _ => None,
        }
    }
}

/// Settings that differ between the tiers.
#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub level: Level,
    pub mc_samples: u64,
    pub workers: usize,
}

impl SelftestConfig {
    pub fn new(level: Level) -> Self {
        SelftestConfig {
            level,
            mc_samples: match level {
                Level::Quick => 50_000,
                Level::Full => 1_000_000,
            },
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {}: {} ({:.2}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds
        )
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "single-row closed form"),
    (2, "n = 2 closed form"),
    (3, "vanishing for non-admissible a"),
    (4, "asymptotic diagonality bound"),
    (5, "leading term"),
    (6, "geodesic expansion"),
    (7, "Moebius estimates"),
    (8, "zonal formula"),
    (9, "pole containment"),
    (10, "Monte Carlo consistency"),
    (11, "symmetries and sum rule"),
];

type Outcome = Result<(bool, String)>;

pub fn run_criterion(id: u8, cfg: &SelftestConfig) -> CriterionReport {
    let start = Instant::now();
    let outcome = match id {
        1 => row_closed_form(),
        2 => n2_closed_form(),
        3 => vanishing(),
        4 => diagonality(),
        5 => leading_terms(),
        6 => geodesic_expansion(),
        7 => mobius_estimates(),
        8 => zonal_formula(cfg.level),
        9 => pole_containment(),
        10 => monte_carlo(cfg),
        11 => symmetries(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id,
        title: CRITERIA
            .iter()
            .find(|(i, _)| *i == id)
            .map_or("unknown", |(_, t)| t),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(cfg: &SelftestConfig) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, cfg))
        .collect()
}

fn symbolic(a: &ExponentMatrix) -> Result<RatFunc> {
    Ok(integral(a, Mode::Symbolic)?
        .value
        .symbolic()
        .expect("symbolic mode")
        .clone())
}

fn numeric(a: &ExponentMatrix, n0: u64) -> Result<BigRational> {
    Ok(integral(a, Mode::Numeric(n0))?
        .value
        .numeric()
        .expect("numeric mode")
        .clone())
}

fn verdict(failures: &[String], checked: usize, what: &str) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("all {checked} {what} match"))
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        (
            false,
            format!(
                "{} of {checked} {what} fail: {}",
                failures.len(),
                shown.join("; ")
            ),
        )
    }
}

/// All matrices of the given shape with entries in `0..=max` accepted by
/// `keep`.
fn all_matrices(
    p: usize,
    q: usize,
    max: u64,
    keep: impl Fn(&ExponentMatrix) -> bool,
) -> Vec<ExponentMatrix> {
    let cells = p * q;
    let mut out = Vec::new();
    let mut digits = vec![0u64; cells];
    loop {
        let a = ExponentMatrix::from_fn(p, q, |i, j| digits[i * q + j]);
        if keep(&a) {
            out.push(a);
        }
        let mut pos = 0;
        while pos < cells && digits[pos] == max {
            digits[pos] = 0;
            pos += 1;
        }
        if pos == cells {
            return out;
        }
        digits[pos] += 1;
    }
}

/// A random admissible matrix of total degree `2k`, built from moves that
/// keep every row and column sum even.
pub fn random_admissible<R: Rng>(rng: &mut R, k: usize, p: usize, q: usize) -> ExponentMatrix {
    let mut cells = vec![0u64; p * q];
    let mut remaining = 2 * k;
    while remaining > 0 {
        if remaining >= 4 && p > 1 && q > 1 && rng.gen_bool(0.5) {
            let rows = rand::seq::index::sample(rng, p, 2);
            let cols = rand::seq::index::sample(rng, q, 2);
            for i in [rows.index(0), rows.index(1)] {
                for j in [cols.index(0), cols.index(1)] {
                    cells[i * q + j] += 1;
                }
            }
            remaining -= 4;
        } else {
            cells[rng.gen_range(0..p * q)] += 2;
            remaining -= 2;
        }
    }
    ExponentMatrix::from_fn(p, q, |i, j| cells[i * q + j])
}

fn random_shape_admissible<R: Rng>(rng: &mut R, max_k: usize, max_dim: usize) -> ExponentMatrix {
    let k = rng.gen_range(1..=max_k);
    let p = rng.gen_range(1..=max_dim);
    let q = rng.gen_range(1..=max_dim);
    random_admissible(rng, k, p, q)
}

fn row_closed_form() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for q in 1..=4 {
        for a in all_matrices(1, q, 8, |a| a.total() <= 8) {
            checked += 1;
            let expected = closed_form_row(&a)?.value;
            let got = symbolic(&a)?;
            if expected.symbolic() != Some(&got) {
                failures.push(format!(
                    "{a}: {got} vs {}",
                    expected.symbolic().expect("symbolic")
                ));
            }
        }
    }
    Ok(verdict(&failures, checked, "single-row matrices"))
}

fn n2_closed_form() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut beyond = 0;
    for a in all_matrices(2, 2, 3, |a| a.total() % 2 == 0) {
        checked += 1;
        if a.total() > 4 {
            beyond += 1;
        }
        let expected = closed_form_n2(&a)?;
        let got = numeric(&a, 2)?;
        if got != expected {
            failures.push(format!("{a}: {got} vs {expected}"));
        }
    }
    let (ok, detail) = verdict(&failures, checked, "2x2 matrices");
    Ok((ok, format!("{detail} ({beyond} with k > 2)")))
}

fn vanishing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = IntegralOptions {
        short_circuit: false,
        ..IntegralOptions::default()
    };
    let mut failures = Vec::new();
    let mut checked = 0;
    while checked < 200 {
        let k = rng.gen_range(1..=4);
        let (p, q) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let mut cells = vec![0u64; p * q];
        for _ in 0..2 * k {
            cells[rng.gen_range(0..p * q)] += 1;
        }
        let a = ExponentMatrix::from_fn(p, q, |i, j| cells[i * q + j]);
        if is_admissible(&a) {
            continue;
        }
        checked += 1;
        let got = integral_with(&a, Mode::Symbolic, &opts)?.value;
        if !got.is_zero() {
            failures.push(format!("{a}"));
        }
    }
    Ok(verdict(&failures, checked, "non-admissible matrices"))
}

fn diagonality() -> Outcome {
    let limits = Limits::from_env();
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 2..=3usize {
        let count = double_factorial(2 * k as u64).to_u64().expect("small");
        for n0 in count + 1..=4 * count {
            checked += 1;
            let b = check_diagonal_bound(k, n0, &limits)?;
            if !b.holds {
                failures.push(format!("k={k}, n={n0}: {} > {}", b.lhs, b.rhs));
            }
        }
    }
    Ok(verdict(&failures, checked, "(k, n) pairs"))
}

fn leading_terms() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in 1..=3 {
        for q in 1..=3 {
            let even = all_matrices(p, q, 6, |a| a.all_even() && (2..=6).contains(&a.total()));
            let odd = all_matrices(p, q, 6, |a| {
                !a.all_even() && is_admissible(a) && (2..=6).contains(&a.total())
            });
            for a in even.iter().chain(&odd) {
                checked += 1;
                let k = (a.total() / 2) as i64;
                let f = symbolic(a)?;
                // the expansion starts at n^-(deg den - deg num)
                let start = f.degree().map_or(i64::MAX, |d| -d);
                if a.all_even() {
                    let product: BigInt = a
                        .rows()
                        .iter()
                        .flatten()
                        .map(|&x| double_factorial(x))
                        .product();
                    let expected = BigRational::from_integer(product);
                    let series = laurent_at_infinity(&f, k)?;
                    if start != k || series.leading_coeff() != Some(&expected) {
                        failures.push(format!("{a}: expected {expected} n^-{k}, got {series}"));
                    }
                } else if start <= k {
                    failures.push(format!("{a}: expansion starts at n^-{start}"));
                }
            }
        }
    }
    Ok(verdict(&failures, checked, "leading terms"))
}

fn geodesic_expansion() -> Outcome {
    let limits = Limits::from_env();
    let mut failures = Vec::new();
    let mut entries = 0;
    for k in 1..=3usize {
        let w = weingarten_symbolic(k, &limits)?;
        let pairings = enumerate_pairings(k)?;
        for pi in &pairings {
            for sigma in &pairings {
                entries += 1;
                let d = crate::brauer::distance(pi, sigma)?;
                let top = (k + d + 4) as i64;
                let series = laurent_at_infinity(w.entry(pi, sigma)?, top)?;
                for g in 0..=4 {
                    let got = series.coeff((k + d + g) as i64).expect("within truncation");
                    let expected = BigRational::from_integer(k_g(pi, sigma, g)?);
                    if got != expected {
                        failures.push(format!(
                            "K_{g}({pi}, {sigma}) = {expected}, coefficient {got}"
                        ));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let a = random_shape_admissible(&mut rng, 3, 3);
        let k = (a.total() / 2) as usize;
        let series = laurent_at_infinity(&symbolic(&a)?, (k + 4) as i64)?;
        let h = h_series_of_a(&a, 4)?;
        for (d, hd) in h.iter().enumerate() {
            let got = series.coeff((k + d) as i64).expect("within truncation");
            if got != BigRational::from_integer(hd.clone()) {
                failures.push(format!("H_{d}({a}) = {hd}, coefficient {got}"));
            }
        }
    }
    Ok(verdict(
        &failures,
        entries * 5 + 50 * 5,
        "path counts (W entries with g <= 4, and H_d for 50 matrices)",
    ))
}

fn mobius_estimates() -> Outcome {
    let limits = Limits::from_env();
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 1..=3usize {
        let w = weingarten_symbolic(k, &limits)?;
        let pairings = enumerate_pairings(k)?;
        let (dist, mu) = mobius_matrix(k)?;
        for (i, pi) in pairings.iter().enumerate() {
            for (j, sigma) in pairings.iter().enumerate() {
                checked += 1;
                let order = (k + dist[i][j]) as i64;
                let series = laurent_at_infinity(w.entry(pi, sigma)?, order)?;
                let expected = BigRational::from_integer(mu[i][j].clone());
                if series.leading_order != order || series.leading_coeff() != Some(&expected) {
                    failures.push(format!("mu({pi}, {sigma}) = {expected}, series {series}"));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        checked += 1;
        let a = random_shape_admissible(&mut rng, 3, 3);
        let order = (a.total() / 2) as i64 + e_of_a(&a)? as i64;
        let series = laurent_at_infinity(&symbolic(&a)?, order)?;
        let expected = BigRational::from_integer(mu_of_a(&a)?);
        let below_zero = (0..order).all(|j| series.coeff(j).is_some_and(|c| c.is_zero()));
        if series.coeff(order) != Some(expected.clone()) || !below_zero {
            failures.push(format!("mu({a}) = {expected}, series {series}"));
        }
    }
    Ok(verdict(&failures, checked, "leading coefficients"))
}

fn zonal_formula(level: Level) -> Outcome {
    let calibration = calibrate(&weingarten_dense_symbolic(2)?)?;
    let passing: Vec<_> = calibration
        .iter()
        .filter(|(_, ok)| *ok)
        .map(|(c, _)| *c)
        .collect();
    if passing != [FROZEN_CONVENTION] {
        return Ok((false, format!("calibration at k = 2 accepted {passing:?}")));
    }
    let max_k = match level {
        Level::Quick => 3,
        Level::Full => 4,
    };
    let limits = Limits::from_env();
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 1..=max_k {
        let zonal = ZonalEngine::cached(k)?.matrix()?;
        let gram = weingarten_symbolic(k, &limits)?.to_matrix()?;
        for i in 0..zonal.rows() {
            for j in 0..zonal.cols() {
                checked += 1;
                if zonal.get(i, j) != gram.get(i, j) {
                    failures.push(format!(
                        "k={k} ({i},{j}): {} vs {}",
                        zonal.get(i, j),
                        gram.get(i, j)
                    ));
                }
            }
        }
    }
    let (ok, detail) = verdict(&failures, checked, "entries");
    Ok((ok, format!("{detail} for k <= {max_k}")))
}

fn pole_containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let a = random_shape_admissible(&mut rng, 3, 3);
        let report = pole_check(&a)?;
        if !report.contained {
            failures.push(format!("{a}: poles {:?}", report.actual));
        }
    }
    let witness = ExponentMatrix::new(vec![vec![2, 0], vec![0, 2]])?;
    let report = pole_check(&witness)?;
    let expected = vec![int(-2), int(0), int(1)];
    if report.actual != expected || !report.contained {
        failures.push(format!("witness poles {:?}", report.actual));
    }
    debug_assert_eq!(pole_candidates(2).len(), 3);
    Ok(verdict(&failures, 101, "pole sets"))
}

fn monte_carlo(cfg: &SelftestConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut outliers = Vec::new();
    let mut worst: f64 = 0.0;
    for case in 0..20u64 {
        let a = random_shape_admissible(&mut rng, 3, 3);
        let n = rng.gen_range(a.p().max(a.q()).max(2)..=8);
        let exact = numeric(&a, n as u64)?.to_f64().expect("finite");
        let sample_cfg =
            HaarSampleConfig::new(n, cfg.mc_samples, 1000 + case).with_workers(cfg.workers);
        let estimate = mc_integral(&a, &sample_cfg)?;
        let dev = estimate.deviation(exact);
        worst = worst.max(dev);
        if dev > 5.0 {
            outliers.push(format!(
                "{a} at n={n}: {:.6} vs {exact:.6} ({dev:.1} sigma)",
                estimate.mean
            ));
        }
    }
    let detail = format!(
        "{} of 20 outside 5 sigma at {} samples, worst {worst:.2} sigma{}",
        outliers.len(),
        cfg.mc_samples,
        if outliers.is_empty() {
            String::new()
        } else {
            format!(": {}", outliers.join("; "))
        }
    );
    Ok((outliers.len() <= 1, detail))
}

fn symmetries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let a = random_shape_admissible(&mut rng, 3, 3);
        let base = symbolic(&a)?;
        let mut rows: Vec<usize> = (0..a.p()).collect();
        rows.shuffle(&mut rng);
        let mut cols: Vec<usize> = (0..a.q()).collect();
        cols.shuffle(&mut rng);
        for (name, b) in [
            ("rows", a.permute_rows(&rows)),
            ("columns", a.permute_cols(&cols)),
            ("transpose", a.transpose()),
        ] {
            if symbolic(&b)? != base {
                failures.push(format!("{a} under {name}"));
            }
        }
    }
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let (p, q) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let n0 = rng.gen_range(p.max(q)..=5);
        let small = random_admissible(&mut rng, k, p, q);
        let a = ExponentMatrix::from_fn(p, n0, |i, j| if j < q { small.get(i, j) } else { 0 });
        let total = (0..n0).try_fold(BigRational::zero(), |acc, j| {
            numeric(&a.with_added(0, j, 2), n0 as u64).map(|v| acc + v)
        })?;
        let expected = numeric(&a, n0 as u64)?;
        if total != expected {
            failures.push(format!("sum rule for {a} at n={n0}: {total} vs {expected}"));
        }
    }
    Ok(verdict(&failures, 120, "cases"))
}
