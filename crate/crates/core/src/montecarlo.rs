//! Monte Carlo estimates of `I(a)` from Haar-random orthogonal matrices.
//!
//! Samples are drawn as `Q` from the QR factorization of a matrix of
//! independent standard Gaussians, with column `i` of `Q` multiplied by the
//! sign of `R_ii`. Without that correction the factorization's own sign
//! convention skews the law and `Q` is not Haar distributed.
//!
//! Each worker owns a ChaCha8 stream: the generator is seeded from `seed`
//! and the stream number is the worker index. Gaussians come from the
//! ziggurat sampler of `rand_distr`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pairings::ExponentMatrix;

/// Tolerance on `max |Q^T Q - I|`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HaarSampleConfig {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl HaarSampleConfig {
    pub fn new(n: usize, samples: u64, seed: u64) -> Self {
        HaarSampleConfig {
            n,
            samples,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl MCEstimate {
    /// `|mean - exact| / std_error`; infinite when the error is zero and the
    /// means differ.
    pub fn deviation(&self, exact: f64) -> f64 {
        let diff = (self.mean - exact).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    pub fn within(&self, exact: f64, sigmas: f64) -> bool {
        self.deviation(exact) <= sigmas
    }
}

/// The generator used by worker `worker` for a given seed.
pub fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

pub fn orthogonality_residual(q: &DMatrix<f64>) -> f64 {
    let gram = q.transpose() * q;
    let n = q.ncols();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

/// A Haar-distributed element of `O_n`.
pub fn haar_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    loop {
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let qr = g.qr();
        let r = qr.r();
        if (0..n).any(|i| r[(i, i)].abs() < f64::MIN_POSITIVE) {
            continue;
        }
        let mut q = qr.q();
        for i in 0..n {
            if r[(i, i)] < 0.0 {
                q.column_mut(i).neg_mut();
            }
        }
        return q;
    }
}

#[derive(Clone, Copy, Default)]
struct Accumulator {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

fn run_worker(a: &ExponentMatrix, n: usize, samples: u64, seed: u64, worker: usize) -> Accumulator {
    let mut rng = worker_rng(seed, worker);
    let mut acc = Accumulator::default();
    let check_every = if cfg!(debug_assertions) { 1 } else { 1000 };
    let terms: Vec<(usize, usize, i32)> = (0..a.p())
        .flat_map(|i| (0..a.q()).map(move |j| (i, j)))
        .filter(|&(i, j)| a.get(i, j) > 0)
        .map(|(i, j)| (i, j, a.get(i, j) as i32))
        .collect();
    for s in 0..samples {
        let q = haar_sample(n, &mut rng);
        if s % check_every == 0 {
            let residual = orthogonality_residual(&q);
            assert!(
                residual <= ORTHOGONALITY_TOLERANCE,
                "orthogonality residual {residual:e} exceeds tolerance"
            );
        }
        let value: f64 = terms.iter().map(|&(i, j, e)| q[(i, j)].powi(e)).product();
        acc.count += 1;
        acc.sum += value;
        acc.sum_sq += value * value;
    }
    acc
}

/// Sample mean and standard error of `prod u_ij^{a_ij}`.
pub fn mc_integral(a: &ExponentMatrix, cfg: &HaarSampleConfig) -> Result<MCEstimate> {
    cfg.validate()?;
    let need = a.p().max(a.q());
    if cfg.n < need {
        return Err(Error::InvalidArgument(format!(
            "n = {} is smaller than the matrix dimensions (needs n >= {need})",
            cfg.n
        )));
    }
    let workers = cfg.workers as u64;
    let share = |w: u64| cfg.samples / workers + u64::from(w < cfg.samples % workers);
    let parts: Vec<Accumulator> = if cfg.workers == 1 {
        vec![run_worker(a, cfg.n, cfg.samples, cfg.seed, 0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| s.spawn(move || run_worker(a, cfg.n, share(w), cfg.seed, w as usize)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampling worker panicked"))
                .collect()
        })
    };
    // fixed worker order keeps the floating-point sum reproducible
    let total = parts
        .iter()
        .fold(Accumulator::default(), |acc, p| Accumulator {
            count: acc.count + p.count,
            sum: acc.sum + p.sum,
            sum_sq: acc.sum_sq + p.sum_sq,
        });
    let count = total.count as f64;
    let mean = total.sum / count;
    let std_error = if total.count > 1 {
        let variance = ((total.sum_sq - count * mean * mean) / (count - 1.0)).max(0.0);
        (variance / count).sqrt()
    } else {
        0.0
    };
    Ok(MCEstimate {
        mean,
        std_error,
        samples: total.count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> ExponentMatrix {
        ExponentMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn samples_are_orthogonal() {
        let mut rng = worker_rng(1, 0);
        for n in 1..=8 {
            for _ in 0..50 {
                assert!(
                    orthogonality_residual(&haar_sample(n, &mut rng)) <= ORTHOGONALITY_TOLERANCE
                );
            }
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = m(&[&[2, 0], &[0, 2]]);
        let cfg = HaarSampleConfig::new(3, 2000, 99);
        assert_eq!(
            mc_integral(&a, &cfg).unwrap(),
            mc_integral(&a, &cfg).unwrap()
        );
        let par = cfg.with_workers(3);
        assert_eq!(
            mc_integral(&a, &par).unwrap(),
            mc_integral(&a, &par).unwrap()
        );
        let mut r1 = worker_rng(5, 0);
        let mut r2 = worker_rng(5, 0);
        assert_eq!(haar_sample(4, &mut r1), haar_sample(4, &mut r2));
    }

    #[test]
    fn small_moments() {
        let cfg = HaarSampleConfig::new(4, 40_000, 7).with_workers(2);
        assert!(mc_integral(&m(&[&[2]]), &cfg).unwrap().within(0.25, 5.0));
        let cfg = HaarSampleConfig::new(2, 40_000, 8).with_workers(2);
        assert!(mc_integral(&m(&[&[1, 1], &[1, 1]]), &cfg)
            .unwrap()
            .within(-0.125, 5.0));
        let cfg = HaarSampleConfig::new(3, 40_000, 9);
        assert!(mc_integral(&m(&[&[1, 0], &[0, 0]]), &cfg)
            .unwrap()
            .within(0.0, 5.0));
    }

    #[test]
    fn rejects_bad_configs() {
        let a = m(&[&[2, 0, 0]]);
        assert!(mc_integral(&a, &HaarSampleConfig::new(2, 10, 0)).is_err());
        assert!(mc_integral(&a, &HaarSampleConfig::new(3, 0, 0)).is_err());
        assert!(mc_integral(&a, &HaarSampleConfig::new(3, 10, 0).with_workers(0)).is_err());
    }
}
