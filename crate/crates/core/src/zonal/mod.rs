//! The zonal-function expression for the Weingarten matrix and the pole
//! analysis it implies.
//!
//! `W(pi, sigma) = sum_lambda f^{2 lambda} w^lambda(g) /
//! ((2k-1)!! prod_{(i,j) in lambda} (n + 2j - i - 1))`, summed over the
//! partitions `lambda` of `k`, where `w^lambda` is the zonal spherical
//! function of the Gelfand pair `(S_2k, H_k)` and `g` is the permutation
//! relating the two pairings.

pub mod character;
pub mod partition;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use character::{mn_character, CharacterCache, Permutation};
pub use partition::{hook_dimension, partitions_of, IntegerPartition};

use crate::arith::{BigRational, Matrix, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::pairings::{enumerate_pairings_with_limit, loop_type_raw, ExponentMatrix, Pairing};
use crate::weingarten::{double_factorial, integral, Mode, DENSE_K_LIMIT};

/// Largest `k` for which `H_k` is enumerated (`|H_5| = 3840`).
pub const ZONAL_K_LIMIT: usize = 5;

pub fn double_partition(lambda: &IntegerPartition) -> IntegerPartition {
    lambda.doubled()
}

fn check_guard(k: usize) -> Result<()> {
    if k == 0 || k > ZONAL_K_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "zonal formula supports 1 <= k <= {ZONAL_K_LIMIT}, got k = {k}"
        )));
    }
    Ok(())
}

fn block_permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for shorter in block_permutations(k - 1) {
        for slot in 0..k {
            let mut p = shorter.clone();
            p.insert(slot, k - 1);
            out.push(p);
        }
    }
    out
}

/// The stabilizer of the pairing `{1,2},{3,4},...,{2k-1,2k}` in `S_2k`.
pub fn hyperoctahedral_group(k: usize) -> Result<Vec<Permutation>> {
    check_guard(k)?;
    let mut out = Vec::with_capacity((1 << k) * block_permutations(k).len());
    for blocks in block_permutations(k) {
        for flips in 0u32..(1 << k) {
            let images = (0..2 * k)
                .map(|x| {
                    let (block, side) = (x / 2, x % 2);
                    let flip = ((flips >> block) & 1) as usize;
                    2 * blocks[block] + (side ^ flip)
                })
                .collect();
            out.push(Permutation::new(images)?);
        }
    }
    Ok(out)
}

/// The permutation sending `2i-1 -> a_i`, `2i -> b_i` for the sorted pairs
/// `{a_i < b_i}` of `pi`; it carries the base pairing to `pi`.
pub fn coset_representative(pi: &Pairing) -> Permutation {
    let mut images = Vec::with_capacity(2 * pi.k());
    for (a, b) in pi.pairs() {
        images.push(a - 1);
        images.push(b - 1);
    }
    Permutation::new(images).expect("pairs cover every point once")
}

/// A pairing as a fixed-point-free involution.
pub fn involution(pi: &Pairing) -> Permutation {
    Permutation::new(pi.partner().iter().map(|&x| x as usize).collect())
        .expect("partner map is an involution")
}

/// Which permutation of `S_2k` is fed to the spherical function.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PermutationReading {
    /// `g_pi^{-1} g_sigma` with `g_pi` the coset representative of `pi`.
    CosetRepresentative,
    /// The product `pi sigma` of the two pairings as involutions.
    InvolutionProduct,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Normalization {
    /// `(1/|H_k|) sum_zeta chi^{2 lambda}(g zeta)`.
    Averaged,
    /// The average further divided by `f^{2 lambda}`.
    DividedByDimension,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ZonalConvention {
    pub reading: PermutationReading,
    pub normalization: Normalization,
}

impl ZonalConvention {
    pub const ALL: [ZonalConvention; 4] = [
        ZonalConvention {
            reading: PermutationReading::CosetRepresentative,
            normalization: Normalization::Averaged,
        },
        ZonalConvention {
            reading: PermutationReading::CosetRepresentative,
            normalization: Normalization::DividedByDimension,
        },
        ZonalConvention {
            reading: PermutationReading::InvolutionProduct,
            normalization: Normalization::Averaged,
        },
        ZonalConvention {
            reading: PermutationReading::InvolutionProduct,
            normalization: Normalization::DividedByDimension,
        },
    ];
}

/// The convention selected by [`calibrate`] against the Gram inverse at
/// `k = 2`.
pub const FROZEN_CONVENTION: ZonalConvention = ZonalConvention {
    reading: PermutationReading::CosetRepresentative,
    normalization: Normalization::Averaged,
};

/// One summand of the zonal expression.
#[derive(Clone, Debug)]
pub struct ZonalTerm {
    pub lambda: IntegerPartition,
    /// `f^{2 lambda}`.
    pub dimension: BigInt,
    /// `w^lambda(g)`.
    pub spherical: BigRational,
    /// `(2k-1)!! prod (n + 2j - i - 1)`.
    pub denominator: Poly,
    pub term: RatFunc,
}

/// Precomputed data for one `k`: `H_k`, the partitions of `k`, and the
/// characters `chi^{2 lambda}` on every class of `S_2k`.
#[derive(Debug)]
pub struct ZonalEngine {
    k: usize,
    convention: ZonalConvention,
    group: Vec<Permutation>,
    lambdas: Vec<IntegerPartition>,
    dimensions: Vec<BigInt>,
    denominators: Vec<Poly>,
    characters: HashMap<Vec<usize>, Vec<i64>>,
}

impl ZonalEngine {
    pub fn new(k: usize) -> Result<Self> {
        Self::with_convention(k, FROZEN_CONVENTION)
    }

    /// Shared engine with the frozen convention.
    pub fn cached(k: usize) -> Result<Arc<ZonalEngine>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ZonalEngine>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(e) = cache.lock().expect("zonal cache poisoned").get(&k) {
            return Ok(Arc::clone(e));
        }
        let engine = Arc::new(Self::new(k)?);
        cache
            .lock()
            .expect("zonal cache poisoned")
            .insert(k, Arc::clone(&engine));
        Ok(engine)
    }

    pub fn with_convention(k: usize, convention: ZonalConvention) -> Result<Self> {
        check_guard(k)?;
        let group = hyperoctahedral_group(k)?;
        let lambdas = partitions_of(k);
        let dimensions = lambdas
            .iter()
            .map(|l| BigInt::from(hook_dimension(&l.doubled())))
            .collect();
        let prefactor = BigRational::from_integer(double_factorial(2 * k as u64));
        let denominators = lambdas
            .iter()
            .map(|l| {
                l.cells()
                    .fold(Poly::constant(prefactor.clone()), |acc, (i, j)| {
                        &acc * &Poly::linear_root(i as i64 + 1 - 2 * j as i64)
                    })
            })
            .collect();
        let mut cache = CharacterCache::default();
        let characters = partitions_of(2 * k)
            .into_iter()
            .map(|rho| {
                let values = lambdas
                    .iter()
                    .map(|l| cache.value(&l.doubled(), rho.parts()))
                    .collect();
                (rho.parts().to_vec(), values)
            })
            .collect();
        Ok(ZonalEngine {
            k,
            convention,
            group,
            lambdas,
            dimensions,
            denominators,
            characters,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn convention(&self) -> ZonalConvention {
        self.convention
    }

    pub fn partitions(&self) -> &[IntegerPartition] {
        &self.lambdas
    }

    pub fn group(&self) -> &[Permutation] {
        &self.group
    }

    /// `w^lambda(g)` for every `lambda`, in [`partitions_of`] order.
    pub fn spherical_all(&self, g: &Permutation) -> Result<Vec<BigRational>> {
        if g.degree() != 2 * self.k {
            return Err(Error::Dimension(format!(
                "permutation of degree {} for k = {}",
                g.degree(),
                self.k
            )));
        }
        let mut sums = vec![0i64; self.lambdas.len()];
        for zeta in &self.group {
            let values = &self.characters[&g.compose(zeta).cycle_type()];
            for (s, v) in sums.iter_mut().zip(values) {
                *s += v;
            }
        }
        let order = BigInt::from(self.group.len());
        Ok(sums
            .into_iter()
            .zip(&self.dimensions)
            .map(|(s, f)| {
                let avg = BigRational::new(BigInt::from(s), order.clone());
                match self.convention.normalization {
                    Normalization::Averaged => avg,
                    Normalization::DividedByDimension => avg / BigRational::from_integer(f.clone()),
                }
            })
            .collect())
    }

    pub fn relating_permutation(&self, pi: &Pairing, sigma: &Pairing) -> Result<Permutation> {
        for p in [pi, sigma] {
            if p.k() != self.k {
                return Err(Error::PairingSizeMismatch {
                    left: 2 * self.k,
                    right: 2 * p.k(),
                });
            }
        }
        Ok(match self.convention.reading {
            PermutationReading::CosetRepresentative => coset_representative(pi)
                .inverse()
                .compose(&coset_representative(sigma)),
            PermutationReading::InvolutionProduct => involution(pi).compose(&involution(sigma)),
        })
    }

    /// The per-`lambda` summands of `W(pi, sigma)`.
    pub fn contributions(&self, pi: &Pairing, sigma: &Pairing) -> Result<Vec<ZonalTerm>> {
        let g = self.relating_permutation(pi, sigma)?;
        let omegas = self.spherical_all(&g)?;
        let mut out = Vec::with_capacity(self.lambdas.len());
        for (idx, omega) in omegas.into_iter().enumerate() {
            let numerator = BigRational::from_integer(self.dimensions[idx].clone()) * &omega;
            let term = RatFunc::new(Poly::constant(numerator), self.denominators[idx].clone())?;
            out.push(ZonalTerm {
                lambda: self.lambdas[idx].clone(),
                dimension: self.dimensions[idx].clone(),
                spherical: omega,
                denominator: self.denominators[idx].clone(),
                term,
            });
        }
        Ok(out)
    }

    pub fn entry(&self, pi: &Pairing, sigma: &Pairing) -> Result<RatFunc> {
        Ok(self
            .contributions(pi, sigma)?
            .iter()
            .fold(RatFunc::zero(), |acc, t| &acc + &t.term))
    }

    /// Every entry, each evaluated from scratch.
    pub fn matrix(&self) -> Result<Matrix<RatFunc>> {
        if self.k > DENSE_K_LIMIT {
            return Err(Error::PairingCountTooLarge {
                k: self.k,
                limit: DENSE_K_LIMIT,
            });
        }
        let pairings = enumerate_pairings_with_limit(self.k, DENSE_K_LIMIT)?;
        let size = pairings.len();
        let workers = std::thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(size);
        if workers <= 1 {
            let data = pairings
                .iter()
                .flat_map(|pi| pairings.iter().map(move |sigma| (pi, sigma)))
                .map(|(pi, sigma)| self.entry(pi, sigma))
                .collect::<Result<Vec<_>>>()?;
            return Matrix::new(size, size, data);
        }
        let rows_per = size.div_ceil(workers);
        let chunks: Vec<Result<Vec<RatFunc>>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..size)
                .step_by(rows_per)
                .map(|start| {
                    let pairings = &pairings;
                    s.spawn(move || {
                        let mut out = Vec::new();
                        for pi in &pairings[start..(start + rows_per).min(size)] {
                            for sigma in pairings {
                                out.push(self.entry(pi, sigma)?);
                            }
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("zonal worker panicked"))
                .collect()
        });
        let mut data = Vec::with_capacity(size * size);
        for chunk in chunks {
            data.extend(chunk?);
        }
        Matrix::new(size, size, data)
    }
}

/// `w^lambda(g)` with the frozen convention.
pub fn zonal_spherical(lambda: &IntegerPartition, g: &Permutation) -> Result<BigRational> {
    let engine = ZonalEngine::cached(lambda.weight())?;
    let idx = engine
        .partitions()
        .iter()
        .position(|l| l == lambda)
        .expect("every partition of k is listed");
    Ok(engine.spherical_all(g)?.swap_remove(idx))
}

/// `W(pi, sigma)` from the zonal expression.
pub fn weingarten_zonal(k: usize, pi: &Pairing, sigma: &Pairing) -> Result<RatFunc> {
    ZonalEngine::cached(k)?.entry(pi, sigma)
}

/// For each convention, whether the zonal expression reproduces the given
/// Weingarten matrix at `k = 2` entry by entry.
pub fn calibrate(reference: &Matrix<RatFunc>) -> Result<Vec<(ZonalConvention, bool)>> {
    let pairings = enumerate_pairings_with_limit(2, DENSE_K_LIMIT)?;
    let mut out = Vec::new();
    for convention in ZonalConvention::ALL {
        let engine = ZonalEngine::with_convention(2, convention)?;
        let mut agrees = true;
        for (i, pi) in pairings.iter().enumerate() {
            for (j, sigma) in pairings.iter().enumerate() {
                agrees &= engine.entry(pi, sigma)? == *reference.get(i, j);
            }
        }
        out.push((convention, agrees));
    }
    Ok(out)
}

/// `{i + 1 - 2j : lambda |- k, (i, j) in lambda}`.
pub fn pole_candidates(k: usize) -> BTreeSet<i64> {
    partitions_of(k)
        .iter()
        .flat_map(|l| {
            l.cells()
                .map(|(i, j)| i as i64 + 1 - 2 * j as i64)
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleReport {
    pub k: usize,
    pub candidates: BTreeSet<i64>,
    /// Rational roots of the denominator of `I(a)`, ascending.
    pub actual: Vec<BigRational>,
    pub contained: bool,
}

pub fn pole_report(k: usize, f: &RatFunc) -> Result<PoleReport> {
    let candidates = pole_candidates(k);
    let mut actual = f.den().rational_roots()?;
    actual.sort();
    let contained = actual.iter().all(|r| {
        r.is_integer()
            && r.to_integer()
                .to_i64()
                .is_some_and(|x| candidates.contains(&x))
    });
    Ok(PoleReport {
        k,
        candidates,
        actual,
        contained,
    })
}

/// Poles of the exact `I(a)` against the candidate set for its `k`.
pub fn pole_check(a: &ExponentMatrix) -> Result<PoleReport> {
    let result = integral(a, Mode::Symbolic)?;
    let f = result.value.symbolic().expect("symbolic mode");
    let report = pole_report(result.k, f)?;
    debug_assert!(!f.is_zero() || report.actual.is_empty());
    Ok(report)
}

/// Coset type of `g`: the loop type between the base pairing and its image.
pub fn coset_type(g: &Permutation) -> Vec<usize> {
    let m = g.degree();
    let base: Vec<u8> = (0..m).map(|x| (x ^ 1) as u8).collect();
    let mut moved = vec![0u8; m];
    for x in 0..m {
        moved[g.images()[x]] = g.images()[x ^ 1] as u8;
    }
    loop_type_raw(&base, &moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::weingarten::weingarten_dense_symbolic;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn part(p: &[usize]) -> IntegerPartition {
        IntegerPartition::new(p.to_vec())
    }

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(num.to_vec()), Poly::from_ints(den.to_vec())).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(hyperoctahedral_group(1).unwrap().len(), 2);
        assert_eq!(hyperoctahedral_group(2).unwrap().len(), 8);
        assert_eq!(hyperoctahedral_group(3).unwrap().len(), 48);
        assert!(hyperoctahedral_group(6).is_err());
        let base = Pairing::base(3);
        for h in hyperoctahedral_group(3).unwrap() {
            assert_eq!(coset_type(&h), vec![1, 1, 1]);
            let moved: Vec<u8> = (0..6)
                .map(|x| h.images()[h.inverse().images()[x] ^ 1] as u8)
                .collect();
            assert_eq!(moved, base.partner());
        }
    }

    #[test]
    fn calibration_selects_the_frozen_convention() {
        let reference = weingarten_dense_symbolic(2).unwrap();
        let results = calibrate(&reference).unwrap();
        let passing: Vec<_> = results
            .iter()
            .filter(|(_, ok)| *ok)
            .map(|(c, _)| *c)
            .collect();
        assert_eq!(passing, vec![FROZEN_CONVENTION]);
    }

    #[test]
    fn spherical_examples() {
        for k in 1..=3 {
            for lambda in partitions_of(k) {
                assert_eq!(
                    zonal_spherical(&lambda, &Permutation::identity(2 * k)).unwrap(),
                    int(1)
                );
            }
        }
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(zonal_spherical(&part(&[1]), &swap).unwrap(), int(1));
        // (1 3)(2 4) lies in H_2
        let g = Permutation::from_one_based(&[3, 4, 1, 2]).unwrap();
        assert_eq!(zonal_spherical(&part(&[2]), &g).unwrap(), int(1));
        assert_eq!(zonal_spherical(&part(&[1, 1]), &g).unwrap(), int(1));
        // (2 3) joins the two base blocks into one loop of half-length 2
        let g = Permutation::from_one_based(&[1, 3, 2, 4]).unwrap();
        assert_eq!(zonal_spherical(&part(&[2]), &g).unwrap(), int(1));
        assert_eq!(
            zonal_spherical(&part(&[1, 1]), &g).unwrap(),
            BigRational::new(BigInt::from(-1), BigInt::from(2))
        );
    }

    #[test]
    fn small_entries() {
        let one = Pairing::base(1);
        assert_eq!(weingarten_zonal(1, &one, &one).unwrap(), rf(&[1], &[0, 1]));
        let a = Pairing::from_pairs(&[(1, 2), (3, 4)]).unwrap();
        let b = Pairing::from_pairs(&[(1, 3), (2, 4)]).unwrap();
        // n (n - 1) (n + 2) = n^3 + n^2 - 2n
        assert_eq!(
            weingarten_zonal(2, &a, &a).unwrap(),
            rf(&[1, 1], &[0, -2, 1, 1])
        );
        assert_eq!(
            weingarten_zonal(2, &a, &b).unwrap(),
            rf(&[-1], &[0, -2, 1, 1])
        );
    }

    #[test]
    fn audit_terms_sum_to_entry() {
        let engine = ZonalEngine::cached(3).unwrap();
        let pairings = enumerate_pairings_with_limit(3, 5).unwrap();
        let terms = engine.contributions(&pairings[0], &pairings[7]).unwrap();
        assert_eq!(terms.len(), 3);
        let total = terms.iter().fold(RatFunc::zero(), |acc, t| &acc + &t.term);
        assert_eq!(total, engine.entry(&pairings[0], &pairings[7]).unwrap());
    }

    #[test]
    fn matches_gram_inverse_up_to_three() {
        for k in 1..=3 {
            let zonal = ZonalEngine::cached(k).unwrap().matrix().unwrap();
            assert_eq!(zonal, weingarten_dense_symbolic(k).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn dimensions_count_pairings() {
        for k in 1..=5 {
            let total: BigInt = partitions_of(k)
                .iter()
                .map(|l| BigInt::from(hook_dimension(&l.doubled())))
                .sum();
            assert_eq!(total, double_factorial(2 * k as u64), "k = {k}");
        }
    }

    #[test]
    fn constant_on_double_cosets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 2..=3 {
            let engine = ZonalEngine::new(k).unwrap();
            let group = engine.group().to_vec();
            for _ in 0..20 {
                let mut images: Vec<usize> = (0..2 * k).collect();
                images.shuffle(&mut rng);
                let g = Permutation::new(images).unwrap();
                let left = &group[rng.gen_range(0..group.len())];
                let right = &group[rng.gen_range(0..group.len())];
                let moved = left.compose(&g).compose(right);
                assert_eq!(
                    engine.spherical_all(&g).unwrap(),
                    engine.spherical_all(&moved).unwrap()
                );
                assert_eq!(coset_type(&g), coset_type(&moved));
            }
        }
    }

    #[test]
    fn candidate_sets() {
        assert_eq!(pole_candidates(1), BTreeSet::from([0]));
        assert_eq!(pole_candidates(2), BTreeSet::from([0, -2, 1]));
        assert_eq!(pole_candidates(3), BTreeSet::from([0, -2, -4, 1, 2]));
    }

    #[test]
    fn pole_reports() {
        let a = ExponentMatrix::new(vec![vec![2, 0], vec![0, 2]]).unwrap();
        let report = pole_check(&a).unwrap();
        assert!(report.contained);
        assert_eq!(report.actual, vec![int(-2), int(0), int(1)]);

        let report = pole_check(&ExponentMatrix::new(vec![vec![2]]).unwrap()).unwrap();
        assert_eq!(report.actual, vec![int(0)]);
        assert!(report.contained);

        let report =
            pole_check(&ExponentMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap()).unwrap();
        assert!(report.actual.is_empty());
        assert!(report.contained);

        let outside = pole_report(1, &rf(&[1], &[-3, 1])).unwrap();
        assert!(!outside.contained);
    }
}
