//! The Brauer space `D_k`: pairings with `d(pi, sigma) = k - loops(pi, sigma)`,
//! and signed path counts over it.
//!
//! A path `pi = tau_0 != tau_1 != ... != tau_r = sigma` has sign `(-1)^r` and
//! total length `sum d(tau_{i-1}, tau_i)`. Paths are counted as raw
//! sequences.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pairings::{
    build_multi_indices, compatible_pairings, loop_type_raw, pairings_cached, ExponentMatrix,
    Pairing, DEFAULT_PAIRING_LIMIT,
};

#[derive(Debug)]
pub struct BrauerSpace {
    k: usize,
    points: Arc<Vec<Pairing>>,
    dist: Vec<u8>,
}

impl BrauerSpace {
    /// Shared distance table for `k`.
    pub fn cached(k: usize) -> Result<Arc<BrauerSpace>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BrauerSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("brauer cache").get(&k) {
            return Ok(hit.clone());
        }
        let space = Arc::new(Self::new(k)?);
        Ok(cache
            .lock()
            .expect("brauer cache")
            .entry(k)
            .or_insert(space)
            .clone())
    }

    pub fn new(k: usize) -> Result<BrauerSpace> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        let points = pairings_cached(k, DEFAULT_PAIRING_LIMIT.min(5))?;
        let n = points.len();
        let mut dist = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let loops = loop_type_raw(points[i].partner(), points[j].partner()).len();
                dist[i * n + j] = (k - loops) as u8;
            }
        }
        Ok(BrauerSpace { k, points, dist })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Pairing] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance between the points at indices `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> usize {
        self.dist[i * self.points.len() + j] as usize
    }

    fn index_of(&self, pi: &Pairing) -> Result<usize> {
        if pi.k() != self.k {
            return Err(Error::PairingSizeMismatch {
                left: pi.k(),
                right: self.k,
            });
        }
        Ok(pi.index())
    }

    /// `counts[len][tau]`: signed number of paths from `source` to `tau` of
    /// total length `len`, for `len <= max_len`.
    pub fn signed_path_table(&self, source: usize, max_len: usize) -> Vec<Vec<BigInt>> {
        let n = self.points.len();
        let mut counts = vec![vec![BigInt::zero(); n]; max_len + 1];
        counts[0][source] = BigInt::one();
        for len in 0..=max_len {
            for tau in 0..n {
                if counts[len][tau].is_zero() {
                    continue;
                }
                let here = counts[len][tau].clone();
                for next in 0..n {
                    let step = self.dist(tau, next);
                    // step = 0 exactly when next = tau, which paths forbid
                    if step == 0 || len + step > max_len {
                        continue;
                    }
                    counts[len + step][next] -= &here;
                }
            }
        }
        counts
    }

    /// Signed count of paths between the points at `i` and `j` with the given
    /// total length.
    pub fn count_between(&self, i: usize, j: usize, total_length: usize) -> BigInt {
        self.signed_path_table(i, total_length)[total_length][j].clone()
    }
}

/// `d(pi, sigma) = k - loops(pi, sigma)`.
pub fn distance(pi: &Pairing, sigma: &Pairing) -> Result<usize> {
    if pi.k() != sigma.k() {
        return Err(Error::PairingSizeMismatch {
            left: pi.k(),
            right: sigma.k(),
        });
    }
    Ok(pi.k() - loop_type_raw(pi.partner(), sigma.partner()).len())
}

/// Signed count of paths from `pi` to `sigma` of the given total length.
pub fn count_signed_paths(pi: &Pairing, sigma: &Pairing, total_length: usize) -> Result<BigInt> {
    distance(pi, sigma)?;
    let space = BrauerSpace::cached(pi.k())?;
    Ok(space.count_between(space.index_of(pi)?, space.index_of(sigma)?, total_length))
}

/// Signed paths from `pi` to `sigma` with geodesicity defect `g`.
pub fn k_g(pi: &Pairing, sigma: &Pairing, g: usize) -> Result<BigInt> {
    count_signed_paths(pi, sigma, distance(pi, sigma)? + g)
}

/// Signed count of geodesic paths, `K_0`.
pub fn mobius(pi: &Pairing, sigma: &Pairing) -> Result<BigInt> {
    k_g(pi, sigma, 0)
}

/// Distance and Möbius matrices of `D_k` over canonical pairing order.
pub fn mobius_matrix(k: usize) -> Result<(Vec<Vec<usize>>, Vec<Vec<BigInt>>)> {
    let space = BrauerSpace::cached(k)?;
    let n = space.len();
    let dist = (0..n)
        .map(|i| (0..n).map(|j| space.dist(i, j)).collect())
        .collect();
    let mu = (0..n)
        .map(|i| {
            let table = space.signed_path_table(i, k - 1);
            (0..n).map(|j| table[space.dist(i, j)][j].clone()).collect()
        })
        .collect();
    Ok((dist, mu))
}

/// Endpoint indices `(pi, sigma)` with `delta_pi(a_l) = delta_sigma(a_r) = 1`.
fn admissible_endpoints(a: &ExponentMatrix) -> Result<(Arc<BrauerSpace>, Vec<usize>, Vec<usize>)> {
    let total = a.total();
    if total % 2 == 1 || total == 0 {
        return Err(Error::NoAdmissiblePairings);
    }
    let (left, right) = build_multi_indices(a)?;
    let lefts: Vec<usize> = compatible_pairings(&left)
        .iter()
        .map(Pairing::index)
        .collect();
    let rights: Vec<usize> = compatible_pairings(&right)
        .iter()
        .map(Pairing::index)
        .collect();
    if lefts.is_empty() || rights.is_empty() {
        return Err(Error::NoAdmissiblePairings);
    }
    let space = BrauerSpace::cached((total / 2) as usize)?;
    Ok((space, lefts, rights))
}

/// `min d(pi, sigma)` over admissible endpoint pairs.
pub fn e_of_a(a: &ExponentMatrix) -> Result<usize> {
    let (space, lefts, rights) = admissible_endpoints(a)?;
    Ok(lefts
        .iter()
        .flat_map(|&i| rights.iter().map(move |&j| (i, j)))
        .map(|(i, j)| space.dist(i, j))
        .min()
        .expect("nonempty"))
}

/// Signed admissible paths of total length `d`.
pub fn h_d_of_a(a: &ExponentMatrix, d: usize) -> Result<BigInt> {
    Ok(h_series_of_a(a, d)?.swap_remove(d))
}

/// `[H_0(a), ..., H_max(a)]`.
pub fn h_series_of_a(a: &ExponentMatrix, max_len: usize) -> Result<Vec<BigInt>> {
    let (space, lefts, rights) = admissible_endpoints(a)?;
    let mut out = vec![BigInt::zero(); max_len + 1];
    for &i in &lefts {
        let table = space.signed_path_table(i, max_len);
        for (len, row) in table.iter().enumerate() {
            for &j in &rights {
                out[len] += &row[j];
            }
        }
    }
    Ok(out)
}

/// Signed admissible paths of total length `e(a)`.
pub fn mu_of_a(a: &ExponentMatrix) -> Result<BigInt> {
    h_d_of_a(a, e_of_a(a)?)
}
