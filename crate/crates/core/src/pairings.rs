//! Brauer diagrams: perfect matchings of `{1, ..., 2k}`, the loops formed by
//! superposing two of them, and the multi-indices read off an exponent
//! matrix.
//!
//! Elements are 1-based in every public signature and serialized form.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default upper bound on `k` for full pairing enumeration (10395 pairings).
pub const DEFAULT_PAIRING_LIMIT: usize = 6;

/// A perfect matching, stored as its fixed-point-free involution.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pairing {
    partner: Vec<u8>,
}

impl Pairing {
    /// Builds a pairing from 1-based pairs in any order.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let size = 2 * pairs.len();
        let mut partner = vec![u8::MAX; size];
        for &(a, b) in pairs {
            if a == b || a == 0 || b == 0 || a > size || b > size {
                return Err(Error::InvalidArgument(format!("bad pair ({a}, {b})")));
            }
            if partner[a - 1] != u8::MAX || partner[b - 1] != u8::MAX {
                return Err(Error::InvalidArgument(format!(
                    "element repeated in ({a}, {b})"
                )));
            }
            partner[a - 1] = (b - 1) as u8;
            partner[b - 1] = (a - 1) as u8;
        }
        Ok(Pairing { partner })
    }

    /// Builds a pairing from a 0-based involution array.
    pub fn from_partner(partner: Vec<u8>) -> Result<Self> {
        let ok = partner.len() % 2 == 0
            && partner.iter().enumerate().all(|(x, &y)| {
                (y as usize) < partner.len() && y as usize != x && partner[y as usize] as usize == x
            });
        if !ok {
            return Err(Error::InvalidArgument(
                "partner array is not a fixed-point-free involution".into(),
            ));
        }
        Ok(Pairing { partner })
    }

    /// The base pairing `{1,2}, {3,4}, ..., {2k-1,2k}`.
    pub fn base(k: usize) -> Self {
        Pairing {
            partner: (0..2 * k).map(|x| (x ^ 1) as u8).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.partner.len() / 2
    }

    /// 0-based involution array.
    pub fn partner(&self) -> &[u8] {
        &self.partner
    }

    /// Canonical 1-based pairs `(lo, hi)`, sorted by `lo`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x < y as usize)
            .map(|(x, &y)| (x + 1, y as usize + 1))
            .collect()
    }

    /// Position of this pairing in [`enumerate_pairings`] order.
    pub fn index(&self) -> usize {
        let mut used = vec![false; self.partner.len()];
        let mut remaining = self.partner.len();
        let mut index = 0;
        for x in 0..self.partner.len() {
            if used[x] {
                continue;
            }
            let y = self.partner[x] as usize;
            // rank of y among the unused elements after x
            let choice = (x + 1..y).filter(|&z| !used[z]).count();
            remaining -= 2;
            index += choice * odd_double_factorial(remaining);
            used[x] = true;
            used[y] = true;
        }
        index
    }
}

/// `(m-1)(m-3)...1` for even `m`: the number of pairings of `m` points.
fn odd_double_factorial(m: usize) -> usize {
    (1..m).step_by(2).product()
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.k() <= 4;
        let parts: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(a, b)| {
                if compact {
                    format!("{a}{b}")
                } else {
                    format!("{a}-{b}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// All pairings of `{1, ..., 2k}` in lexicographic order of their sorted pair
/// lists, subject to [`DEFAULT_PAIRING_LIMIT`].
pub fn enumerate_pairings(k: usize) -> Result<Vec<Pairing>> {
    enumerate_pairings_with_limit(k, DEFAULT_PAIRING_LIMIT)
}

pub fn enumerate_pairings_with_limit(k: usize, limit: usize) -> Result<Vec<Pairing>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if k > limit {
        return Err(Error::PairingCountTooLarge { k, limit });
    }
    let mut out = Vec::with_capacity(odd_double_factorial(2 * k));
    let mut partner = vec![u8::MAX; 2 * k];
    extend_matchings(&mut partner, &|_, _| true, &mut out);
    Ok(out)
}

/// Shared read-only pairing table for `k`.
pub fn pairings_cached(k: usize, limit: usize) -> Result<Arc<Vec<Pairing>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Pairing>>>>> = OnceLock::new();
    if k > limit {
        return Err(Error::PairingCountTooLarge { k, limit });
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("pairing cache").get(&k) {
        return Ok(hit.clone());
    }
    let table = Arc::new(enumerate_pairings_with_limit(k, limit)?);
    Ok(cache
        .lock()
        .expect("pairing cache")
        .entry(k)
        .or_insert(table)
        .clone())
}

/// Depth-first completion of a partial matching; the smallest unmatched
/// element is paired with each admissible later element in increasing order.
fn extend_matchings(
    partner: &mut Vec<u8>,
    allowed: &dyn Fn(usize, usize) -> bool,
    out: &mut Vec<Pairing>,
) {
    let Some(x) = partner.iter().position(|&p| p == u8::MAX) else {
        out.push(Pairing {
            partner: partner.clone(),
        });
        return;
    };
    for y in x + 1..partner.len() {
        if partner[y] != u8::MAX || !allowed(x, y) {
            continue;
        }
        partner[x] = y as u8;
        partner[y] = x as u8;
        extend_matchings(partner, allowed, out);
        partner[x] = u8::MAX;
        partner[y] = u8::MAX;
    }
}

fn check_same_k(pi: &Pairing, sigma: &Pairing) -> Result<()> {
    if pi.k() != sigma.k() {
        return Err(Error::PairingSizeMismatch {
            left: pi.k(),
            right: sigma.k(),
        });
    }
    Ok(())
}

/// Half-lengths of the alternating cycles in the superposition of two
/// involutions given as partner arrays, sorted descending. This is a
/// partition of `k` whose length is the loop count.
pub(crate) fn loop_type_raw(pi: &[u8], sigma: &[u8]) -> Vec<usize> {
    let mut seen = 0u64;
    let mut parts = Vec::new();
    for start in 0..pi.len() {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut half = 0;
        let mut x = start;
        loop {
            let y = pi[x] as usize;
            seen |= 1 << x | 1 << y;
            half += 1;
            x = sigma[y] as usize;
            if x == start {
                break;
            }
        }
        parts.push(half);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Number of loops obtained by superposing `pi` and `sigma`.
pub fn loops(pi: &Pairing, sigma: &Pairing) -> Result<usize> {
    Ok(loop_type(pi, sigma)?.len())
}

/// Loop half-lengths of the superposition of `pi` and `sigma`, descending.
pub fn loop_type(pi: &Pairing, sigma: &Pairing) -> Result<Vec<usize>> {
    check_same_k(pi, sigma)?;
    Ok(loop_type_raw(&pi.partner, &sigma.partner))
}

/// A sequence of positive labels, one per point of `{1, ..., 2k}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Whether every pair of `pi` joins two positions carrying the same label.
pub fn delta(pi: &Pairing, idx: &MultiIndex) -> Result<bool> {
    if idx.len() != 2 * pi.k() {
        return Err(Error::IndexLength {
            expected: 2 * pi.k(),
            got: idx.len(),
        });
    }
    Ok(pi
        .partner
        .iter()
        .enumerate()
        .all(|(x, &y)| idx.0[x] == idx.0[y as usize]))
}

/// The pairings `pi` with `delta(pi, idx) = 1`, enumerated directly as
/// matchings inside the blocks of equal labels, in canonical order.
pub fn compatible_pairings(idx: &MultiIndex) -> Vec<Pairing> {
    if idx.is_empty() || idx.len() % 2 == 1 {
        return Vec::new();
    }
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &v in &idx.0 {
        *counts.entry(v).or_default() += 1;
    }
    if counts.values().any(|c| c % 2 == 1) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut partner = vec![u8::MAX; idx.len()];
    extend_matchings(&mut partner, &|x, y| idx.0[x] == idx.0[y], &mut out);
    out
}

/// A `p x q` matrix of nonnegative exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentMatrix {
    p: usize,
    q: usize,
    entries: Vec<u64>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let p = rows.len();
        let q = rows.first().map_or(0, Vec::len);
        if p == 0 || q == 0 {
            return Err(Error::InvalidArgument(
                "exponent matrix must be non-empty".into(),
            ));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != q) {
            return Err(Error::InvalidArgument(format!("ragged row {}", i + 1)));
        }
        Ok(ExponentMatrix {
            p,
            q,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(p: usize, q: usize, f: impl Fn(usize, usize) -> u64) -> Self {
        assert!(p > 0 && q > 0);
        ExponentMatrix {
            p,
            q,
            entries: (0..p * q).map(|x| f(x / q, x % q)).collect(),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// 0-based entry.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.q + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.q).map(<[u64]>::to_vec).collect()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// Half the total degree, when the total is even.
    pub fn k(&self) -> Option<usize> {
        let t = self.total();
        (t % 2 == 0).then_some((t / 2) as usize)
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.entries
            .chunks(self.q)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.q)
            .map(|j| (0..self.p).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn all_even(&self) -> bool {
        self.entries.iter().all(|x| x % 2 == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.q, self.p, |i, j| self.get(j, i))
    }

    /// Rows reordered so that new row `i` is old row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.p, self.q, |i, j| self.get(perm[i], j))
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.p, self.q, |i, j| self.get(i, perm[j]))
    }

    /// Copy with `delta` added to the 0-based entry `(i, j)`.
    pub fn with_added(&self, i: usize, j: usize, delta: u64) -> Self {
        let mut out = self.clone();
        out.entries[i * self.q + j] += delta;
        out
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(u64::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Row-major read of `a`: entry `a_ij` contributes `a_ij` copies of `i` to
/// the left index and `a_ij` copies of `j` to the right index.
pub fn build_multi_indices(a: &ExponentMatrix) -> Result<(MultiIndex, MultiIndex)> {
    let total = a.total();
    if total % 2 == 1 {
        return Err(Error::OddTotalDegree { total });
    }
    let mut left = Vec::with_capacity(total as usize);
    let mut right = Vec::with_capacity(total as usize);
    for i in 0..a.p {
        for j in 0..a.q {
            for _ in 0..a.get(i, j) {
                left.push(i + 1);
                right.push(j + 1);
            }
        }
    }
    Ok((MultiIndex(left), MultiIndex(right)))
}

/// Every row sum and every column sum is even.
pub fn is_admissible(a: &ExponentMatrix) -> bool {
    a.row_sums().iter().chain(&a.col_sums()).all(|s| s % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(usize, usize)]) -> Pairing {
        Pairing::from_pairs(pairs).unwrap()
    }

    fn em(rows: &[&[u64]]) -> ExponentMatrix {
        ExponentMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_pairings(1).unwrap(), vec![p(&[(1, 2)])]);
        let two: Vec<String> = enumerate_pairings(2)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(two, ["12|34", "13|24", "14|23"]);
        assert_eq!(enumerate_pairings(3).unwrap().len(), 15);
        assert_eq!(
            enumerate_pairings(7),
            Err(Error::PairingCountTooLarge { k: 7, limit: 6 })
        );
        assert_eq!(enumerate_pairings_with_limit(7, 7).unwrap().len(), 135135);
    }

    #[test]
    fn index_matches_enumeration_order() {
        for k in 1..=5 {
            for (i, pi) in enumerate_pairings(k).unwrap().iter().enumerate() {
                assert_eq!(pi.index(), i);
            }
        }
    }

    #[test]
    fn text_forms() {
        let pi = p(&[(1, 2), (3, 4), (5, 6), (7, 8), (9, 10)]);
        assert_eq!(pi.to_string(), "1-2|3-4|5-6|7-8|9-10");
        assert_eq!(p(&[(2, 3), (1, 4)]).to_string(), "14|23");
    }

    #[test]
    fn loop_examples() {
        let a = p(&[(1, 2), (3, 4)]);
        let b = p(&[(1, 3), (2, 4)]);
        let c = p(&[(1, 4), (2, 3)]);
        assert_eq!(loops(&a, &a).unwrap(), 2);
        assert_eq!(loops(&a, &b).unwrap(), 1);
        assert_eq!(loops(&a, &c).unwrap(), 1);
        assert_eq!(loop_type(&a, &b).unwrap(), vec![2]);
        assert!(matches!(
            loops(&a, &Pairing::base(3)),
            Err(Error::PairingSizeMismatch { .. })
        ));
    }

    #[test]
    fn loops_equal_k_only_on_diagonal() {
        for k in 1..=4 {
            let all = enumerate_pairings(k).unwrap();
            for pi in &all {
                for sigma in &all {
                    let l = loops(pi, sigma).unwrap();
                    assert_eq!(l, loops(sigma, pi).unwrap());
                    assert!((1..=k).contains(&l));
                    assert_eq!(l == k, pi == sigma);
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let a = p(&[(1, 2), (3, 4)]);
        let b = p(&[(1, 3), (2, 4)]);
        assert!(delta(&a, &MultiIndex(vec![1, 1, 2, 2])).unwrap());
        assert!(!delta(&b, &MultiIndex(vec![1, 1, 2, 2])).unwrap());
        assert!(delta(&b, &MultiIndex(vec![5, 5, 5, 5])).unwrap());
        assert_eq!(
            delta(&a, &MultiIndex(vec![1, 1])),
            Err(Error::IndexLength {
                expected: 4,
                got: 2
            })
        );
    }

    #[test]
    fn compatible_pairings_agree_with_filtering() {
        let cases = [
            vec![1, 1, 2, 2],
            vec![1, 2, 1, 2, 3, 3],
            vec![1, 1, 1, 1, 2, 2],
            vec![4, 4, 4, 4, 4, 4, 4, 4],
            vec![1, 2, 1, 1],
        ];
        for idx in cases {
            let idx = MultiIndex(idx);
            let k = idx.len() / 2;
            let filtered: Vec<Pairing> = enumerate_pairings(k)
                .unwrap()
                .into_iter()
                .filter(|pi| delta(pi, &idx).unwrap())
                .collect();
            assert_eq!(compatible_pairings(&idx), filtered, "{idx:?}");
        }
    }

    #[test]
    fn single_block_counts() {
        // one entry a_11 = 2m: every pairing fits, (2m-1)!! of them
        for m in 1..=4u64 {
            let (left, _) = build_multi_indices(&em(&[&[2 * m]])).unwrap();
            let count = enumerate_pairings(m as usize)
                .unwrap()
                .iter()
                .filter(|pi| delta(pi, &left).unwrap())
                .count();
            assert_eq!(count, odd_double_factorial(2 * m as usize));
        }
    }

    #[test]
    fn multi_index_examples() {
        let (l, r) = build_multi_indices(&em(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(l.0, vec![1, 1, 2, 2]);
        assert_eq!(r.0, vec![1, 2, 1, 2]);
        let (l, r) = build_multi_indices(&em(&[&[2]])).unwrap();
        assert_eq!((l.0, r.0), (vec![1, 1], vec![1, 1]));
        let (l, r) = build_multi_indices(&em(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!((l.0, r.0), (vec![1, 1, 2, 2], vec![1, 1, 2, 2]));
        assert_eq!(
            build_multi_indices(&em(&[&[1, 2]])),
            Err(Error::OddTotalDegree { total: 3 })
        );
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&em(&[&[1, 1], &[1, 1]])));
        assert!(!is_admissible(&em(&[&[1, 0], &[0, 0]])));
        assert!(!is_admissible(&em(&[&[2, 1], &[0, 1]])));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(ExponentMatrix::new(vec![vec![1], vec![1, 2]]).is_err());
    }
}
