//! Irreducible characters of the symmetric group by the Murnaghan–Nakayama
//! rule, removing rim hooks on the beta-set (abacus) encoding.

use std::collections::HashMap;
use std::fmt;

use super::partition::IntegerPartition;
use crate::error::{Error, Result};

/// A permutation of `{1, ..., m}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument("images are not a bijection".into()));
            }
        }
        Ok(Permutation { images })
    }

    /// From 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        Self::new(images.iter().map(|&x| x.wrapping_sub(1)).collect())
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (0..m).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based images.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut lengths = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", imgs.join(" "))
    }
}

/// Memoized character table lookups.
#[derive(Default, Debug)]
pub struct CharacterCache {
    memo: HashMap<(Vec<usize>, Vec<usize>), i64>,
}

impl CharacterCache {
    /// `chi^mu` on the class with the given cycle type.
    pub fn value(&mut self, mu: &IntegerPartition, cycle_type: &[usize]) -> i64 {
        self.rec(mu.parts().to_vec(), cycle_type.to_vec())
    }

    fn rec(&mut self, parts: Vec<usize>, rho: Vec<usize>) -> i64 {
        let Some((&r, rest)) = rho.split_first() else {
            return i64::from(parts.is_empty());
        };
        let key = (parts, rho.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let parts = &key.0;
        let l = parts.len();
        let beta: Vec<usize> = parts
            .iter()
            .enumerate()
            .map(|(i, &p)| p + (l - 1 - i))
            .collect();
        let mut total = 0;
        for (i, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let target = b - r;
            // leg length: beads jumped over
            let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
            let sign = if jumped % 2 == 0 { 1 } else { -1 };
            let mut next = beta.clone();
            next[i] = target;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let new_parts: Vec<usize> = next
                .iter()
                .enumerate()
                .map(|(j, &x)| x - (l - 1 - j))
                .filter(|&x| x > 0)
                .collect();
            total += sign * self.rec(new_parts, rest.to_vec());
        }
        self.memo.insert(key, total);
        total
    }
}

/// Irreducible character `chi^mu(g)` of `S_m`.
pub fn mn_character(mu: &IntegerPartition, g: &Permutation) -> Result<i64> {
    if mu.weight() != g.degree() {
        return Err(Error::Dimension(format!(
            "partition of {} evaluated on a permutation of degree {}",
            mu.weight(),
            g.degree()
        )));
    }
    Ok(CharacterCache::default().value(mu, &g.cycle_type()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonal::partition::{hook_dimension, partitions_of};

    fn part(p: &[usize]) -> IntegerPartition {
        IntegerPartition::new(p.to_vec())
    }

    #[test]
    fn character_examples() {
        let swap = Permutation::from_one_based(&[2, 1, 3, 4]).unwrap();
        assert_eq!(mn_character(&part(&[4]), &swap).unwrap(), 1);
        assert_eq!(
            mn_character(&part(&[2, 2]), &Permutation::identity(4)).unwrap(),
            2
        );
        assert_eq!(mn_character(&part(&[2, 2]), &swap).unwrap(), 0);
        assert!(mn_character(&part(&[2, 1]), &swap).is_err());
    }

    #[test]
    fn s4_character_table() {
        // rows (4), (3,1), (2,2), (2,1,1), (1,1,1,1);
        // classes 1^4, 2 1^2, 2^2, 3 1, 4
        let classes: [&[usize]; 5] = [&[1, 1, 1, 1], &[2, 1, 1], &[2, 2], &[3, 1], &[4]];
        let table = [
            [1, 1, 1, 1, 1],
            [3, 1, -1, 0, -1],
            [2, 0, 2, -1, 0],
            [3, -1, -1, 0, 1],
            [1, -1, 1, 1, -1],
        ];
        let mut cache = CharacterCache::default();
        for (mu, row) in partitions_of(4).iter().zip(table) {
            for (class, want) in classes.iter().zip(row) {
                assert_eq!(cache.value(mu, class), want, "{mu} on {class:?}");
            }
        }
    }

    #[test]
    fn identity_value_is_hook_dimension() {
        let mut cache = CharacterCache::default();
        for m in 1..=8 {
            for mu in partitions_of(m) {
                let at_identity = cache.value(&mu, &vec![1; m]);
                assert_eq!(at_identity.to_string(), hook_dimension(&mu).to_string());
            }
        }
    }

    #[test]
    fn permutation_basics() {
        let g = Permutation::from_one_based(&[2, 3, 1, 5, 4]).unwrap();
        assert_eq!(g.cycle_type(), vec![3, 2]);
        assert_eq!(g.compose(&g.inverse()), Permutation::identity(5));
        assert!(Permutation::new(vec![0, 0]).is_err());
    }
}
