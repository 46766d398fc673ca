use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

/// An integer partition, parts weakly decreasing and positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    /// Sorts and drops zero parts.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntegerPartition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `2 lambda = (2 lambda_1, 2 lambda_2, ...)`.
    pub fn doubled(&self) -> Self {
        IntegerPartition {
            parts: self.parts.iter().map(|x| 2 * x).collect(),
        }
    }

    /// Young diagram cells `(row, column)`, 1-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| (i + 1, j)))
    }

    pub fn conjugate(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        IntegerPartition {
            parts: (1..=width)
                .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
                .collect(),
        }
    }

    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| (self.parts[i - 1] - j) + (conj.parts[j - 1] - i) + 1)
            .collect()
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `k` in reverse-lexicographic order.
pub fn partitions_of(k: usize) -> Vec<IntegerPartition> {
    fn go(
        remaining: usize,
        max_part: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<IntegerPartition>,
    ) {
        if remaining == 0 {
            out.push(IntegerPartition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the irreducible representation of `S_m` indexed by `mu`,
/// `m! / prod(hooks)`.
pub fn hook_dimension(mu: &IntegerPartition) -> BigUint {
    let factorial: BigUint = (1..=mu.weight()).fold(BigUint::one(), |acc, x| acc * x);
    let hooks: BigUint = mu
        .hook_lengths()
        .iter()
        .fold(BigUint::one(), |acc, &h| acc * h);
    factorial / hooks
}
