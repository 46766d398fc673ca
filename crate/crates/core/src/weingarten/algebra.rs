//! The algebra of `S_2k`-invariant kernels on pairings.
//!
//! A kernel `F(pi, sigma)` that is invariant under relabelling `{1..2k}`
//! depends only on the loop type of `(pi, sigma)`, a partition of `k`. The
//! Gram matrix is such a kernel, hence so are its inverse and its
//! pseudo-inverse (both are polynomials in `G`). Working in this algebra
//! shrinks a `(2k-1)!! x (2k-1)!!` problem to `p(k) x p(k)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{mat_inverse, Field, Matrix};
use crate::error::{Error, Result};
use crate::pairings::{loop_type_raw, pairings_cached, Pairing};

/// Loop types for a fixed `k` plus the structure constants of kernel
/// composition.
#[derive(Debug)]
pub struct TypeTable {
    k: usize,
    pairings: Arc<Vec<Pairing>>,
    types: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    identity: usize,
    /// `structure[nu][alpha][beta]` = number of pairings `tau` with
    /// `type(base, tau) = alpha` and `type(tau, rep_nu) = beta`.
    structure: Vec<Vec<Vec<u64>>>,
}

impl TypeTable {
    pub fn cached(k: usize, pairing_limit: usize) -> Result<Arc<TypeTable>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TypeTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("type table cache").get(&k) {
            return Ok(hit.clone());
        }
        let table = Arc::new(Self::build(k, pairing_limit)?);
        Ok(cache
            .lock()
            .expect("type table cache")
            .entry(k)
            .or_insert(table)
            .clone())
    }

    fn build(k: usize, pairing_limit: usize) -> Result<TypeTable> {
        let pairings = pairings_cached(k, pairing_limit)?;
        let base = &pairings[0];
        let mut types: Vec<Vec<usize>> = Vec::new();
        let mut lookup = HashMap::new();
        let mut reps = Vec::new();
        let mut base_type = Vec::with_capacity(pairings.len());
        for tau in pairings.iter() {
            let t = loop_type_raw(base.partner(), tau.partner());
            let idx = *lookup.entry(t.clone()).or_insert_with(|| {
                types.push(t);
                reps.push(tau.clone());
                types.len() - 1
            });
            base_type.push(idx);
        }
        let p = types.len();
        let identity = lookup[&vec![1; k]];
        let mut structure = vec![vec![vec![0u64; p]; p]; p];
        for (nu, rep) in reps.iter().enumerate() {
            for (tau, &alpha) in pairings.iter().zip(&base_type) {
                let beta = lookup[&loop_type_raw(tau.partner(), rep.partner())];
                structure[nu][alpha][beta] += 1;
            }
        }
        Ok(TypeTable {
            k,
            pairings,
            types,
            lookup,
            identity,
            structure,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pairings(&self) -> &Arc<Vec<Pairing>> {
        &self.pairings
    }

    /// Loop types (partitions of `k`) in first-encounter order.
    pub fn types(&self) -> &[Vec<usize>] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Index of the all-ones type, i.e. `pi = sigma`.
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn type_index(&self, loop_type: &[usize]) -> Option<usize> {
        self.lookup.get(loop_type).copied()
    }

    pub fn type_of(&self, pi: &Pairing, sigma: &Pairing) -> usize {
        self.lookup[&loop_type_raw(pi.partner(), sigma.partner())]
    }

    pub fn unit<T: Field>(&self) -> Vec<T> {
        (0..self.len())
            .map(|i| {
                if i == self.identity {
                    T::one()
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    /// Composition of two invariant kernels.
    pub fn multiply<T: Field>(&self, f: &[T], g: &[T]) -> Vec<T> {
        self.structure
            .iter()
            .map(|by_alpha| {
                let mut acc = T::zero();
                for (alpha, by_beta) in by_alpha.iter().enumerate() {
                    if f[alpha].is_zero() {
                        continue;
                    }
                    for (beta, &count) in by_beta.iter().enumerate() {
                        if count == 0 || g[beta].is_zero() {
                            continue;
                        }
                        acc = acc.add(&f[alpha].mul(&g[beta]).mul(&T::from_u64(count)));
                    }
                }
                acc
            })
            .collect()
    }

    /// Matrix of `f -> g * f` in the type basis.
    pub fn left_multiplication<T: Field>(&self, g: &[T]) -> Matrix<T> {
        let p = self.len();
        Matrix::from_fn(p, p, |nu, beta| {
            (0..p).fold(T::zero(), |acc, alpha| {
                let count = self.structure[nu][alpha][beta];
                if count == 0 {
                    acc
                } else {
                    acc.add(&g[alpha].mul(&T::from_u64(count)))
                }
            })
        })
    }

    /// Inverse of an invertible kernel.
    pub fn inverse<T: Field>(&self, g: &[T]) -> Result<Vec<T>> {
        let inv = mat_inverse(&self.left_multiplication(g))?;
        Ok((0..self.len())
            .map(|nu| inv.get(nu, self.identity).clone())
            .collect())
    }

    /// Moore–Penrose pseudo-inverse of a symmetric kernel, as a polynomial in
    /// `g` read off its minimal polynomial. Also reports whether `g` was
    /// singular.
    pub fn pseudo_inverse<T: Field>(&self, g: &[T]) -> Result<(Vec<T>, bool)> {
        let minimal = self.minimal_polynomial(g)?;
        let zero_root = minimal[0].is_zero();
        // m(x) = x^s q(x) with q(0) != 0; diagonalizable kernels have s <= 1
        let q: &[T] = if zero_root { &minimal[1..] } else { &minimal };
        if zero_root && q[0].is_zero() {
            return Err(Error::InvalidArgument(
                "kernel is not diagonalizable".into(),
            ));
        }
        // q(x) = q0 + x h(x); on every nonzero eigenvalue e, 1/e = -h(e)/q0
        let q0 = q[0].clone();
        let h = &q[1..];
        let neg_inv_q0 = T::zero().sub(&T::one().div(&q0));
        let mut result = self.evaluate(h, g);
        result.iter_mut().for_each(|x| *x = x.mul(&neg_inv_q0));
        if zero_root {
            // project onto the range: E = 1 - q(g)/q0
            let qg = self.evaluate(q, g);
            let unit = self.unit::<T>();
            let projector: Vec<T> = unit
                .iter()
                .zip(&qg)
                .map(|(u, v)| u.sub(&v.div(&q0)))
                .collect();
            result = self.multiply(&result, &projector);
        }
        Ok((result, zero_root))
    }

    /// `sum_i coeffs[i] g^i` in the algebra.
    fn evaluate<T: Field>(&self, coeffs: &[T], g: &[T]) -> Vec<T> {
        let mut acc: Vec<T> = vec![T::zero(); self.len()];
        for c in coeffs.iter().rev() {
            acc = self.multiply(&acc, g);
            acc[self.identity] = acc[self.identity].add(c);
        }
        acc
    }

    /// Monic minimal polynomial of `g`, ascending coefficients, from the first
    /// linear dependency among `1, g, g^2, ...`.
    fn minimal_polynomial<T: Field>(&self, g: &[T]) -> Result<Vec<T>> {
        let mut powers = vec![self.unit::<T>()];
        loop {
            let next = self.multiply(powers.last().expect("nonempty"), g);
            powers.push(next);
            let d = powers.len() - 1;
            // solve sum_{i<d} c_i g^i = -g^d
            let system = Matrix::from_fn(self.len(), d + 1, |row, col| powers[col][row].clone());
            let (reduced, pivots) = system.rref();
            if pivots.last() == Some(&d) {
                if d > self.len() {
                    return Err(Error::InvalidArgument(
                        "minimal polynomial search failed".into(),
                    ));
                }
                continue;
            }
            let mut coeffs: Vec<T> = vec![T::zero(); d + 1];
            for (row, &col) in pivots.iter().enumerate() {
                coeffs[col] = T::zero().sub(reduced.get(row, d));
            }
            coeffs[d] = T::one();
            return Ok(coeffs);
        }
    }

    /// Expands a type-indexed kernel to the dense matrix over canonical
    /// pairing order.
    pub fn expand<T: Field>(&self, values: &[T]) -> Matrix<T> {
        let n = self.pairings.len();
        Matrix::from_fn(n, n, |i, j| {
            values[self.type_of(&self.pairings[i], &self.pairings[j])].clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, BigRational};

    #[test]
    fn type_counts() {
        // number of loop types is the partition count p(k)
        for (k, p) in [(1, 1), (2, 2), (3, 3), (4, 5), (5, 7)] {
            assert_eq!(TypeTable::cached(k, 6).unwrap().len(), p);
        }
    }

    #[test]
    fn multiplication_matches_dense_product() {
        let table = TypeTable::cached(3, 6).unwrap();
        let f: Vec<BigRational> = (0..table.len()).map(|i| int(i as i64 + 2)).collect();
        let g: Vec<BigRational> = (0..table.len()).map(|i| int(3 - 2 * i as i64)).collect();
        let dense = table.expand(&f).mul(&table.expand(&g)).unwrap();
        assert_eq!(dense, table.expand(&table.multiply(&f, &g)));
    }

    #[test]
    fn pseudo_inverse_of_invertible_kernel_is_inverse() {
        let table = TypeTable::cached(3, 6).unwrap();
        let g: Vec<BigRational> = table
            .types()
            .iter()
            .map(|t| int(5i64.pow(t.len() as u32)))
            .collect();
        let (pinv, singular) = table.pseudo_inverse(&g).unwrap();
        assert!(!singular);
        assert_eq!(pinv, table.inverse(&g).unwrap());
    }
}
