//! First-order behaviour as `n -> infinity`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{closed_form::double_factorial, weingarten_numeric, Limits};
use crate::arith::{int, BigRational, LaurentSeries};
use crate::error::{Error, Result};
use crate::pairings::ExponentMatrix;

/// Leading term of `I(a)`: `(prod a_ij!!) n^-k` when every entry is even,
/// otherwise only the marker `O(n^-(k+1))`.
pub fn leading_term(a: &ExponentMatrix) -> Result<LaurentSeries> {
    let total = a.total();
    if total % 2 == 1 {
        return Err(Error::OddTotalDegree { total });
    }
    let k = (total / 2) as i64;
    if !a.all_even() {
        return Ok(LaurentSeries::zero(k));
    }
    let coeff: BigInt = a
        .rows()
        .iter()
        .flatten()
        .map(|&x| double_factorial(x))
        .product();
    Ok(LaurentSeries {
        leading_order: k,
        coeffs: vec![BigRational::from_integer(coeff)],
        truncation_order: k,
    })
}

/// Both sides of `max |delta(pi, sigma) - n0^k W(pi, sigma)| <= K / (n0 - K)`
/// with `K = (2k-1)!!` the number of pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalBound {
    pub k: usize,
    pub n0: u64,
    pub count: u64,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

pub fn check_diagonal_bound(k: usize, n0: u64, limits: &Limits) -> Result<DiagonalBound> {
    let count: u64 = double_factorial(2 * k as u64)
        .try_into()
        .map_err(|_| Error::InvalidArgument("k too large".into()))?;
    if n0 <= count {
        return Err(Error::BoundHypothesis { n0, count });
    }
    let w = weingarten_numeric(k, n0, limits)?;
    let scale = num_traits::pow(int(n0 as i64), k);
    let identity = w.table().identity();
    let lhs = w
        .type_values()
        .iter()
        .enumerate()
        .map(|(t, v)| {
            let delta = if t == identity {
                int(1)
            } else {
                BigRational::zero()
            };
            (delta - &scale * v).abs()
        })
        .max()
        .expect("at least one type");
    let rhs = BigRational::new(count.into(), (n0 - count).into());
    Ok(DiagonalBound {
        k,
        n0,
        count,
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}
