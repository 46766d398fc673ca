//! Truncated expansions in powers of `1/n` around `n = infinity`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// `sum_j coeffs[j] * n^-(leading_order + j)`, exact through
/// `n^-truncation_order`.
///
/// A series that vanishes through the truncation order has no stored
/// coefficients and `leading_order = truncation_order + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    pub leading_order: i64,
    pub coeffs: Vec<BigRational>,
    pub truncation_order: i64,
}

impl LaurentSeries {
    pub fn zero(truncation_order: i64) -> Self {
        LaurentSeries {
            leading_order: truncation_order + 1,
            coeffs: Vec::new(),
            truncation_order,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `n^-j`, or `None` past the truncation order.
    pub fn coeff(&self, j: i64) -> Option<BigRational> {
        if j > self.truncation_order {
            return None;
        }
        if j < self.leading_order {
            return Some(BigRational::zero());
        }
        Some(
            self.coeffs
                .get((j - self.leading_order) as usize)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.first()
    }

    /// Value of the truncated sum at `n0`.
    pub fn eval_truncated(&self, n0: &BigRational) -> BigRational {
        let inv = n0.recip();
        let mut power = pow(&inv, self.leading_order);
        let mut acc = BigRational::zero();
        for c in &self.coeffs {
            acc += c * &power;
            power *= &inv;
        }
        acc
    }
}

fn pow(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Expands `f` at infinity through `n^-order` by long division in `x = 1/n`.
pub fn laurent_at_infinity(f: &RatFunc, order: i64) -> Result<LaurentSeries> {
    let Some(deg) = f.degree() else {
        return Ok(LaurentSeries::zero(order));
    };
    let leading_order = -deg;
    if order < leading_order {
        return Err(Error::InvalidArgument(format!(
            "expansion order {order} is below the leading order {leading_order}"
        )));
    }
    // reversed coefficient lists are the power series in x
    let a: Vec<_> = f.num().coeffs().iter().rev().collect();
    let b: Vec<_> = f.den().coeffs().iter().rev().collect();
    let count = (order - leading_order + 1) as usize;
    let b0_inv = b[0].recip();
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(count);
    for j in 0..count {
        let mut c = a
            .get(j)
            .map(|&x| x.clone())
            .unwrap_or_else(BigRational::zero);
        for i in 1..=j.min(b.len() - 1) {
            c -= b[i] * &coeffs[j - i];
        }
        coeffs.push(c * &b0_inv);
    }
    Ok(LaurentSeries {
        leading_order,
        coeffs,
        truncation_order: order,
    })
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.leading_order + i as i64;
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            write!(f, "{}*n^{}", c.abs(), -e)?;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(n^{})", -(self.truncation_order + 1))
    }
}
