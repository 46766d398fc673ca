//! Exact scalars, polynomials and rational functions in `n`, Laurent
//! expansion at infinity, and exact linear algebra.

mod laurent;
mod matrix;
mod poly;
mod ratfunc;

pub use laurent::{laurent_at_infinity, LaurentSeries};
pub use matrix::{mat_inverse, mat_pseudo_inverse, Field, Matrix};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::Poly;
pub use ratfunc::RatFunc;

/// Canonicalizes `num / den`.
pub fn rf_normalize(num: Poly, den: Poly) -> crate::Result<RatFunc> {
    RatFunc::new(num, den)
}

/// Exact value of `f` at `n0`.
pub fn rf_eval(f: &RatFunc, n0: &BigRational) -> crate::Result<BigRational> {
    f.eval(n0)
}

pub fn int(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}
