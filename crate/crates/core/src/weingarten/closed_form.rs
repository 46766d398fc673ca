//! Closed forms for single-row exponent matrices and for `n = 2`.

use num_bigint::BigInt;
use num_traits::One;

use super::{Backend, IntegralResult, Value};
use crate::arith::{BigRational, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::pairings::ExponentMatrix;

/// `x!! = (x-1)(x-3)(x-5)...`, ending at 1 or 2; the empty product for
/// `x <= 1`. With this convention `(2k)!!` counts the pairings of `2k`
/// points.
pub fn double_factorial(x: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut f = x.saturating_sub(1);
    while f >= 2 {
        acc *= f;
        f -= 2;
    }
    acc
}

/// `I(a_1 ... a_q) = eps (n-1)!! a_1!! ... a_q!! / (n + sum a_i - 1)!!`,
/// with the ratio of symbolic double factorials telescoped to
/// `1 / (n (n+2) ... (n + 2m - 2))` for `sum a_i = 2m`.
pub fn closed_form_row(a: &ExponentMatrix) -> Result<IntegralResult> {
    if a.p() != 1 {
        return Err(Error::InvalidArgument(format!(
            "single-row closed form needs p = 1, got p = {}",
            a.p()
        )));
    }
    let entries = &a.rows()[0];
    let m = a.total() / 2;
    let backend = Backend::ClosedFormRow;
    if entries.iter().any(|x| x % 2 == 1) {
        return Ok(IntegralResult {
            value: Value::Symbolic(RatFunc::zero()),
            k: m as usize,
            admissible: false,
            backend,
        });
    }
    let numerator: BigInt = entries.iter().map(|&x| double_factorial(x)).product();
    let denominator = (0..m).fold(Poly::one(), |acc, j| {
        &acc * &Poly::linear_root(-2 * j as i64)
    });
    let value = RatFunc::new(
        Poly::constant(BigRational::from_integer(numerator)),
        denominator,
    )?;
    Ok(IntegralResult {
        value: Value::Symbolic(value),
        k: m as usize,
        admissible: true,
        backend,
    })
}

/// `I([[a, b], [c, d]])` at `n = 2`:
/// `eps (a+d)!! (b+c)!! / (a+b+c+d+1)!!`, with `eps = 1` if all entries are
/// even, `-1` if all are odd, `0` otherwise.
pub fn closed_form_n2(a: &ExponentMatrix) -> Result<BigRational> {
    if a.p() != 2 || a.q() != 2 {
        return Err(Error::InvalidArgument(format!(
            "n = 2 closed form needs a 2x2 matrix, got {}x{}",
            a.p(),
            a.q()
        )));
    }
    let [x, y, z, w] = [a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1)];
    let odd = [x, y, z, w].iter().filter(|v| *v % 2 == 1).count();
    let sign = match odd {
        0 => 1,
        4 => -1,
        _ => return Ok(BigRational::from_integer(0.into())),
    };
    let num = double_factorial(x + w) * double_factorial(y + z) * sign;
    Ok(BigRational::new(num, double_factorial(x + y + z + w + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn em(rows: &[&[u64]]) -> ExponentMatrix {
        ExponentMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn double_factorial_values() {
        let got: Vec<BigInt> = [0, 1, 2, 3, 4, 5, 6]
            .iter()
            .map(|&x| double_factorial(x))
            .collect();
        let want: Vec<BigInt> = [1, 1, 1, 2, 3, 8, 15]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn row_examples() {
        let v = |rows: &[&[u64]]| {
            closed_form_row(&em(rows))
                .unwrap()
                .value
                .symbolic()
                .unwrap()
                .clone()
        };
        assert_eq!(v(&[&[2, 2]]).to_string(), "1/(n^2 + 2*n)");
        assert_eq!(v(&[&[4]]).to_string(), "3/(n^2 + 2*n)");
        assert!(v(&[&[1, 2]]).is_zero());
        assert_eq!(v(&[&[0, 0]]), RatFunc::one());
        assert!(closed_form_row(&em(&[&[2], &[2]])).is_err());
    }

    #[test]
    fn n2_examples() {
        assert_eq!(closed_form_n2(&em(&[&[1, 1], &[1, 1]])).unwrap(), q(-1, 8));
        assert_eq!(closed_form_n2(&em(&[&[2, 0], &[0, 2]])).unwrap(), q(3, 8));
        assert_eq!(closed_form_n2(&em(&[&[1, 0], &[0, 1]])).unwrap(), q(0, 1));
        assert_eq!(closed_form_n2(&em(&[&[0, 0], &[0, 0]])).unwrap(), q(1, 1));
        assert!(closed_form_n2(&em(&[&[2, 2]])).is_err());
    }

    #[test]
    fn n2_matches_trigonometric_quadrature() {
        // O_2 = rotations and reflections; both components give
        // u = [[cos t, -+sin t], [sin t, +-cos t]]. Average numerically.
        let steps = 4096;
        for rows in [
            [[1u64, 1], [1, 1]],
            [[2, 0], [0, 2]],
            [[3, 1], [1, 1]],
            [[2, 2], [0, 0]],
        ] {
            let a = em(&[&rows[0], &rows[1]]);
            let mut acc = 0.0;
            for s in 0..steps {
                let t = 2.0 * std::f64::consts::PI * (s as f64 + 0.5) / steps as f64;
                let (c, sn) = (t.cos(), t.sin());
                for u in [[[c, -sn], [sn, c]], [[c, sn], [sn, -c]]] {
                    let mut prod = 1.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            prod *= u[i][j].powi(a.get(i, j) as i32);
                        }
                    }
                    acc += prod;
                }
            }
            let mean = acc / (2 * steps) as f64;
            let exact = closed_form_n2(&a).unwrap();
            let exact = exact.numer().to_string().parse::<f64>().unwrap()
                / exact.denom().to_string().parse::<f64>().unwrap();
            assert!((mean - exact).abs() < 1e-12, "{a}: {mean} vs {exact}");
        }
    }
}
