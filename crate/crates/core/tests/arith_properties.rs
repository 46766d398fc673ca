use num_traits::{Signed, Zero};
use proptest::prelude::*;

use weingarten::arith::{
    int, laurent_at_infinity, mat_inverse, mat_pseudo_inverse, rf_eval, rf_normalize, BigRational,
    Matrix, Poly, RatFunc,
};
use weingarten::json::{ratfunc_from_json, ratfunc_to_json};

fn poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 1..=max_degree + 1).prop_map(Poly::from_ints)
}

fn nonzero_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    poly(max_degree).prop_filter("nonzero", |p| !p.is_zero())
}

/// `c * prod (n - r)` over distinct small roots.
fn split_denominator() -> impl Strategy<Value = Poly> {
    (
        prop::collection::btree_set(-2i64..=2, 0..=3),
        prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
    )
        .prop_map(|(roots, c)| {
            roots
                .into_iter()
                .fold(Poly::from_ints([c]), |acc, r| &acc * &Poly::linear_root(r))
        })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(3), nonzero_poly(3)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn common_factors_cancel(p in nonzero_poly(2), q in poly(3), r in nonzero_poly(3)) {
        let lhs = rf_normalize(&p * &q, &p * &r).unwrap();
        let rhs = rf_normalize(q, r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip(f in ratfunc()) {
        prop_assert_eq!(ratfunc_from_json(&ratfunc_to_json(&f)).unwrap(), f);
    }

    /// The truncation error is at most twice the first nonzero omitted term.
    #[test]
    fn laurent_tail_bound(num in poly(3), den in split_denominator(), extra in 0i64..4, n0 in 10i64..40) {
        let f = RatFunc::new(num, den).unwrap();
        prop_assume!(!f.is_zero());
        let start = -f.degree().unwrap();
        let order = start + extra;
        let truncated = laurent_at_infinity(&f, order).unwrap();
        let long = laurent_at_infinity(&f, order + 30).unwrap();
        let omitted = (order + 1..=order + 30).find(|&j| !long.coeff(j).unwrap().is_zero());
        let x = int(n0);
        let error = (rf_eval(&f, &x).unwrap() - truncated.eval_truncated(&x)).abs();
        match omitted {
            Some(j) => {
                let power = num_traits::pow(x.clone(), j.unsigned_abs() as usize);
                let term = if j >= 0 { long.coeff(j).unwrap() / power } else { long.coeff(j).unwrap() * power };
                let first = term.abs();
                prop_assert!(error <= first * int(2), "error {} at n = {}", error, n0);
            }
            None => prop_assert!(error.is_zero()),
        }
    }

    #[test]
    fn inverse_round_trip(size in 1usize..=4, seed in prop::collection::vec(-3i64..=3, 48)) {
        let m = Matrix::from_fn(size, size, |i, j| {
            let at = 3 * (i * size + j);
            let base = if i == j { 1 } else { 0 };
            RatFunc::from_poly(Poly::from_ints([seed[at] + base, seed[at + 1], seed[at + 2] * i64::from(i == j)]))
        });
        if let Ok(inv) = mat_inverse(&m) {
            prop_assert_eq!(mat_inverse(&inv).unwrap(), m);
        }
    }

    #[test]
    fn penrose_identities(rows in 1usize..=5, rank in 1usize..=3, seed in prop::collection::vec(-4i64..=4, 15)) {
        let b = Matrix::from_fn(rows, rank, |i, j| int(seed[i * 3 + j]));
        let g = b.mul(&b.transpose()).unwrap();
        let w = mat_pseudo_inverse(&g).unwrap();
        let gw = g.mul(&w).unwrap();
        let wg = w.mul(&g).unwrap();
        prop_assert_eq!(&wg.mul(&w).unwrap(), &w);
        prop_assert_eq!(&gw.mul(&g).unwrap(), &g);
        prop_assert_eq!(&gw.transpose(), &gw);
        prop_assert_eq!(&wg.transpose(), &wg);
    }
}

#[test]
fn inverse_round_trip_size_six() {
    let m = Matrix::from_fn(6, 6, |i, j| {
        let r = (i * 7 + j * 3) as i64 % 5 - 2;
        if i == j {
            RatFunc::from_poly(Poly::from_ints([r, 1]))
        } else {
            RatFunc::constant(BigRational::from_integer(r.into()))
        }
    });
    let inv = mat_inverse(&m).unwrap();
    assert_eq!(mat_inverse(&inv).unwrap(), m);
}
