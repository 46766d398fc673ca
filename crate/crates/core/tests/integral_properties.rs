use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weingarten::arith::{BigRational, Matrix, RatFunc};
use weingarten::montecarlo::{mc_integral, HaarSampleConfig};
use weingarten::pairings::{
    build_multi_indices, delta, enumerate_pairings, loops, ExponentMatrix, MultiIndex, Pairing,
};
use weingarten::selftest::random_admissible;
use weingarten::weingarten::{
    closed_form_row, double_factorial, gram_numeric, integral, weingarten_dense_numeric,
    weingarten_numeric, Limits, Mode,
};

fn symbolic(a: &ExponentMatrix) -> RatFunc {
    integral(a, Mode::Symbolic)
        .unwrap()
        .value
        .symbolic()
        .unwrap()
        .clone()
}

fn numeric(a: &ExponentMatrix, n0: u64) -> BigRational {
    integral(a, Mode::Numeric(n0))
        .unwrap()
        .value
        .numeric()
        .unwrap()
        .clone()
}

fn admissible() -> impl Strategy<Value = ExponentMatrix> {
    (1usize..=3, 1usize..=3, 1usize..=3, any::<u64>()).prop_map(|(k, p, q, seed)| {
        random_admissible(&mut ChaCha8Rng::seed_from_u64(seed), k, p, q)
    })
}

fn exponent_matrix() -> impl Strategy<Value = ExponentMatrix> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(p, q)| prop::collection::vec(0u64..=3, p * q).prop_map(move |v| (p, q, v)))
        .prop_map(|(p, q, v)| ExponentMatrix::from_fn(p, q, |i, j| v[i * q + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn haar_symmetries(a in admissible(), seed in any::<u64>()) {
        let base = symbolic(&a);
        prop_assert_eq!(symbolic(&a.transpose()), base.clone());
        let mut rows: Vec<usize> = (0..a.p()).collect();
        let mut cols: Vec<usize> = (0..a.q()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(rows.as_mut_slice(), &mut rng);
        rand::seq::SliceRandom::shuffle(cols.as_mut_slice(), &mut rng);
        prop_assert_eq!(symbolic(&a.permute_rows(&rows)), base.clone());
        prop_assert_eq!(symbolic(&a.permute_cols(&cols)), base);
    }

    #[test]
    fn orthogonality_sum_rule(a in admissible(), extra in 0usize..=2) {
        let n0 = a.p().max(a.q()).max(2) + extra;
        let wide = ExponentMatrix::from_fn(a.p(), n0, |i, j| if j < a.q() { a.get(i, j) } else { 0 });
        let total = (0..n0).fold(BigRational::zero(), |acc, j| acc + numeric(&wide.with_added(0, j, 2), n0 as u64));
        prop_assert_eq!(total, numeric(&wide, n0 as u64));
    }

    #[test]
    fn multi_indices_swap_under_transpose(a in exponent_matrix()) {
        prop_assume!(a.total() % 2 == 0);
        let (l, r) = build_multi_indices(&a).unwrap();
        let (lt, rt) = build_multi_indices(&a.transpose()).unwrap();
        prop_assert_eq!(sorted_pairs(&l, &r), sorted_pairs(&rt, &lt));
    }

    #[test]
    fn odd_total_vanishes(a in exponent_matrix()) {
        prop_assume!(a.total() % 2 == 1);
        prop_assert!(integral(&a, Mode::Symbolic).unwrap().value.is_zero());
    }

    #[test]
    fn single_row_matches_closed_form(v in prop::collection::vec(0u64..=4, 1..=3)) {
        prop_assume!(v.iter().sum::<u64>() <= 8);
        let a = ExponentMatrix::new(vec![v]).unwrap();
        let expected = closed_form_row(&a).unwrap().value;
        prop_assert_eq!(expected.symbolic().unwrap(), &symbolic(&a));
    }
}

/// The multiset of `(row, column)` pairs described by the two index lists.
fn sorted_pairs(l: &MultiIndex, r: &MultiIndex) -> Vec<(usize, usize)> {
    let mut pairs: Vec<_> = l.0.iter().copied().zip(r.0.iter().copied()).collect();
    pairs.sort_unstable();
    pairs
}

#[test]
fn pairing_counts() {
    for k in 1..=6 {
        let expected = double_factorial(2 * k as u64);
        assert_eq!(
            enumerate_pairings(k).unwrap().len().to_string(),
            expected.to_string()
        );
    }
}

#[test]
fn loops_symmetric_and_maximal_only_on_diagonal() {
    for k in 1..=4 {
        let all = enumerate_pairings(k).unwrap();
        for pi in &all {
            for sigma in &all {
                let l = loops(pi, sigma).unwrap();
                assert_eq!(l, loops(sigma, pi).unwrap());
                assert_eq!(l == k, pi == sigma);
            }
        }
    }
}

#[test]
fn delta_counts_single_block() {
    for m in 1..=4usize {
        let a = ExponentMatrix::new(vec![vec![2 * m as u64]]).unwrap();
        let (left, _) = build_multi_indices(&a).unwrap();
        let count = enumerate_pairings(m)
            .unwrap()
            .iter()
            .filter(|pi| delta(pi, &left).unwrap())
            .count();
        assert_eq!(
            count.to_string(),
            double_factorial(2 * m as u64).to_string()
        );
    }
}

fn penrose(g: &Matrix<BigRational>, w: &Matrix<BigRational>) {
    let gw = g.mul(w).unwrap();
    let wg = w.mul(g).unwrap();
    assert_eq!(&wg.mul(w).unwrap(), w);
    assert_eq!(&gw.mul(g).unwrap(), g);
    assert_eq!(gw.transpose(), gw);
    assert_eq!(wg.transpose(), wg);
}

#[test]
fn weingarten_pseudo_inverses_satisfy_penrose() {
    let limits = Limits::from_env();
    for k in 2..=3 {
        for n0 in 1..k as u64 {
            let g = gram_numeric(k, n0).unwrap();
            let w = weingarten_numeric(k, n0, &limits).unwrap();
            assert!(w.is_pseudo_inverse());
            penrose(&g, &w.to_matrix().unwrap());
            penrose(&g, &weingarten_dense_numeric(k, n0).unwrap());
        }
    }
    let g = gram_numeric(4, 2).unwrap();
    penrose(
        &g,
        &weingarten_numeric(4, 2, &limits)
            .unwrap()
            .to_matrix()
            .unwrap(),
    );
}

#[test]
fn worker_counts_agree_statistically() {
    let a = ExponentMatrix::new(vec![vec![2, 2], vec![0, 2]]).unwrap();
    let one = mc_integral(&a, &HaarSampleConfig::new(3, 40_000, 4)).unwrap();
    let four = mc_integral(&a, &HaarSampleConfig::new(3, 40_000, 4).with_workers(4)).unwrap();
    let spread = (one.std_error.powi(2) + four.std_error.powi(2)).sqrt();
    assert!((one.mean - four.mean).abs() <= 5.0 * spread);
    let exact: f64 = num_traits::ToPrimitive::to_f64(&numeric(&a, 3)).unwrap();
    assert!(one.within(exact, 5.0) && four.within(exact, 5.0));
}

#[test]
fn pseudo_inverse_moments_match_sampling_below_k() {
    // k = 4 at n = 3, where the Gram matrix is singular
    let cases = [
        vec![vec![2, 2, 0], vec![2, 0, 2], vec![0, 0, 0]],
        vec![vec![4, 2, 0], vec![0, 2, 0], vec![0, 0, 0]],
        vec![vec![2, 2, 2], vec![0, 0, 2], vec![0, 0, 0]],
    ];
    for (seed, rows) in cases.into_iter().enumerate() {
        let a = ExponentMatrix::new(rows).unwrap();
        let exact: f64 = num_traits::ToPrimitive::to_f64(&numeric(&a, 3)).unwrap();
        let est = mc_integral(&a, &HaarSampleConfig::new(3, 200_000, 70 + seed as u64)).unwrap();
        assert!(est.within(exact, 5.0), "{a}: {} vs {exact}", est.mean);
    }
}

#[test]
fn base_pairing_is_first() {
    assert_eq!(enumerate_pairings(3).unwrap()[0], Pairing::base(3));
}
