//! Gram and Weingarten matrices and the integrals
//! `I(a) = ∫_{O_n} Π u_ij^{a_ij} du`.

mod algebra;
mod asymptotic;
mod closed_form;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::arith::{int, mat_inverse, mat_pseudo_inverse, BigRational, Field, Matrix, RatFunc};
use crate::error::{Error, Result};
use crate::pairings::{
    build_multi_indices, compatible_pairings, is_admissible, loops, pairings_cached,
    ExponentMatrix, Pairing, DEFAULT_PAIRING_LIMIT,
};

pub use algebra::TypeTable;
pub use asymptotic::{check_diagonal_bound, leading_term, DiagonalBound};
pub use closed_form::{closed_form_n2, closed_form_row, double_factorial};

/// Largest `k` for which dense `(2k-1)!! x (2k-1)!!` matrices are built.
pub const DENSE_K_LIMIT: usize = 5;

/// Size guards on `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub symbolic_k: usize,
    pub numeric_k: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            symbolic_k: 4,
            numeric_k: DEFAULT_PAIRING_LIMIT,
        }
    }
}

impl Limits {
    /// Defaults, with `WG_GUARD_K` overriding the symbolic guard.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(k) = std::env::var("WG_GUARD_K")
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            limits.symbolic_k = k;
            limits.numeric_k = limits.numeric_k.max(k);
        }
        limits
    }

    fn pairing_limit(&self) -> usize {
        self.symbolic_k.max(self.numeric_k)
    }
}

/// Symbolic in `n`, or exact at a fixed integer `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    Numeric(u64),
}

/// Which computation produced an [`IntegralResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    WeingartenSum,
    ClosedFormRow,
    ClosedFormN2,
    Zonal,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::WeingartenSum => "weingarten-sum",
            Backend::ClosedFormRow => "closed-form-row",
            Backend::ClosedFormN2 => "closed-form-n2",
            Backend::Zonal => "zonal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Symbolic(RatFunc),
    Numeric(BigRational),
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Symbolic(f) => f.is_zero(),
            Value::Numeric(x) => Zero::is_zero(x),
        }
    }

    pub fn symbolic(&self) -> Option<&RatFunc> {
        match self {
            Value::Symbolic(f) => Some(f),
            Value::Numeric(_) => None,
        }
    }

    pub fn numeric(&self) -> Option<&BigRational> {
        match self {
            Value::Numeric(x) => Some(x),
            Value::Symbolic(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralResult {
    pub value: Value,
    pub k: usize,
    pub admissible: bool,
    pub backend: Backend,
}

/// A Weingarten (or Gram) kernel stored by loop type.
#[derive(Clone, Debug)]
pub struct WeingartenMatrix<T> {
    table: Arc<TypeTable>,
    values: Vec<T>,
    singular: bool,
}

impl<T: Field> WeingartenMatrix<T> {
    pub fn k(&self) -> usize {
        self.table.k()
    }

    pub fn table(&self) -> &TypeTable {
        &self.table
    }

    /// Values indexed like [`TypeTable::types`].
    pub fn type_values(&self) -> &[T] {
        &self.values
    }

    /// True when the Gram matrix was singular and this is its pseudo-inverse.
    pub fn is_pseudo_inverse(&self) -> bool {
        self.singular
    }

    pub fn entry(&self, pi: &Pairing, sigma: &Pairing) -> Result<&T> {
        if pi.k() != self.k() || sigma.k() != self.k() {
            return Err(Error::PairingSizeMismatch {
                left: pi.k(),
                right: self.k(),
            });
        }
        Ok(&self.values[self.table.type_of(pi, sigma)])
    }

    /// Dense matrix over canonical pairing order.
    pub fn to_matrix(&self) -> Result<Matrix<T>> {
        dense_guard(self.k())?;
        Ok(self.table.expand(&self.values))
    }
}

fn dense_guard(k: usize) -> Result<()> {
    if k > DENSE_K_LIMIT {
        return Err(Error::PairingCountTooLarge {
            k,
            limit: DENSE_K_LIMIT,
        });
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    Ok(())
}

/// Dense symbolic Gram matrix `G(pi, sigma) = n^loops(pi, sigma)`.
pub fn gram_symbolic(k: usize) -> Result<Matrix<RatFunc>> {
    check_k(k)?;
    dense_guard(k)?;
    let p = pairings_cached(k, DENSE_K_LIMIT)?;
    Ok(Matrix::from_fn(p.len(), p.len(), |i, j| {
        RatFunc::var_pow(loops(&p[i], &p[j]).expect("same k"))
    }))
}

/// Dense Gram matrix at `n = n0`.
pub fn gram_numeric(k: usize, n0: u64) -> Result<Matrix<BigRational>> {
    check_k(k)?;
    dense_guard(k)?;
    let p = pairings_cached(k, DENSE_K_LIMIT)?;
    let base = int(n0 as i64);
    Ok(Matrix::from_fn(p.len(), p.len(), |i, j| {
        num_traits::pow(base.clone(), loops(&p[i], &p[j]).expect("same k"))
    }))
}

/// Direct route: invert the dense symbolic Gram matrix.
pub fn weingarten_dense_symbolic(k: usize) -> Result<Matrix<RatFunc>> {
    mat_inverse(&gram_symbolic(k)?)
}

/// Direct route at `n = n0`: exact inverse, or pseudo-inverse when singular.
pub fn weingarten_dense_numeric(k: usize, n0: u64) -> Result<Matrix<BigRational>> {
    let g = gram_numeric(k, n0)?;
    match mat_inverse(&g) {
        Err(Error::Singular { .. }) => mat_pseudo_inverse(&g),
        other => other,
    }
}

/// Gram kernel by loop type; `n^(number of loops)`.
fn gram_kernel<T: Field>(table: &TypeTable, n_pow: impl Fn(usize) -> T) -> Vec<T> {
    table.types().iter().map(|t| n_pow(t.len())).collect()
}

/// Symbolic Weingarten matrix, memoized per `k`.
pub fn weingarten_symbolic(k: usize, limits: &Limits) -> Result<Arc<WeingartenMatrix<RatFunc>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<WeingartenMatrix<RatFunc>>>>> = OnceLock::new();
    check_k(k)?;
    if k > limits.symbolic_k {
        return Err(Error::SymbolicGuard {
            k,
            limit: limits.symbolic_k,
        });
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("weingarten cache").get(&k) {
        return Ok(hit.clone());
    }
    let table = TypeTable::cached(k, limits.pairing_limit())?;
    let gram = gram_kernel(&table, RatFunc::var_pow);
    let values = table.inverse(&gram)?;
    let w = Arc::new(WeingartenMatrix {
        table,
        values,
        singular: false,
    });
    Ok(cache
        .lock()
        .expect("weingarten cache")
        .entry(k)
        .or_insert(w)
        .clone())
}

/// Weingarten matrix at `n = n0`: the inverse of the Gram matrix when it is
/// nonsingular, its Moore–Penrose pseudo-inverse otherwise.
pub fn weingarten_numeric(
    k: usize,
    n0: u64,
    limits: &Limits,
) -> Result<WeingartenMatrix<BigRational>> {
    check_k(k)?;
    if n0 == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if k > limits.pairing_limit() {
        return Err(Error::PairingCountTooLarge {
            k,
            limit: limits.pairing_limit(),
        });
    }
    let table = TypeTable::cached(k, limits.pairing_limit())?;
    let base = int(n0 as i64);
    let gram = gram_kernel(&table, |e| num_traits::pow(base.clone(), e));
    let (values, singular) = table.pseudo_inverse(&gram)?;
    Ok(WeingartenMatrix {
        table,
        values,
        singular,
    })
}

/// Knobs for [`integral_with`].
#[derive(Clone, Copy, Debug)]
pub struct IntegralOptions {
    pub limits: Limits,
    /// Return zero for non-admissible `a` without evaluating the sum.
    pub short_circuit: bool,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions {
            limits: Limits::from_env(),
            short_circuit: true,
        }
    }
}

fn zero_result(k: usize, admissible: bool, mode: Mode) -> IntegralResult {
    let value = match mode {
        Mode::Symbolic => Value::Symbolic(RatFunc::zero()),
        Mode::Numeric(_) => Value::Numeric(<BigRational as Zero>::zero()),
    };
    IntegralResult {
        value,
        k,
        admissible,
        backend: Backend::WeingartenSum,
    }
}

/// `I(a)` by the compact Weingarten formula.
pub fn integral(a: &ExponentMatrix, mode: Mode) -> Result<IntegralResult> {
    integral_with(a, mode, &IntegralOptions::default())
}

pub fn integral_with(
    a: &ExponentMatrix,
    mode: Mode,
    opts: &IntegralOptions,
) -> Result<IntegralResult> {
    if let Mode::Numeric(n0) = mode {
        let need = a.p().max(a.q()) as u64;
        if n0 < need {
            return Err(Error::InvalidArgument(format!(
                "n = {n0} is smaller than the matrix dimensions (needs n >= {need})"
            )));
        }
    }
    let total = a.total();
    let admissible = is_admissible(a);
    let k = (total / 2) as usize;
    if total % 2 == 1 {
        return Ok(zero_result(k, false, mode));
    }
    if !admissible && opts.short_circuit {
        return Ok(zero_result(k, false, mode));
    }
    if k == 0 {
        let value = match mode {
            Mode::Symbolic => Value::Symbolic(RatFunc::one()),
            Mode::Numeric(_) => Value::Numeric(<BigRational as One>::one()),
        };
        return Ok(IntegralResult {
            value,
            k,
            admissible,
            backend: Backend::WeingartenSum,
        });
    }
    let value = match mode {
        Mode::Symbolic => {
            let w = weingarten_symbolic(k, &opts.limits)?;
            Value::Symbolic(weighted_sum(a, &w)?)
        }
        Mode::Numeric(n0) => {
            let w = weingarten_numeric(k, n0, &opts.limits)?;
            Value::Numeric(weighted_sum(a, &w)?)
        }
    };
    Ok(IntegralResult {
        value,
        k,
        admissible,
        backend: Backend::WeingartenSum,
    })
}

/// `sum_{pi, sigma} delta_pi(a_l) delta_sigma(a_r) W(pi, sigma)`, grouped by
/// the loop type of `(pi, sigma)`.
fn weighted_sum<T: Field>(a: &ExponentMatrix, w: &WeingartenMatrix<T>) -> Result<T> {
    let counts = compatible_type_counts(a, w.table())?;
    Ok(counts
        .iter()
        .zip(w.type_values())
        .filter(|(&c, _)| c > 0)
        .fold(T::zero(), |acc, (&c, v)| acc.add(&v.mul(&T::from_u64(c)))))
}

/// For each loop type, the number of pairs `(pi, sigma)` with
/// `delta_pi(a_l) = delta_sigma(a_r) = 1` of that type.
pub fn compatible_type_counts(a: &ExponentMatrix, table: &TypeTable) -> Result<Vec<u64>> {
    let (left, right) = build_multi_indices(a)?;
    let lefts = compatible_pairings(&left);
    let rights = compatible_pairings(&right);
    let p = table.len();
    let count_chunk = |chunk: &[Pairing]| {
        let mut counts = vec![0u64; p];
        for pi in chunk {
            for sigma in &rights {
                counts[table.type_of(pi, sigma)] += 1;
            }
        }
        counts
    };
    let work = lefts.len() * rights.len();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    if work < 200_000 || workers == 1 {
        return Ok(count_chunk(&lefts));
    }
    let chunk_len = lefts.len().div_ceil(workers).max(1);
    let partials: Vec<Vec<u64>> = std::thread::scope(|s| {
        let handles: Vec<_> = lefts
            .chunks(chunk_len)
            .map(|chunk| s.spawn(move || count_chunk(chunk)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker"))
            .collect()
    });
    Ok(partials.iter().fold(vec![0u64; p], |mut acc, part| {
        acc.iter_mut().zip(part).for_each(|(x, y)| *x += y);
        acc
    }))
}
