//! The `(m,p)` deleting-derivations recursion at `q = 1`.
//!
//! Positions are compared with the `(m,p)` ordering `<=_m`: pairs with row
//! `<= m` come first, by decreasing column and then decreasing row; pairs with
//! row `> m` follow in lexicographic order. The step set is
//! `E = ([1,n]^2 ∪ {(n,n+1)}) \ {(m,n)}`, and the recursion runs from
//! `(n,n+1)` (the input matrix) down through `E`.
//!
//! Step `(j,β)` replaces `Y[i,α]` by `Y[i,α] - Y[i,β] Y[j,β]^-1 Y[j,α]` when
//! `j < i <= m` and `β < α`, or when `i < j`, `α < β` and `j > m`. At `q = 1`
//! the entries commute and the update runs over exact rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::perm::check_shape;
use crate::{Error, Result};

/// A matrix position `(row, col)`, 1-indexed; `(n, n+1)` marks the start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct StepIndex {
    pub row: usize,
    pub col: usize,
}

impl StepIndex {
    pub const fn new(row: usize, col: usize) -> Self {
        StepIndex { row, col }
    }
}

impl From<[usize; 2]> for StepIndex {
    fn from([row, col]: [usize; 2]) -> Self {
        StepIndex { row, col }
    }
}

impl From<StepIndex> for [usize; 2] {
    fn from(s: StepIndex) -> Self {
        [s.row, s.col]
    }
}

impl fmt::Display for StepIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// How the row condition of the `j <= m` branch is read.
///
/// `Inclusive` (`i <= m`) is the ordering used everywhere in this module.
/// `AsPrinted` (`i < m`) is kept for comparison only: under it, pairs in row
/// `m` are not even comparable to themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderingReading {
    #[default]
    Inclusive,
    AsPrinted,
}

pub fn mp_leq_with(a: StepIndex, b: StepIndex, m: usize, reading: OrderingReading) -> bool {
    let (i, alpha) = (a.row, a.col);
    let (j, beta) = (b.row, b.col);
    if j > m {
        i < j || (i == j && alpha <= beta)
    } else {
        let row_ok = match reading {
            OrderingReading::Inclusive => i <= m,
            OrderingReading::AsPrinted => i < m,
        };
        row_ok && (alpha > beta || (alpha == beta && i >= j))
    }
}

/// `a <=_m b`.
pub fn mp_leq(a: StepIndex, b: StepIndex, m: usize) -> bool {
    mp_leq_with(a, b, m, OrderingReading::Inclusive)
}

/// `a <_m b`.
pub fn mp_less(a: StepIndex, b: StepIndex, m: usize) -> bool {
    a != b && mp_leq(a, b, m)
}

pub fn mp_cmp(a: StepIndex, b: StepIndex, m: usize) -> Ordering {
    if a == b {
        Ordering::Equal
    } else if mp_leq(a, b, m) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn contains_e(s: StepIndex, m: usize, n: usize) -> bool {
    let square = (1..=n).contains(&s.row) && (1..=n).contains(&s.col);
    (square && s != StepIndex::new(m, n)) || s == StepIndex::new(n, n + 1)
}

/// `E` in increasing `<=_m` order: starts at `(m-1, n)` and ends at `(n, n+1)`.
pub fn enumerate_e(m: usize, p: usize) -> Result<Vec<StepIndex>> {
    check_shape(m, p)?;
    let n = m + p;
    let mut e: Vec<StepIndex> = (1..=n)
        .flat_map(|r| (1..=n).map(move |c| StepIndex::new(r, c)))
        .filter(|&s| s != StepIndex::new(m, n))
        .collect();
    e.push(StepIndex::new(n, n + 1));
    e.sort_by(|&a, &b| mp_cmp(a, b, m));
    Ok(e)
}

/// `r+`: the smallest element of `E` strictly above `r`. Defined for
/// `r ∈ [1,n]^2`; `None` for `(n, n+1)`.
pub fn successor(r: StepIndex, m: usize, p: usize) -> Result<Option<StepIndex>> {
    let n = m + p;
    let in_square = (1..=n).contains(&r.row) && (1..=n).contains(&r.col);
    if !in_square && r != StepIndex::new(n, n + 1) {
        return Err(Error::InvalidStep(r));
    }
    Ok(enumerate_e(m, p)?.into_iter().find(|&s| mp_less(r, s, m)))
}

/// Square matrix of exact rationals, 1-indexed accessors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n);
        for i in 1..=n {
            out.set(i, i, BigRational::one());
        }
        out
    }

    /// Panics unless `rows` is square.
    pub fn from_integers(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        RationalMatrix {
            n,
            entries: rows
                .iter()
                .flatten()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        }
    }

    /// Entries drawn uniformly from `[lo, hi]`.
    pub fn random_integer<R: Rng>(n: usize, lo: i64, hi: i64, rng: &mut R) -> Self {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect())
            .collect();
        Self::from_integers(&rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, alpha: usize) -> &BigRational {
        &self.entries[(i - 1) * self.n + (alpha - 1)]
    }

    pub fn set(&mut self, i: usize, alpha: usize, v: BigRational) {
        self.entries[(i - 1) * self.n + (alpha - 1)] = v;
    }

    pub fn diagonal_product(&self) -> BigRational {
        (1..=self.n).map(|i| self.get(i, i).clone()).product()
    }

    /// Determinant by Gaussian elimination with row exchanges.
    pub fn determinant(&self) -> BigRational {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (1..=n)
            .map(|i| (1..=n).map(|c| self.get(i, c).clone()).collect())
            .collect();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            let (top, rest) = a.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for row in rest.iter_mut().filter(|row| !row[col].is_zero()) {
                let f = &row[col] / &p;
                for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * y;
                }
            }
        }
        det
    }

    /// Rows of `"num/den"` strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (1..=self.n)
            .map(|i| {
                (1..=self.n)
                    .map(|c| {
                        let v = self.get(i, c);
                        format!("{}/{}", v.numer(), v.denom())
                    })
                    .collect()
            })
            .collect()
    }
}

fn check_run(y: &RationalMatrix, m: usize) -> Result<usize> {
    let n = y.n();
    if m < 2 || n < m + 2 {
        return Err(Error::InvalidMatrix { n, m });
    }
    Ok(n)
}

fn is_affected(i: usize, alpha: usize, pivot: StepIndex, m: usize) -> bool {
    let (j, beta) = (pivot.row, pivot.col);
    (j < i && i <= m && beta < alpha) || (i < j && alpha < beta && j > m)
}

/// Positions `(i, α)` rewritten by the step at `pivot`.
pub fn affected_positions(pivot: StepIndex, m: usize, n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| (1..=n).map(move |a| (i, a)))
        .filter(|&(i, a)| is_affected(i, a, pivot, m))
        .collect()
}

fn apply_step(
    y: &RationalMatrix,
    pivot: StepIndex,
    m: usize,
    inverse: bool,
) -> Result<RationalMatrix> {
    let n = check_run(y, m)?;
    if !contains_e(pivot, m, n) || pivot == StepIndex::new(n, n + 1) {
        return Err(Error::InvalidStep(pivot));
    }
    let targets = affected_positions(pivot, m, n);
    let piv = y.get(pivot.row, pivot.col);
    let products: Vec<((usize, usize), BigRational)> = targets
        .into_iter()
        .map(|(i, alpha)| ((i, alpha), y.get(i, pivot.col) * y.get(pivot.row, alpha)))
        .filter(|(_, prod)| !prod.is_zero())
        .collect();
    if products.is_empty() {
        return Ok(y.clone());
    }
    if piv.is_zero() {
        return Err(Error::ZeroPivot(pivot));
    }
    let piv_inv = piv.recip();
    let mut out = y.clone();
    for ((i, alpha), prod) in products {
        let correction = prod * &piv_inv;
        let v = if inverse {
            y.get(i, alpha) + correction
        } else {
            y.get(i, alpha) - correction
        };
        out.set(i, alpha, v);
    }
    Ok(out)
}

/// One step of the recursion, producing `Y^(r)` from `Y^(r+)`.
///
/// A zero pivot is only an error when some correction `Y[i,β] Y[j,α]` is
/// nonzero; otherwise the step leaves `Y` unchanged.
pub fn dd_step(y: &RationalMatrix, pivot: StepIndex, m: usize) -> Result<RationalMatrix> {
    apply_step(y, pivot, m, false)
}

/// Exact inverse of [`dd_step`]: the factors of each correction term sit in
/// the pivot row and column, which the step leaves untouched.
pub fn dd_inverse_step(y: &RationalMatrix, pivot: StepIndex, m: usize) -> Result<RationalMatrix> {
    apply_step(y, pivot, m, true)
}

fn steps_down_to(n: usize, m: usize, target: StepIndex) -> Result<Vec<StepIndex>> {
    if !contains_e(target, m, n) {
        return Err(Error::InvalidStep(target));
    }
    let e = enumerate_e(m, n - m)?;
    Ok(e.into_iter()
        .rev()
        .skip(1)
        .take_while(|&s| mp_leq(target, s, m))
        .collect())
}

/// One recorded state of a run: `matrix` is `Y^(step)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: StepIndex,
    pub matrix: RationalMatrix,
}

/// Runs every step from `(n,n)` down to `target` inclusive. A target of
/// `(n, n+1)` returns the input.
pub fn dd_run(y: &RationalMatrix, m: usize, target: StepIndex) -> Result<RationalMatrix> {
    let n = check_run(y, m)?;
    let mut cur = y.clone();
    for s in steps_down_to(n, m, target)? {
        cur = dd_step(&cur, s, m)?;
    }
    Ok(cur)
}

/// Like [`dd_run`], recording the input (at `(n, n+1)`) and every
/// intermediate state.
pub fn dd_run_traced(y: &RationalMatrix, m: usize, target: StepIndex) -> Result<Vec<TraceEntry>> {
    let n = check_run(y, m)?;
    let mut trace = vec![TraceEntry {
        step: StepIndex::new(n, n + 1),
        matrix: y.clone(),
    }];
    for s in steps_down_to(n, m, target)? {
        let next = dd_step(&trace.last().expect("nonempty").matrix, s, m)?;
        trace.push(TraceEntry {
            step: s,
            matrix: next,
        });
    }
    Ok(trace)
}

/// Undoes [`dd_run`] to `from`: inverse steps in increasing order from `from`
/// up to `(n,n)`.
pub fn dd_inverse_run(y: &RationalMatrix, m: usize, from: StepIndex) -> Result<RationalMatrix> {
    let n = check_run(y, m)?;
    let mut cur = y.clone();
    for s in steps_down_to(n, m, from)?.into_iter().rev() {
        cur = dd_inverse_step(&cur, s, m)?;
    }
    Ok(cur)
}
