//! Exact counting formulas.
//!
//! Everything is computed with arbitrary-precision integers. Alternating sums
//! are accumulated as [`BigInt`] and converted to a [`BigCount`] at the end,
//! asserting the result is nonnegative.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::perm::check_shape;
use crate::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type BigCount = BigUint;

/// Triangular table of Stirling numbers of the second kind, grown on demand
/// by `S(l+1, k) = k S(l, k) + S(l, k-1)`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl Default for StirlingTable {
    fn default() -> Self {
        StirlingTable {
            rows: vec![vec![BigUint::one()]],
        }
    }
}

impl StirlingTable {
    pub fn new() -> Self {
        Self::default()
    }

    fn grow_to(&mut self, l: usize) {
        while self.rows.len() <= l {
            let prev = self.rows.last().expect("table has row 0");
            let next_l = self.rows.len();
            let mut row = vec![BigUint::zero(); next_l + 1];
            for k in 1..=next_l {
                let stay = if k < prev.len() {
                    &prev[k] * BigUint::from(k)
                } else {
                    BigUint::zero()
                };
                row[k] = stay + &prev[k - 1];
            }
            self.rows.push(row);
        }
    }

    pub fn get(&mut self, l: usize, k: usize) -> BigUint {
        if k > l {
            return BigUint::zero();
        }
        self.grow_to(l);
        self.rows[l][k].clone()
    }
}

/// Stirling number of the second kind `S(l, k)`.
pub fn stirling2(l: usize, k: usize) -> BigCount {
    StirlingTable::new().get(l, k)
}

/// Binomial coefficient from a row of Pascal's triangle.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row.swap_remove(k)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn pow(base: usize, exp: usize) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

fn signed(u: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, u)
}

fn alternate(odd: bool, x: BigInt) -> BigInt {
    if odd {
        -x
    } else {
        x
    }
}

fn into_count(x: BigInt, what: &str) -> BigCount {
    x.to_biguint()
        .unwrap_or_else(|| panic!("{what}: signed sum produced a negative count"))
}

/// Poly-Bernoulli number `B_p^(-m) = (-1)^p Σ_{i=0}^{p} (-1)^i i! (i+1)^m S(p, i)`.
pub fn poly_bernoulli_neg(p: usize, m: usize) -> BigCount {
    let mut table = StirlingTable::new();
    let mut sum = BigInt::zero();
    for i in 0..=p {
        let term = signed(factorial(i) * table.get(p, i)) * pow(i + 1, m);
        sum += alternate(i % 2 == 1, term);
    }
    into_count(alternate(p % 2 == 1, sum), "poly_bernoulli_neg")
}

/// Vesztergombi's count of `{σ : -p <= i - σ(i) <= m}`.
///
/// Evaluates both the binomial form
/// `2! Σ_{i=0}^{p-1} (-1)^{p-1+i} i! C(2+i, i) (2+i)^{m-1} S(p, i+1)`
/// and the simplified form `Σ_{i=0}^{p-1} (-1)^{p-1+i} (i+1)! (2+i)^m S(p, i+1)`
/// and returns their common value.
pub fn vesztergombi_count(m: usize, p: usize) -> Result<BigCount> {
    check_shape(m, p)?;
    let mut table = StirlingTable::new();
    let mut binomial_form = BigInt::zero();
    let mut factorial_form = BigInt::zero();
    for i in 0..p {
        let s = table.get(p, i + 1);
        let odd = (p - 1 + i) % 2 == 1;
        let a = signed(BigUint::from(2u32) * factorial(i) * binomial(2 + i, i) * &s)
            * pow(2 + i, m - 1);
        let b = signed(factorial(i + 1) * &s) * pow(2 + i, m);
        binomial_form += alternate(odd, a);
        factorial_form += alternate(odd, b);
    }
    if binomial_form != factorial_form {
        return Err(Error::CountInconsistency {
            what: "vesztergombi_count",
            left: binomial_form.to_string(),
            right: factorial_form.to_string(),
        });
    }
    Ok(into_count(binomial_form, "vesztergombi_count"))
}

/// `(-1)^{p-1} Σ_{k=2}^{p+1} k^m Σ_{j=1}^{k-1} (-1)^{j-1} C(k-1, j) j^p`, the
/// number of H-invariant primes of quantum `m x p` matrices.
pub fn hspec_count(m: usize, p: usize) -> Result<BigCount> {
    check_shape(m, p)?;
    let mut outer = BigInt::zero();
    for k in 2..=p + 1 {
        let mut inner = BigInt::zero();
        for j in 1..k {
            let term = signed(binomial(k - 1, j)) * pow(j, p);
            inner += alternate((j - 1) % 2 == 1, term);
        }
        outer += pow(k, m) * inner;
    }
    Ok(into_count(
        alternate((p - 1) % 2 == 1, outer),
        "hspec_count",
    ))
}

/// Number of rank `r` H-primes in quantum `m x m` matrices, `(r! S(m+1, r+1))^2`.
pub fn rank_count(m: usize, r: usize) -> Result<BigCount> {
    if r > m {
        return Err(Error::OutOfRange {
            what: "rank",
            value: r,
            max: m,
        });
    }
    let root = factorial(r) * stirling2(m + 1, r + 1);
    Ok(&root * &root)
}

/// `u(m, t)` from `u(m, t) = (m - t + 1) u(m-1, t-1) + u(m-1, t)` with
/// `u(m, 0) = 1` and `u(m, t) = 0` for `t > m`.
pub fn u_helper(m: usize, t: usize) -> Result<BigCount> {
    if t > m {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            max: m,
        });
    }
    // memo[mm][tt] for mm <= m, tt <= t
    let mut memo = vec![vec![BigUint::zero(); t + 1]; m + 1];
    for mm in 0..=m {
        memo[mm][0] = BigUint::one();
        for tt in 1..=t.min(mm) {
            let carry = BigUint::from(mm - tt + 1) * &memo[mm - 1][tt - 1];
            memo[mm][tt] = carry + &memo[mm - 1][tt];
        }
    }
    Ok(memo[m][t].clone())
}
