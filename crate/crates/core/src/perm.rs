//! Permutations of `[1, n]` in one-line notation and the reverse Bruhat order.
//!
//! The order used throughout is the *reverse* Bruhat order: the identity is
//! the minimum and the longest element `w0` the maximum. It is decided level
//! by level through [`leq_j`], comparing sorted prefix image sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A permutation of `[1, n]`, `n >= 1`, stored in one-line notation.
///
/// Position `i` (1-indexed) maps to `images[i - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation(images));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from a slice of images; panics on invalid input.
    /// Intended for literals in tests and examples.
    pub fn from_slice(images: &[usize]) -> Self {
        Self::new(images.to_vec()).expect("invalid permutation literal")
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation size must be at least 1");
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of position `i` (1-indexed).
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_same_size(self, other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&v| self.images[v - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v - 1] = k + 1;
        }
        Permutation { images }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.images;
        let mut count = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Sorted image set of the first `j` positions.
    pub fn sorted_prefix(&self, j: usize) -> Vec<usize> {
        let mut prefix = self.images[..j].to_vec();
        prefix.sort_unstable();
        prefix
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

/// A pair `w = (w+, w-)` of permutations of the same size.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairW {
    plus: Permutation,
    minus: Permutation,
}

impl PairW {
    pub fn new(plus: Permutation, minus: Permutation) -> Result<Self> {
        check_same_size(&plus, &minus)?;
        Ok(PairW { plus, minus })
    }

    pub fn plus(&self) -> &Permutation {
        &self.plus
    }

    pub fn minus(&self) -> &Permutation {
        &self.minus
    }
}

fn check_same_size(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

/// The longest element `w0 : i -> n + 1 - i`.
pub fn longest_element(n: usize) -> Permutation {
    assert!(n >= 1, "permutation size must be at least 1");
    Permutation {
        images: (1..=n).rev().collect(),
    }
}

/// `σ0` with `σ0(i) = p + i` for `i <= m` and `σ0(i) = i - m` otherwise; the
/// maximum of the restricted set `S`.
pub fn sigma_zero(m: usize, p: usize) -> Result<Permutation> {
    check_shape(m, p)?;
    let images = (1..=m).map(|i| p + i).chain(1..=p).collect();
    Ok(Permutation { images })
}

pub(crate) fn check_shape(m: usize, p: usize) -> Result<()> {
    if m < 2 || p < 2 {
        return Err(Error::InvalidShape { m, p });
    }
    Ok(())
}

fn dominated(lower: &[usize], upper: &[usize]) -> bool {
    lower.iter().zip(upper).all(|(a, b)| a <= b)
}

/// `a <=_j b`: the sorted images of `a([1, j])` are componentwise at most
/// those of `b([1, j])`.
pub fn leq_j(a: &Permutation, b: &Permutation, j: usize) -> Result<bool> {
    check_same_size(a, b)?;
    let max = a.n().saturating_sub(1);
    if j == 0 || j > max {
        return Err(Error::LevelOutOfRange { j, max });
    }
    Ok(dominated(&a.sorted_prefix(j), &b.sorted_prefix(j)))
}

/// Reverse Bruhat order: `a <= b` iff `a <=_j b` for every `j` in `[1, n-1]`.
///
/// The sorted prefixes are grown one insertion at a time, so a comparison
/// costs `O(n^2)`.
pub fn bruhat_leq(a: &Permutation, b: &Permutation) -> Result<bool> {
    check_same_size(a, b)?;
    let n = a.n();
    let mut pa: Vec<usize> = Vec::with_capacity(n);
    let mut pb: Vec<usize> = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        insert_sorted(&mut pa, a.images[k]);
        insert_sorted(&mut pb, b.images[k]);
        if !dominated(&pa, &pb) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    let pos = v.partition_point(|&y| y < x);
    v.insert(pos, x);
}

/// Displacement test `-p <= i - σ(i) <= m` for all `i`.
pub fn in_restricted(sigma: &Permutation, m: usize, p: usize) -> Result<bool> {
    if sigma.n() != m + p {
        return Err(Error::SizeMismatch {
            left: sigma.n(),
            right: m + p,
        });
    }
    Ok(sigma.images.iter().enumerate().all(|(k, &v)| {
        let d = (k + 1) as i64 - v as i64;
        -(p as i64) <= d && d <= m as i64
    }))
}

/// `w0 ∘ σ`, the order-reversing involution on `S_n`.
pub fn reverse_values(sigma: &Permutation) -> Permutation {
    let n = sigma.n();
    Permutation {
        images: sigma.images.iter().map(|&v| n + 1 - v).collect(),
    }
}
