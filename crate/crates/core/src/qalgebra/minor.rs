use itertools::Itertools;

use super::laurent::LaurentQ;
use super::poly::{Generator, QPoly, QuantumMatrixAlgebra};
use crate::{Error, Result};

/// Row and column index sets of a quantum minor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn strictly_increasing(v: &[usize]) -> bool {
    v.first().is_none_or(|&x| x >= 1) && v.windows(2).all(|w| w[0] < w[1])
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::InvalidMinor("empty row or column set".into()));
        }
        if rows.len() != cols.len() {
            return Err(Error::InvalidMinor(format!(
                "{} rows but {} columns",
                rows.len(),
                cols.len()
            )));
        }
        if !strictly_increasing(&rows) || !strictly_increasing(&cols) {
            return Err(Error::InvalidMinor(format!(
                "indices must be strictly increasing and positive: rows {rows:?}, cols {cols:?}"
            )));
        }
        Ok(MinorSpec { rows, cols })
    }

    /// The full `n x n` minor.
    pub fn full(n: usize) -> Self {
        MinorSpec {
            rows: (1..=n).collect(),
            cols: (1..=n).collect(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// The minor with row `rows[r]` and column `cols[c]` removed, or `None`
    /// for a 1x1 minor.
    pub fn without(&self, r: usize, c: usize) -> Option<MinorSpec> {
        if self.size() == 1 {
            return None;
        }
        let mut rows = self.rows.clone();
        let mut cols = self.cols.clone();
        rows.remove(r);
        cols.remove(c);
        Some(MinorSpec { rows, cols })
    }
}

fn inversions(perm: &[usize]) -> usize {
    (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count()
}

/// `Σ_{σ ∈ S_t} (-q)^{l(σ)} Z(i_1, α_σ(1)) ... Z(i_t, α_σ(t))`, normalized.
pub fn quantum_minor(alg: &QuantumMatrixAlgebra, spec: &MinorSpec) -> Result<QPoly> {
    if spec.rows.last().is_some_and(|&r| r > alg.rows())
        || spec.cols.last().is_some_and(|&c| c > alg.cols())
    {
        return Err(Error::InvalidMinor(format!(
            "rows {:?} / cols {:?} outside a {}x{} algebra",
            spec.rows,
            spec.cols,
            alg.rows(),
            alg.cols()
        )));
    }
    let t = spec.size();
    let mut out = QPoly::zero(*alg);
    for perm in (0..t).permutations(t) {
        let l = inversions(&perm);
        let sign = if l.is_multiple_of(2) { 1 } else { -1 };
        let coeff = LaurentQ::monomial(sign, l as i32);
        let word: Vec<Generator> = perm
            .iter()
            .enumerate()
            .map(|(k, &s)| Generator::new(spec.rows[k], spec.cols[s]))
            .collect();
        out = out.add(&alg.normalize(&word, coeff)?)?;
    }
    Ok(out)
}

/// The quantum determinant of a square algebra.
pub fn quantum_det(alg: &QuantumMatrixAlgebra) -> Result<QPoly> {
    if alg.rows() != alg.cols() {
        return Err(Error::InvalidMinor(format!(
            "quantum determinant needs a square algebra, got {}x{}",
            alg.rows(),
            alg.cols()
        )));
    }
    quantum_minor(alg, &MinorSpec::full(alg.rows()))
}
