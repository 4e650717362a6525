use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::laurent::LaurentQ;
use crate::{Error, Result};

/// A generator `Z(row, col)`, 1-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub row: usize,
    pub col: usize,
}

impl Generator {
    pub fn new(row: usize, col: usize) -> Self {
        Generator { row, col }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z({},{})", self.row, self.col)
    }
}

/// The quantized coordinate ring of `rows x cols` matrices.
///
/// Generators are indexed in lexicographic `(row, col)` order, which is also
/// the PBW order of normal-form monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumMatrixAlgebra {
    rows: usize,
    cols: usize,
}

/// Which adjacent out-of-order pair gets rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftToRight,
    RightToLeft,
}

impl QuantumMatrixAlgebra {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(
            rows >= 1 && cols >= 1,
            "algebra dimensions must be positive"
        );
        QuantumMatrixAlgebra { rows, cols }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn num_generators(&self) -> usize {
        self.rows * self.cols
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (1..=self.rows).flat_map(move |r| (1..=self.cols).map(move |c| Generator::new(r, c)))
    }

    fn index(&self, g: Generator) -> Result<usize> {
        if g.row == 0 || g.col == 0 || g.row > self.rows || g.col > self.cols {
            return Err(Error::InvalidGenerator {
                row: g.row,
                col: g.col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((g.row - 1) * self.cols + (g.col - 1))
    }

    fn generator_at(&self, idx: usize) -> Generator {
        Generator::new(idx / self.cols + 1, idx % self.cols + 1)
    }

    /// Straightens `coeff * word` into PBW normal form, rewriting the leftmost
    /// out-of-order pair first.
    pub fn normalize(&self, word: &[Generator], coeff: LaurentQ) -> Result<QPoly> {
        self.normalize_with(word, coeff, Strategy::LeftToRight)
    }

    pub fn normalize_with(
        &self,
        word: &[Generator],
        coeff: LaurentQ,
        strategy: Strategy,
    ) -> Result<QPoly> {
        let idx = word
            .iter()
            .map(|&g| self.index(g))
            .collect::<Result<Vec<_>>>()?;
        let mut pending = BTreeMap::new();
        pending.insert(idx, coeff);
        Ok(self.straighten(pending, strategy))
    }

    /// Rewrites until every word is sorted. Each rule application replaces a
    /// word by lexicographically smaller words of the same length, so the
    /// loop terminates.
    fn straighten(&self, mut pending: BTreeMap<Vec<usize>, LaurentQ>, strategy: Strategy) -> QPoly {
        let mut out = QPoly::zero(*self);
        while let Some((mut word, coeff)) = pending.pop_last() {
            if coeff.is_zero() {
                continue;
            }
            let descent = match strategy {
                Strategy::LeftToRight => {
                    (0..word.len().saturating_sub(1)).find(|&k| word[k] > word[k + 1])
                }
                Strategy::RightToLeft => (0..word.len().saturating_sub(1))
                    .rev()
                    .find(|&k| word[k] > word[k + 1]),
            };
            let Some(k) = descent else {
                out.add_term(Monomial::from_sorted_word(self, &word), coeff);
                continue;
            };
            let a = self.generator_at(word[k]);
            let b = self.generator_at(word[k + 1]);
            word.swap(k, k + 1);
            if a.row == b.row || a.col == b.col {
                // yx = q^-1 xy, zx = q^-1 xz, ty = q^-1 yt, tz = q^-1 zt
                push(&mut pending, word, &coeff * &LaurentQ::q_pow(-1));
            } else if a.col > b.col {
                // tx = xt - (q - q^-1) yz
                let mut corr = word.clone();
                corr[k] = self.index(Generator::new(b.row, a.col)).expect("in range");
                corr[k + 1] = self.index(Generator::new(a.row, b.col)).expect("in range");
                push(&mut pending, word, coeff.clone());
                push(&mut pending, corr, -(&coeff * &LaurentQ::q_minus_q_inv()));
            } else {
                // zy = yz
                push(&mut pending, word, coeff);
            }
        }
        out
    }
}

fn push(pending: &mut BTreeMap<Vec<usize>, LaurentQ>, word: Vec<usize>, coeff: LaurentQ) {
    match pending.get_mut(&word) {
        Some(c) => {
            c.add_assign_ref(&coeff);
        }
        None => {
            pending.insert(word, coeff);
        }
    }
}

/// A PBW monomial stored as its exponent vector over the generators in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    fn one(alg: &QuantumMatrixAlgebra) -> Self {
        Monomial {
            exps: vec![0; alg.num_generators()],
        }
    }

    fn from_sorted_word(alg: &QuantumMatrixAlgebra, word: &[usize]) -> Self {
        let mut m = Self::one(alg);
        for &g in word {
            m.exps[g] += 1;
        }
        m
    }

    /// Builds the monomial of a word after sorting it; useful for looking up
    /// coefficients.
    pub fn from_generators(alg: &QuantumMatrixAlgebra, gens: &[Generator]) -> Result<Self> {
        let mut word = gens
            .iter()
            .map(|&g| alg.index(g))
            .collect::<Result<Vec<_>>>()?;
        word.sort_unstable();
        Ok(Self::from_sorted_word(alg, &word))
    }

    fn word(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .flat_map(|(g, &e)| std::iter::repeat_n(g, e as usize))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    /// Generators of the monomial in PBW order, with repetition.
    pub fn generators(&self, alg: &QuantumMatrixAlgebra) -> Vec<Generator> {
        self.word()
            .into_iter()
            .map(|g| alg.generator_at(g))
            .collect()
    }
}

/// An element of a [`QuantumMatrixAlgebra`] in PBW normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    alg: QuantumMatrixAlgebra,
    terms: BTreeMap<Monomial, LaurentQ>,
}

impl QPoly {
    pub fn zero(alg: QuantumMatrixAlgebra) -> Self {
        QPoly {
            alg,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(alg: QuantumMatrixAlgebra, c: LaurentQ) -> Self {
        let mut out = Self::zero(alg);
        out.add_term(Monomial::one(&alg), c);
        out
    }

    pub fn one(alg: QuantumMatrixAlgebra) -> Self {
        Self::scalar(alg, LaurentQ::one())
    }

    pub fn generator(alg: QuantumMatrixAlgebra, row: usize, col: usize) -> Result<Self> {
        alg.normalize(&[Generator::new(row, col)], LaurentQ::one())
    }

    pub fn algebra(&self) -> QuantumMatrixAlgebra {
        self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentQ)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> LaurentQ {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: LaurentQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                slot.add_assign_ref(&c);
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same(&self, other: &QPoly) -> Result<()> {
        if self.alg != other.alg {
            return Err(Error::DimensionMismatch {
                left: self.alg.dims(),
                right: other.alg.dims(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &QPoly) -> Result<QPoly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QPoly) -> Result<QPoly> {
        self.add(&other.scale(&-LaurentQ::one()))
    }

    pub fn scale(&self, c: &LaurentQ) -> QPoly {
        let mut out = QPoly::zero(self.alg);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    /// Product in the algebra: concatenate monomial words and straighten.
    pub fn mul(&self, other: &QPoly) -> Result<QPoly> {
        self.check_same(other)?;
        let mut pending = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let wa = ma.word();
            for (mb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend(mb.word());
                push(&mut pending, w, ca * cb);
            }
        }
        Ok(self.alg.straighten(pending, Strategy::LeftToRight))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &QPoly) -> Result<QPoly> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Coefficients after substituting `q = 1`; zero results are dropped.
    pub fn eval_q_at_one(&self) -> BTreeMap<Monomial, BigInt> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.eval_at_one()))
            .filter(|(_, c)| c.sign() != num_bigint::Sign::NoSign)
            .collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let gens = m.generators(&self.alg);
            let single = c.terms().count() == 1;
            let unit = single && c.terms().all(|(e, v)| e == 0 && v.abs().is_one());
            if gens.is_empty() {
                write!(f, "({c})")?;
                continue;
            }
            if !unit {
                write!(f, "({c})*")?;
            } else if c.coefficient(0).is_negative() {
                write!(f, "-")?;
            }
            for (i, g) in gens.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{g}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(r: usize, c: usize) -> Generator {
        Generator::new(r, c)
    }

    fn mono(alg: &QuantumMatrixAlgebra, gens: &[Generator]) -> Monomial {
        Monomial::from_generators(alg, gens).unwrap()
    }

    #[test]
    fn same_row_swap() {
        let alg = QuantumMatrixAlgebra::square(2);
        let p = alg.normalize(&[z(1, 2), z(1, 1)], LaurentQ::one()).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(
            p.coefficient(&mono(&alg, &[z(1, 1), z(1, 2)])),
            LaurentQ::q_pow(-1)
        );
    }

    #[test]
    fn antidiagonal_swap_has_correction() {
        let alg = QuantumMatrixAlgebra::square(2);
        let p = alg.normalize(&[z(2, 2), z(1, 1)], LaurentQ::one()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(
            p.coefficient(&mono(&alg, &[z(1, 1), z(2, 2)])),
            LaurentQ::one()
        );
        assert_eq!(
            p.coefficient(&mono(&alg, &[z(1, 2), z(2, 1)])),
            -LaurentQ::q_minus_q_inv()
        );
    }

    #[test]
    fn diagonal_pair_commutes() {
        let alg = QuantumMatrixAlgebra::square(2);
        let p = alg.normalize(&[z(2, 1), z(1, 2)], LaurentQ::one()).unwrap();
        assert_eq!(
            p,
            alg.normalize(&[z(1, 2), z(2, 1)], LaurentQ::one()).unwrap()
        );
    }

    #[test]
    fn ordered_word_is_fixed() {
        let alg = QuantumMatrixAlgebra::new(2, 3);
        let word = [z(1, 1), z(1, 3), z(2, 2), z(2, 2)];
        let p = alg.normalize(&word, LaurentQ::constant(5)).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coefficient(&mono(&alg, &word)), LaurentQ::constant(5));
    }

    #[test]
    fn invalid_generator_is_rejected() {
        let alg = QuantumMatrixAlgebra::new(2, 3);
        assert!(matches!(
            alg.normalize(&[z(3, 1)], LaurentQ::one()),
            Err(Error::InvalidGenerator { .. })
        ));
        assert!(alg.normalize(&[z(1, 0)], LaurentQ::one()).is_err());
        assert!(QPoly::generator(alg, 1, 4).is_err());
    }

    #[test]
    fn mul_examples() {
        let alg = QuantumMatrixAlgebra::square(2);
        let z11 = QPoly::generator(alg, 1, 1).unwrap();
        let z12 = QPoly::generator(alg, 1, 2).unwrap();
        let one = QPoly::one(alg);
        assert_eq!(z11.mul(&one).unwrap(), z11);
        let lhs = z11.add(&z12).unwrap().mul(&z11).unwrap();
        let expected = alg
            .normalize(&[z(1, 1), z(1, 1)], LaurentQ::one())
            .unwrap()
            .add(
                &alg.normalize(&[z(1, 1), z(1, 2)], LaurentQ::q_pow(-1))
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn dimension_mismatch() {
        let a = QPoly::one(QuantumMatrixAlgebra::square(2));
        let b = QPoly::one(QuantumMatrixAlgebra::new(2, 3));
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn display_is_readable() {
        let alg = QuantumMatrixAlgebra::square(2);
        let p = alg.normalize(&[z(2, 2), z(1, 1)], LaurentQ::one()).unwrap();
        let s = p.to_string();
        assert!(s.contains("Z(1,1)*Z(2,2)"), "{s}");
        assert!(s.contains("(q^-1 - q)*Z(1,2)*Z(2,1)"), "{s}");
        assert_eq!(QPoly::zero(alg).to_string(), "0");
    }
}
