//! Exact arithmetic in the quantized coordinate ring of `u x v` matrices.
//!
//! For every 2x2 submatrix `[[x, y], [z, t]]` of the generator matrix:
//!
//! ```text
//! yx = q^-1 xy   zx = q^-1 xz   zy = yz   ty = q^-1 yt   tz = q^-1 zt
//! tx = xt - (q - q^-1) yz
//! ```
//!
//! Elements are kept in PBW normal form: sums of monomials whose generators
//! appear in lexicographic `(row, col)` order, with coefficients in
//! `Z[q, q^-1]`. Rewriting always moves the smaller generator left.

mod laurent;
mod minor;
mod poly;

pub use laurent::LaurentQ;
pub use minor::{quantum_det, quantum_minor, MinorSpec};
pub use poly::{Generator, Monomial, QPoly, QuantumMatrixAlgebra, Strategy};

use serde::Serialize;

use crate::Result;

/// A defining or derived identity that failed to normalize to zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: String,
    pub residual: String,
}

/// True iff `x` commutes with every generator.
pub fn is_central(x: &QPoly) -> Result<bool> {
    Ok(first_noncommuting(x)?.is_none())
}

fn first_noncommuting(x: &QPoly) -> Result<Option<(Generator, QPoly)>> {
    let alg = x.algebra();
    for g in alg.generators() {
        let zg = QPoly::generator(alg, g.row, g.col)?;
        let c = x.commutator(&zg)?;
        if !c.is_zero() {
            return Ok(Some((g, c)));
        }
    }
    Ok(None)
}

/// Checks the six defining relations on every 2x2 submatrix of the `n x n`
/// generator matrix. Returns the number of identities checked.
pub fn verify_relations(n: usize) -> Result<std::result::Result<usize, IdentityFailure>> {
    verify_relations_in(&QuantumMatrixAlgebra::square(n))
}

pub fn verify_relations_in(
    alg: &QuantumMatrixAlgebra,
) -> Result<std::result::Result<usize, IdentityFailure>> {
    let q_inv = LaurentQ::q_pow(-1);
    let one = LaurentQ::one();
    let mut checked = 0;
    for i in 1..=alg.rows() {
        for k in i + 1..=alg.rows() {
            for a in 1..=alg.cols() {
                for b in a + 1..=alg.cols() {
                    let x = Generator::new(i, a);
                    let y = Generator::new(i, b);
                    let z = Generator::new(k, a);
                    let t = Generator::new(k, b);
                    let tag = |name: &str| format!("{name} on rows ({i},{k}) cols ({a},{b})");
                    let binomials = [
                        ("yx = q^-1 xy", [y, x], [x, y], &q_inv),
                        ("zx = q^-1 xz", [z, x], [x, z], &q_inv),
                        ("zy = yz", [z, y], [y, z], &one),
                        ("ty = q^-1 yt", [t, y], [y, t], &q_inv),
                        ("tz = q^-1 zt", [t, z], [z, t], &q_inv),
                    ];
                    for (name, lhs, rhs, c) in binomials {
                        let residual = alg
                            .normalize(&lhs, one.clone())?
                            .sub(&alg.normalize(&rhs, c.clone())?)?;
                        checked += 1;
                        if !residual.is_zero() {
                            return Ok(Err(IdentityFailure {
                                identity: tag(name),
                                residual: residual.to_string(),
                            }));
                        }
                    }
                    let residual = alg
                        .normalize(&[t, x], one.clone())?
                        .sub(&alg.normalize(&[x, t], one.clone())?)?
                        .add(&alg.normalize(&[y, z], LaurentQ::q_minus_q_inv())?)?;
                    checked += 1;
                    if !residual.is_zero() {
                        return Ok(Err(IdentityFailure {
                            identity: tag("tx = xt - (q - q^-1) yz"),
                            residual: residual.to_string(),
                        }));
                    }
                }
            }
        }
    }
    Ok(Ok(checked))
}

/// Checks that the `n x n` quantum determinant commutes with every generator.
pub fn verify_delta_central(n: usize) -> Result<std::result::Result<(), IdentityFailure>> {
    let alg = QuantumMatrixAlgebra::square(n);
    let delta = quantum_det(&alg)?;
    Ok(match first_noncommuting(&delta)? {
        None => Ok(()),
        Some((g, c)) => Err(IdentityFailure {
            identity: format!("Delta * {g} = {g} * Delta (n = {n})"),
            residual: c.to_string(),
        }),
    })
}

/// Laplace-type expansions of a quantum minor, each compared with the minor
/// itself after normalization:
///
/// * first row: `Σ_k (-q)^(k-1) Z(i_1, α_k) [rows \ i_1 | cols \ α_k]`
/// * first column: `Σ_k (-q)^(k-1) Z(i_k, α_1) [rows \ i_k | cols \ α_1]`
/// * last row: `Σ_k (-q)^(t-k) [rows \ i_t | cols \ α_k] Z(i_t, α_k)`
///
/// Returns `(expansion name, holds)` pairs.
pub fn laplace_expansions(
    alg: &QuantumMatrixAlgebra,
    spec: &MinorSpec,
) -> Result<Vec<(String, bool)>> {
    let target = quantum_minor(alg, spec)?;
    let t = spec.size();
    let sign = |e: usize| LaurentQ::monomial(if e.is_multiple_of(2) { 1 } else { -1 }, e as i32);
    let cofactor = |r: usize, c: usize| -> Result<QPoly> {
        match spec.without(r, c) {
            Some(s) => quantum_minor(alg, &s),
            None => Ok(QPoly::one(*alg)),
        }
    };
    let mut first_row = QPoly::zero(*alg);
    let mut first_col = QPoly::zero(*alg);
    let mut last_row = QPoly::zero(*alg);
    for k in 0..t {
        let zr = QPoly::generator(*alg, spec.rows()[0], spec.cols()[k])?;
        first_row = first_row.add(&zr.mul(&cofactor(0, k)?)?.scale(&sign(k)))?;
        let zc = QPoly::generator(*alg, spec.rows()[k], spec.cols()[0])?;
        first_col = first_col.add(&zc.mul(&cofactor(k, 0)?)?.scale(&sign(k)))?;
        let zl = QPoly::generator(*alg, spec.rows()[t - 1], spec.cols()[k])?;
        last_row = last_row.add(&cofactor(t - 1, k)?.mul(&zl)?.scale(&sign(t - 1 - k)))?;
    }
    Ok(vec![
        ("first row".to_string(), first_row == target),
        ("first column".to_string(), first_col == target),
        ("last row".to_string(), last_row == target),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn centrality_examples() {
        let alg = QuantumMatrixAlgebra::square(2);
        assert!(is_central(&QPoly::one(alg)).unwrap());
        assert!(is_central(&quantum_det(&alg).unwrap()).unwrap());
        let z11 = QPoly::generator(alg, 1, 1).unwrap();
        assert!(!is_central(&z11).unwrap());
        let z12 = QPoly::generator(alg, 1, 2).unwrap();
        assert!(!z11.commutator(&z12).unwrap().is_zero());
    }

    #[test]
    fn relations_hold_up_to_four() {
        for n in 1..=4 {
            let checked = verify_relations(n).unwrap().unwrap();
            let pairs = n * (n - 1) / 2;
            assert_eq!(checked, 6 * pairs * pairs);
        }
        assert!(verify_relations_in(&QuantumMatrixAlgebra::new(2, 3))
            .unwrap()
            .is_ok());
    }

    #[test]
    fn delta_is_central() {
        for n in 1..=3 {
            assert!(verify_delta_central(n).unwrap().is_ok(), "n = {n}");
        }
    }

    #[test]
    fn non_central_minor_is_reported() {
        let alg = QuantumMatrixAlgebra::square(3);
        let m = quantum_minor(&alg, &MinorSpec::new(vec![1, 2], vec![1, 2]).unwrap()).unwrap();
        assert!(!is_central(&m).unwrap());
    }

    #[test]
    fn delta_at_q_one_is_the_classical_determinant() {
        use itertools::Itertools;
        for n in 2..=4 {
            let alg = QuantumMatrixAlgebra::square(n);
            let at_one = quantum_det(&alg).unwrap().eval_q_at_one();
            assert_eq!(at_one.len(), (1..=n).product::<usize>());
            for perm in (1..=n).permutations(n) {
                let gens: Vec<Generator> = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| Generator::new(i + 1, c))
                    .collect();
                let m = Monomial::from_generators(&alg, &gens).unwrap();
                let inv = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| perm[i] > perm[j])
                    .count();
                let expected = if inv % 2 == 0 { 1 } else { -1 };
                assert_eq!(at_one[&m], BigInt::from(expected));
            }
        }
    }

    #[test]
    fn laplace_self_test() {
        for n in 2..=3 {
            let alg = QuantumMatrixAlgebra::square(n);
            for (name, holds) in laplace_expansions(&alg, &MinorSpec::full(n)).unwrap() {
                assert!(holds, "{name} expansion, n = {n}");
            }
        }
        let alg = QuantumMatrixAlgebra::new(3, 4);
        let spec = MinorSpec::new(vec![1, 2, 3], vec![1, 2, 4]).unwrap();
        assert!(laplace_expansions(&alg, &spec)
            .unwrap()
            .iter()
            .all(|(_, h)| *h));
    }

    fn random_word(rng: &mut ChaCha8Rng, alg: &QuantumMatrixAlgebra, len: usize) -> Vec<Generator> {
        (0..len)
            .map(|_| Generator::new(rng.gen_range(1..=alg.rows()), rng.gen_range(1..=alg.cols())))
            .collect()
    }

    #[test]
    fn normalization_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let n = 2 + trial % 2;
            let alg = QuantumMatrixAlgebra::square(n);
            let len = rng.gen_range(0..=6);
            let word = random_word(&mut rng, &alg, len);
            let l = alg
                .normalize_with(&word, LaurentQ::one(), Strategy::LeftToRight)
                .unwrap();
            let r = alg
                .normalize_with(&word, LaurentQ::one(), Strategy::RightToLeft)
                .unwrap();
            assert_eq!(l, r, "{word:?}");
        }
    }

    fn random_poly(rng: &mut ChaCha8Rng, alg: &QuantumMatrixAlgebra) -> QPoly {
        let mut p = QPoly::zero(*alg);
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(0..=2);
            let word = random_word(rng, alg, len);
            let c = LaurentQ::monomial(rng.gen_range(-3..=3), rng.gen_range(-2..=2));
            p = p.add(&alg.normalize(&word, c).unwrap()).unwrap();
        }
        p
    }

    #[test]
    fn ring_axioms_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let alg = QuantumMatrixAlgebra::new(2 + trial % 2, 2 + (trial / 2) % 2);
            let a = random_poly(&mut rng, &alg);
            let b = random_poly(&mut rng, &alg);
            let c = random_poly(&mut rng, &alg);
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc, "associativity");
            let left = a.mul(&b.add(&c).unwrap()).unwrap();
            let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            assert_eq!(left, right, "distributivity");
            assert_eq!(a.mul(&QPoly::one(alg)).unwrap(), a);
            assert_eq!(QPoly::one(alg).mul(&a).unwrap(), a);
            assert!(a.sub(&a).unwrap().is_zero());
        }
    }
}
