//! Generator descriptors for the ideals `I_w = I+_(w+) + I-_(w-)` and the
//! catalog `σ -> I_(w0, w0 σ)` over the restricted set `S`.
//!
//! A quantum minor `c±_(j,y)` depends on `y` only through an image set, so a
//! generator is recorded as `(sign, j, rows)` with the column set implied:
//! `[1, j]` for `plus`, `[j+1, n]` for `minus`. Containment between
//! descriptors is plain set containment of these generator families; it
//! implies containment of the ideals but not conversely, and nothing here
//! decides ideal membership algebraically.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{poly_bernoulli_neg, rank_count};
use crate::perm::{bruhat_leq, in_restricted, longest_element, reverse_values, sigma_zero};
use crate::poset::{barrier_count, enumerate_restricted_bounded, DEFAULT_SIZE_BOUND};
use crate::{Error, PairW, Permutation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// A quantum minor `c±_(j, ·)` of the `n x n` generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MinorIndex {
    sign: Sign,
    j: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorIndex {
    /// `rows` must be strictly increasing in `[1, n]` with `j` entries for
    /// `plus` and `n - j` for `minus`.
    pub fn new(sign: Sign, j: usize, rows: Vec<usize>, n: usize) -> Result<Self> {
        if j == 0 || j >= n {
            return Err(Error::LevelOutOfRange {
                j,
                max: n.saturating_sub(1),
            });
        }
        let (size, cols): (usize, Vec<usize>) = match sign {
            Sign::Plus => (j, (1..=j).collect()),
            Sign::Minus => (n - j, (j + 1..=n).collect()),
        };
        let increasing = rows.windows(2).all(|w| w[0] < w[1]);
        let in_range =
            rows.first().is_some_and(|&r| r >= 1) && rows.last().is_some_and(|&r| r <= n);
        if rows.len() != size || !increasing || !in_range {
            return Err(Error::InvalidMinor(format!(
                "{sign:?} minor at level {j} of an {n}x{n} matrix needs {size} increasing rows in [1, {n}], got {rows:?}"
            )));
        }
        Ok(MinorIndex {
            sign,
            j,
            rows,
            cols,
        })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }
}

impl std::fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(
            f,
            "c{s}_{} [{} | {}]",
            self.j,
            self.rows.iter().join(","),
            self.cols.iter().join(",")
        )
    }
}

fn dominated(lower: &[usize], upper: &[usize]) -> bool {
    lower.iter().zip(upper).all(|(a, b)| a <= b)
}

/// Plus-generators of `I+_(w+)`: for each level `j`, every `j`-subset of rows
/// not dominated by the sorted `w+([1, j])`.
pub fn gens_plus(wplus: &Permutation) -> BTreeSet<MinorIndex> {
    let n = wplus.n();
    let mut out = BTreeSet::new();
    for j in 1..n {
        let upper = wplus.sorted_prefix(j);
        for rows in (1..=n).combinations(j) {
            if !dominated(&rows, &upper) {
                out.insert(MinorIndex {
                    sign: Sign::Plus,
                    j,
                    rows,
                    cols: (1..=j).collect(),
                });
            }
        }
    }
    out
}

/// Minus-generators of `I-_(w-)`: for each level `j`, every `(n-j)`-subset of
/// rows whose complement is not dominated by the sorted `w-([1, j])`.
pub fn gens_minus(wminus: &Permutation) -> BTreeSet<MinorIndex> {
    let n = wminus.n();
    let mut out = BTreeSet::new();
    for j in 1..n {
        let upper = wminus.sorted_prefix(j);
        for rows in (1..=n).combinations(n - j) {
            let complement: Vec<usize> = (1..=n).filter(|r| !rows.contains(r)).collect();
            if !dominated(&complement, &upper) {
                out.insert(MinorIndex {
                    sign: Sign::Minus,
                    j,
                    rows,
                    cols: (j + 1..=n).collect(),
                });
            }
        }
    }
    out
}

/// The pair `w` together with the generators of `I_w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDescriptor {
    w: PairW,
    generators: BTreeSet<MinorIndex>,
}

impl IdealDescriptor {
    pub fn for_pair(w: PairW) -> Self {
        let mut generators = gens_plus(w.plus());
        generators.extend(gens_minus(w.minus()));
        IdealDescriptor { w, generators }
    }

    pub fn w(&self) -> &PairW {
        &self.w
    }

    pub fn generators(&self) -> &BTreeSet<MinorIndex> {
        &self.generators
    }

    /// Every generator of `other` is a generator of `self`.
    pub fn contains_descriptor(&self, other: &IdealDescriptor) -> bool {
        other.generators.is_subset(&self.generators)
    }
}

/// `σ` with its descriptor for `(w0, w0 σ)`; `rank = m - barrier_count(σ)`
/// in the square case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub sigma: Permutation,
    pub descriptor: IdealDescriptor,
    pub rank: Option<usize>,
}

pub fn xi_descriptor(sigma: &Permutation, m: usize, p: usize) -> Result<CatalogEntry> {
    if !in_restricted(sigma, m, p)? {
        return Err(Error::NotRestricted(sigma.images().to_vec()));
    }
    let n = m + p;
    let w = PairW::new(longest_element(n), reverse_values(sigma))?;
    let rank = if m == p {
        Some(m - barrier_count(sigma, m)?)
    } else {
        None
    };
    Ok(CatalogEntry {
        sigma: sigma.clone(),
        descriptor: IdealDescriptor::for_pair(w),
        rank,
    })
}

/// The catalog over all of `S`, in lexicographic order of `σ`.
pub fn build_catalog(m: usize, p: usize) -> Result<Vec<CatalogEntry>> {
    build_catalog_bounded(m, p, DEFAULT_SIZE_BOUND)
}

pub fn build_catalog_bounded(m: usize, p: usize, bound: usize) -> Result<Vec<CatalogEntry>> {
    enumerate_restricted_bounded(m, p, bound)?
        .par_iter()
        .map(|s| xi_descriptor(s, m, p))
        .collect()
}

/// The first generator with no positional pair `(i_l, α_l)` in
/// `[1, m] x [m+1, n]`.
pub fn criterion_failure(entry: &CatalogEntry, m: usize) -> Option<&MinorIndex> {
    entry
        .descriptor
        .generators
        .iter()
        .find(|g| !g.rows.iter().zip(&g.cols).any(|(&i, &a)| i <= m && a > m))
}

/// Necessary condition for a generator to lie in an image ideal, applied to
/// every generator of the entry.
pub fn criterion_check(entry: &CatalogEntry, m: usize) -> bool {
    criterion_failure(entry, m).is_none()
}

/// `w-(n-t) <= m+1+t` for `t` in `[0, p-2]` and `w-(t) >= m+1-t` for `t` in
/// `[1, m-1]`. False when `w-` does not have size `m + p`.
pub fn lemma_conditions_check(wminus: &Permutation, m: usize, p: usize) -> bool {
    let n = m + p;
    if wminus.n() != n || m == 0 || p == 0 {
        return false;
    }
    (0..=p.saturating_sub(2)).all(|t| wminus.apply(n - t) <= m + 1 + t)
        && (1..m).all(|t| wminus.apply(t) + t > m)
}

/// If `σ <= σ'` then the generators for `σ` are among those for `σ'`.
pub fn nesting_check(
    sigma: &Permutation,
    sigma2: &Permutation,
    m: usize,
    p: usize,
) -> Result<bool> {
    let a = xi_descriptor(sigma, m, p)?;
    let b = xi_descriptor(sigma2, m, p)?;
    Ok(!bruhat_leq(sigma, sigma2)? || b.descriptor.contains_descriptor(&a.descriptor))
}

fn nesting_failure(catalog: &[CatalogEntry]) -> Result<Option<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..catalog.len())
        .flat_map(|a| (0..catalog.len()).map(move |b| (a, b)))
        .collect();
    let bad: Vec<Option<(usize, usize)>> = pairs
        .into_par_iter()
        .map(|(a, b)| {
            let (x, y) = (&catalog[a], &catalog[b]);
            Ok((bruhat_leq(&x.sigma, &y.sigma)?
                && !y.descriptor.contains_descriptor(&x.descriptor))
            .then_some((a, b)))
        })
        .collect::<Result<_>>()?;
    Ok(bad.into_iter().flatten().next())
}

/// Square case: strata sizes equal `rank_count(m, m - t)`, every entry of
/// `S_t` has rank `m - t`, `σ0` is alone in `S_m`, and for `r = m - t < m`
/// every `(r+1)`-subset of `[1, m]` appears as a minus-generator at level
/// `2m - r - 1` (the `(r+1) x (r+1)` minors on rows `<= m` and the last
/// `r + 1` columns).
pub fn transfer_spotcheck(m: usize) -> Result<bool> {
    Ok(transfer_failure(&build_catalog(m, m)?, m)?.is_none())
}

fn transfer_failure(catalog: &[CatalogEntry], m: usize) -> Result<Option<String>> {
    let n = 2 * m;
    let mut sizes = vec![0usize; m + 1];
    for e in catalog {
        let t = barrier_count(&e.sigma, m)?;
        sizes[t] += 1;
        if e.rank != Some(m - t) {
            return Ok(Some(format!(
                "σ = {} has rank {:?}, expected {}",
                e.sigma,
                e.rank,
                m - t
            )));
        }
        let r = m - t;
        if r < m {
            let j = n - r - 1;
            for rows in (1..=m).combinations(r + 1) {
                let g = MinorIndex::new(Sign::Minus, j, rows, n)?;
                if !e.descriptor.generators.contains(&g) {
                    return Ok(Some(format!("σ = {} (rank {r}) lacks {g}", e.sigma)));
                }
            }
        }
    }
    for (t, &size) in sizes.iter().enumerate() {
        let expected = rank_count(m, m - t)?;
        if expected != size.into() {
            return Ok(Some(format!("|S_{t}| = {size}, expected {expected}")));
        }
    }
    let top = sigma_zero(m, m)?;
    let top_stratum: Vec<&CatalogEntry> = catalog.iter().filter(|e| e.rank == Some(0)).collect();
    if top_stratum.len() != 1 || top_stratum[0].sigma != top {
        return Ok(Some(format!("S_{m} is not {{{top}}}")));
    }
    Ok(None)
}

/// Outcome of one named check; `detail` names the first failing item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str, failure: Option<String>) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub m: usize,
    pub p: usize,
    pub entries: usize,
    pub checks: Vec<CheckOutcome>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the size, plus-part, criterion, lemma, nesting and (square case)
/// stratification checks on the catalog for `(m, p)`.
pub fn verify_catalog(m: usize, p: usize, bound: usize) -> Result<CatalogReport> {
    let catalog = build_catalog_bounded(m, p, bound)?;
    let n = m + p;
    let mut checks = Vec::new();

    let expected = poly_bernoulli_neg(p, m);
    checks.push(CheckOutcome::new(
        "catalog size",
        (expected != catalog.len().into())
            .then(|| format!("{} entries, expected {expected}", catalog.len())),
    ));

    let plus = gens_plus(&longest_element(n));
    checks.push(CheckOutcome::new(
        "plus part empty",
        plus.first().map(|g| format!("gens_plus(w0) contains {g}")),
    ));

    let criterion = catalog
        .iter()
        .find_map(|e| criterion_failure(e, m).map(|g| format!("σ = {}: {g}", e.sigma)));
    checks.push(CheckOutcome::new("criterion", criterion));

    let lemma = catalog
        .iter()
        .find(|e| !lemma_conditions_check(e.descriptor.w.minus(), m, p))
        .map(|e| format!("σ = {}: w- = {}", e.sigma, e.descriptor.w.minus()));
    checks.push(CheckOutcome::new("lemma conditions", lemma));

    let nesting = nesting_failure(&catalog)?.map(|(a, b)| {
        format!(
            "{} <= {} but generators are not nested",
            catalog[a].sigma, catalog[b].sigma
        )
    });
    checks.push(CheckOutcome::new("nesting", nesting));

    if m == p {
        checks.push(CheckOutcome::new(
            "stratification",
            transfer_failure(&catalog, m)?,
        ));
    }

    Ok(CatalogReport {
        m,
        p,
        entries: catalog.len(),
        checks,
    })
}

#[derive(Serialize)]
struct EntryJson<'a> {
    sigma: &'a Permutation,
    #[serde(rename = "wMinus")]
    w_minus: &'a Permutation,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    generators: &'a BTreeSet<MinorIndex>,
}

#[derive(Serialize)]
struct CatalogJson<'a> {
    m: usize,
    p: usize,
    entries: Vec<EntryJson<'a>>,
}

/// `{m, p, entries: [{sigma, wMinus, rank?, generators: [{sign, j, rows, cols}]}]}`.
pub fn catalog_json(m: usize, p: usize, entries: &[CatalogEntry]) -> String {
    let doc = CatalogJson {
        m,
        p,
        entries: entries
            .iter()
            .map(|e| EntryJson {
                sigma: &e.sigma,
                w_minus: e.descriptor.w.minus(),
                rank: e.rank,
                generators: &e.descriptor.generators,
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("catalog serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_slice(v)
    }

    fn rows_at(gens: &BTreeSet<MinorIndex>, sign: Sign, j: usize) -> Vec<Vec<usize>> {
        gens.iter()
            .filter(|g| g.sign == sign && g.j == j)
            .map(|g| g.rows.clone())
            .collect()
    }

    #[test]
    fn plus_generators() {
        for n in 2..=8 {
            assert!(gens_plus(&longest_element(n)).is_empty(), "n = {n}");
        }
        let id = gens_plus(&Permutation::identity(4));
        assert_eq!(id.len(), 11);
        assert_eq!(rows_at(&id, Sign::Plus, 1), vec![vec![2], vec![3], vec![4]]);
        assert!(id.iter().all(|g| g.cols == (1..=g.j).collect::<Vec<_>>()));
    }

    #[test]
    fn minus_generators() {
        assert!(gens_minus(&longest_element(5)).is_empty());
        let g = gens_minus(&p(&[2, 1, 4, 3]));
        assert_eq!(
            rows_at(&g, Sign::Minus, 1),
            vec![vec![1, 2, 3], vec![1, 2, 4]]
        );
        assert!(g
            .iter()
            .all(|x| x.cols == (x.j + 1..=4).collect::<Vec<_>>()));
        assert!(g.iter().all(|x| x.rows.len() == 4 - x.j));
    }

    #[test]
    fn minor_index_validation() {
        assert!(MinorIndex::new(Sign::Plus, 2, vec![1, 3], 4).is_ok());
        assert!(MinorIndex::new(Sign::Plus, 2, vec![3, 1], 4).is_err());
        assert!(MinorIndex::new(Sign::Minus, 1, vec![1, 2], 4).is_err());
        assert!(MinorIndex::new(Sign::Minus, 4, vec![], 4).is_err());
        assert!(MinorIndex::new(Sign::Minus, 3, vec![5], 4).is_err());
        let g = MinorIndex::new(Sign::Minus, 1, vec![1, 2, 4], 4).unwrap();
        assert_eq!(g.cols(), &[2, 3, 4]);
        assert_eq!(g.to_string(), "c-_1 [1,2,4 | 2,3,4]");
    }

    #[test]
    fn xi_examples() {
        let id = xi_descriptor(&Permutation::identity(4), 2, 2).unwrap();
        assert!(id.descriptor.generators.is_empty());
        assert_eq!(id.rank, Some(2));
        assert_eq!(id.descriptor.w.plus(), &longest_element(4));
        let top = xi_descriptor(&p(&[3, 4, 1, 2]), 2, 2).unwrap();
        assert_eq!(top.rank, Some(0));
        assert_eq!(top.descriptor.w.minus(), &p(&[2, 1, 4, 3]));
        assert_eq!(
            xi_descriptor(&p(&[4, 1, 2, 3]), 2, 2).unwrap_err(),
            Error::NotRestricted(vec![4, 1, 2, 3])
        );
        assert_eq!(build_catalog(2, 2).unwrap().len(), 14);
        let rect = xi_descriptor(&Permutation::identity(5), 2, 3).unwrap();
        assert_eq!(rect.rank, None);
    }

    #[test]
    fn top_entry_is_the_largest() {
        let catalog = build_catalog(2, 2).unwrap();
        let top = catalog.iter().find(|e| e.rank == Some(0)).unwrap();
        assert!(catalog
            .iter()
            .all(|e| top.descriptor.contains_descriptor(&e.descriptor)));
    }

    #[test]
    fn criterion_examples() {
        let top = xi_descriptor(&p(&[3, 4, 1, 2]), 2, 2).unwrap();
        let g = MinorIndex::new(Sign::Minus, 1, vec![1, 2, 4], 4).unwrap();
        assert!(top.descriptor.generators.contains(&g));
        assert!(criterion_check(&top, 2));
        for (m, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            for e in build_catalog(m, q).unwrap() {
                assert!(criterion_check(&e, m), "σ = {}", e.sigma);
            }
        }
        let fake = CatalogEntry {
            sigma: Permutation::identity(4),
            descriptor: IdealDescriptor::for_pair(
                PairW::new(Permutation::identity(4), longest_element(4)).unwrap(),
            ),
            rank: None,
        };
        // c+_1 on row 3, column 1 has no pair in [1,2] x [3,4]
        assert!(criterion_failure(&fake, 2).is_some());
    }

    #[test]
    fn lemma_examples() {
        for e in build_catalog(2, 2).unwrap() {
            assert!(lemma_conditions_check(e.descriptor.w.minus(), 2, 2));
        }
        assert!(lemma_conditions_check(&longest_element(4), 2, 2));
        assert!(!lemma_conditions_check(&p(&[1, 2, 3, 4]), 2, 2));
        assert!(!lemma_conditions_check(&longest_element(5), 2, 2));
    }

    #[test]
    fn lemma_contrapositive_over_s4() {
        use itertools::Itertools;
        for v in (1..=4).permutations(4) {
            let w = Permutation::new(v).unwrap();
            if !lemma_conditions_check(&w, 2, 2) {
                assert!(
                    !in_restricted(&reverse_values(&w), 2, 2).unwrap(),
                    "w- = {w}"
                );
            }
        }
    }

    #[test]
    fn nesting_examples() {
        let s = crate::poset::enumerate_restricted(2, 2).unwrap();
        let id = Permutation::identity(4);
        for x in &s {
            assert!(nesting_check(&id, x, 2, 2).unwrap());
            for y in &s {
                assert!(nesting_check(x, y, 2, 2).unwrap());
            }
        }
        assert!(nesting_check(&p(&[2, 1, 3, 4]), &p(&[1, 2, 4, 3]), 2, 2).unwrap());
        assert!(nesting_check(&p(&[4, 1, 2, 3]), &id, 2, 2).is_err());
    }

    #[test]
    fn stratification_and_transfer() {
        assert!(transfer_spotcheck(2).unwrap());
        assert!(transfer_spotcheck(3).unwrap());
    }

    #[test]
    fn full_reports_pass() {
        for (m, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let report = verify_catalog(m, q, DEFAULT_SIZE_BOUND).unwrap();
            assert!(report.passed(), "{report:?}");
            assert_eq!(report.checks.len(), if m == q { 6 } else { 5 });
        }
    }

    #[test]
    fn json_shape() {
        let entry = xi_descriptor(&p(&[3, 4, 1, 2]), 2, 2).unwrap();
        let json = catalog_json(2, 2, std::slice::from_ref(&entry));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["m"], 2);
        let e = &v["entries"][0];
        assert_eq!(e["sigma"], serde_json::json!([3, 4, 1, 2]));
        assert_eq!(e["wMinus"], serde_json::json!([2, 1, 4, 3]));
        assert_eq!(e["rank"], 0);
        let g = &e["generators"][0];
        assert_eq!(g["sign"], "minus");
        assert_eq!(g["j"], 1);
        assert_eq!(g["rows"], serde_json::json!([1, 2, 3]));
        assert_eq!(g["cols"], serde_json::json!([2, 3, 4]));
        let rect = xi_descriptor(&Permutation::identity(5), 2, 3).unwrap();
        assert!(!catalog_json(2, 3, &[rect]).contains("rank"));
    }
}
