//! Factoring products of visitation matrices back into Rauzy steps, and
//! recovering the initial permutation from a sequence of such products.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, Scalar};
use crate::iet::{cmp, Iet};
use crate::induced::SubInterval;
use crate::perm::{l_matrix, permutation_from_l, Permutation};
use crate::rauzy::{elementary_matrix, permutation_step, step_left, step_right, Limits, StepKind};

/// A sequence of steps starting at `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RealizationPath {
    pub base: Permutation,
    pub kinds: Vec<StepKind>,
    pub end: Permutation,
}

impl RealizationPath {
    /// Replay `kinds` from `base`.
    pub fn from_kinds(base: Permutation, kinds: Vec<StepKind>) -> RealizationPath {
        let end = kinds.iter().fold(base.clone(), |p, &k| permutation_step(&p, k));
        RealizationPath { base, kinds, end }
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    /// Permutations visited, `base` first and `end` last.
    pub fn permutations(&self) -> Vec<Permutation> {
        let mut out = vec![self.base.clone()];
        for &k in &self.kinds {
            let next = permutation_step(out.last().expect("nonempty"), k);
            out.push(next);
        }
        out
    }

    /// Ordered product of the elementary matrices along the path.
    pub fn matrix(&self) -> Result<IntMatrix> {
        let perms = self.permutations();
        let mats: Vec<IntMatrix> = self.kinds.iter().zip(&perms).map(|(&k, p)| elementary_matrix(p, k)).collect();
        IntMatrix::product(self.base.n(), mats.iter())
    }

    /// Replaying the kinds must land on `end`.
    pub fn is_consistent(&self) -> bool {
        self.permutations().last() == Some(&self.end)
    }
}

impl fmt::Display for RealizationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kinds: Vec<String> = self.kinds.iter().map(|k| k.to_string()).collect();
        write!(f, "{} -[{}]-> {}", self.base, kinds.join(" "), self.end)
    }
}

fn validate_product(b: &IntMatrix, n: usize, index: usize, need_nonnegative: bool) -> Result<()> {
    let bad = |reason: String| Error::InvalidProduct { index, reason };
    if b.rows() != n || b.cols() != n {
        return Err(bad(format!("expected {n}x{n}, got {}x{}", b.rows(), b.cols())));
    }
    if need_nonnegative && !b.is_nonnegative() {
        return Err(bad("negative entry".into()));
    }
    let det = b.determinant()?;
    if need_nonnegative {
        if det.magnitude() != &num_bigint::BigUint::from(1u8) {
            return Err(bad(format!("determinant {det} is not +1 or -1")));
        }
    } else if det == num_bigint::BigInt::from(0) {
        return Err(bad("singular".into()));
    }
    Ok(())
}

/// End permutation mapped to one witness path of kinds.
type Ends = BTreeMap<Permutation, Vec<StepKind>>;

/// Depth-first factorization search with memo tables. One instance should
/// be used per independent search.
#[derive(Default)]
pub struct Peeler {
    inverses: HashMap<(Permutation, StepKind), IntMatrix>,
    ends: HashMap<(Permutation, IntMatrix), Ends>,
    failed: std::collections::HashSet<(Permutation, IntMatrix)>,
}

impl Peeler {
    pub fn new() -> Peeler {
        Peeler::default()
    }

    fn peel(&mut self, pi: &Permutation, kind: StepKind, b: &IntMatrix) -> Result<Option<IntMatrix>> {
        let inv = self
            .inverses
            .entry((pi.clone(), kind))
            .or_insert_with(|| {
                elementary_matrix(pi, kind)
                    .unimodular_inverse()
                    .expect("elementary matrices are unimodular")
            });
        let c = inv.checked_mul(b)?;
        Ok(c.is_nonnegative().then_some(c))
    }

    /// First factorization of `b` from `pi` in the order `R0 < R1 < L0 < L1`.
    /// The entry sum strictly drops with each nonnegative peel, so the
    /// search is finite.
    pub fn first_path(&mut self, pi: &Permutation, b: &IntMatrix) -> Result<Option<Vec<StepKind>>> {
        if b == &IntMatrix::identity(pi.n()) {
            return Ok(Some(Vec::new()));
        }
        let key = (pi.clone(), b.clone());
        if self.failed.contains(&key) {
            return Ok(None);
        }
        if let Some(ends) = self.ends.get(&key) {
            return Ok(ends.values().next().cloned());
        }
        for kind in StepKind::ALL {
            if let Some(c) = self.peel(pi, kind, b)? {
                let next = permutation_step(pi, kind);
                if let Some(mut rest) = self.first_path(&next, &c)? {
                    rest.insert(0, kind);
                    return Ok(Some(rest));
                }
            }
        }
        self.failed.insert(key);
        Ok(None)
    }

    /// Every permutation at which some factorization of `b` from `pi` ends,
    /// with one witness path each.
    pub fn all_ends(&mut self, pi: &Permutation, b: &IntMatrix) -> Result<Ends> {
        if b == &IntMatrix::identity(pi.n()) {
            return Ok(BTreeMap::from([(pi.clone(), Vec::new())]));
        }
        let key = (pi.clone(), b.clone());
        if let Some(ends) = self.ends.get(&key) {
            return Ok(ends.clone());
        }
        if self.failed.contains(&key) {
            return Ok(Ends::new());
        }
        let mut out = Ends::new();
        for kind in StepKind::ALL {
            if let Some(c) = self.peel(pi, kind, b)? {
                let next = permutation_step(pi, kind);
                for (end, rest) in self.all_ends(&next, &c)? {
                    out.entry(end).or_insert_with(|| {
                        let mut path = vec![kind];
                        path.extend(rest);
                        path
                    });
                }
            }
        }
        if out.is_empty() {
            self.failed.insert(key);
        } else {
            self.ends.insert(key, out.clone());
        }
        Ok(out)
    }
}

/// Factor `b` as a product of elementary matrices along a path from `pi`.
pub fn peel_decompose(b: &IntMatrix, pi: &Permutation) -> Result<Option<RealizationPath>> {
    validate_product(b, pi.n(), 1, true)?;
    pi.require_irreducible()?;
    let kinds = Peeler::new().first_path(pi, b)?;
    Ok(kinds.map(|k| RealizationPath::from_kinds(pi.clone(), k)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weak,
    Strict,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "weak" => Ok(Mode::Weak),
            "strict" => Ok(Mode::Strict),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub pi: Permutation,
    /// `pi = pi_0, pi_1, ..., pi_m`.
    pub chain: Vec<Permutation>,
    /// One factorization path per product (strict mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<StepKind>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub n: usize,
    pub mode: Mode,
    pub products: Vec<IntMatrix>,
    /// Sorted by `pi`.
    pub candidates: Vec<Candidate>,
    /// Number of candidates surviving the first `k` products, `k = 1..m`.
    pub prefix_counts: Vec<usize>,
}

impl RecoveryReport {
    pub fn candidate_perms(&self) -> Vec<Permutation> {
        self.candidates.iter().map(|c| c.pi.clone()).collect()
    }
}

/// Candidates for which every congruence `B_k^T L_{pi_{k-1}} B_k` is the
/// skew form of an irreducible permutation.
pub fn recover_weak(bs: &[IntMatrix], n: usize) -> Result<RecoveryReport> {
    for (k, b) in bs.iter().enumerate() {
        validate_product(b, n, k + 1, false)?;
    }
    let mut prefix_counts = vec![0; bs.len()];
    let mut candidates = Vec::new();
    for pi in Permutation::irreducible(n) {
        let mut chain = vec![pi.clone()];
        let mut alive = true;
        for (k, b) in bs.iter().enumerate() {
            let cur = chain.last().expect("nonempty");
            let m = b.transpose().checked_mul(l_matrix(cur).matrix())?.checked_mul(b)?;
            match permutation_from_l(&m).filter(Permutation::is_irreducible) {
                Some(next) => {
                    prefix_counts[k] += 1;
                    chain.push(next);
                }
                None => {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            candidates.push(Candidate { pi, chain, paths: None });
        }
    }
    Ok(RecoveryReport {
        n,
        mode: Mode::Weak,
        products: bs.to_vec(),
        candidates,
        prefix_counts,
    })
}

/// Chain search for one starting permutation. Returns the number of
/// products survived and, if all were, a certificate.
fn strict_chain(pi: &Permutation, bs: &[IntMatrix]) -> Result<(usize, Option<Candidate>)> {
    let mut peeler = Peeler::new();
    // level k: end permutation -> (predecessor at level k - 1, path)
    let mut levels: Vec<BTreeMap<Permutation, (Permutation, Vec<StepKind>)>> = Vec::new();
    let mut frontier = vec![pi.clone()];
    for b in bs {
        let mut next = BTreeMap::new();
        for p in &frontier {
            for (end, path) in peeler.all_ends(p, b)? {
                next.entry(end).or_insert_with(|| (p.clone(), path));
            }
        }
        if next.is_empty() {
            return Ok((levels.len(), None));
        }
        frontier = next.keys().cloned().collect();
        levels.push(next);
    }
    let mut chain = vec![frontier.first().expect("nonempty").clone()];
    let mut paths = Vec::new();
    for level in levels.iter().rev() {
        let (prev, path) = &level[chain.last().expect("nonempty")];
        paths.push(path.clone());
        chain.push(prev.clone());
    }
    chain.reverse();
    paths.reverse();
    Ok((
        bs.len(),
        Some(Candidate {
            pi: pi.clone(),
            chain,
            paths: Some(paths),
        }),
    ))
}

/// Candidates from which every product factors into Rauzy steps, each
/// factorization starting where the previous one ended.
pub fn recover_strict(bs: &[IntMatrix], n: usize) -> Result<RecoveryReport> {
    for (k, b) in bs.iter().enumerate() {
        validate_product(b, n, k + 1, true)?;
    }
    let results: Vec<(usize, Option<Candidate>)> = Permutation::irreducible(n)
        .par_iter()
        .map(|pi| strict_chain(pi, bs))
        .collect::<Result<_>>()?;
    let mut prefix_counts = vec![0; bs.len()];
    let mut candidates = Vec::new();
    for (survived, cand) in results {
        prefix_counts.iter_mut().take(survived).for_each(|c| *c += 1);
        candidates.extend(cand);
    }
    Ok(RecoveryReport {
        n,
        mode: Mode::Strict,
        products: bs.to_vec(),
        candidates,
        prefix_counts,
    })
}

pub fn recover(bs: &[IntMatrix], n: usize, mode: Mode) -> Result<RecoveryReport> {
    match mode {
        Mode::Weak => recover_weak(bs, n),
        Mode::Strict => recover_strict(bs, n),
    }
}

/// Shrink the domain of `t` towards `J` by left and right steps, left
/// first, without ever cutting into `J`. Returns the path if the domain
/// becomes exactly `J`, and `None` if it gets stuck strictly containing it.
pub fn realize_interval(t: &Iet, j: &SubInterval) -> Result<Option<RealizationPath>> {
    realize_interval_with_limits(t, j, &Limits::default())
}

pub fn realize_interval_with_limits(t: &Iet, j: &SubInterval, limits: &Limits) -> Result<Option<RealizationPath>> {
    if !j.is_within(t) {
        return Err(Error::Domain(format!("{j} is not inside the domain")));
    }
    let mut cur = t.clone();
    let mut kinds = Vec::new();
    loop {
        if cur.origin() == &j.a && cur.end() == &j.b {
            return Ok(Some(RealizationPath::from_kinds(t.permutation().clone(), kinds)));
        }
        if kinds.len() >= limits.step_cap {
            return Err(Error::StepCapExceeded { cap: limits.step_cap });
        }
        let pi = cur.permutation();
        let n = pi.n();
        let left_cut = min_of(cur.length(1), cur.length(pi.inverse_at(1)));
        let right_cut = min_of(cur.length(n), cur.length(pi.inverse_at(n)));
        let (st, next) = if cmp(&j.a, &(cur.origin() + left_cut)) != Ordering::Less {
            step_left(&cur)?
        } else if cmp(&j.b, &(cur.end() - right_cut)) != Ordering::Greater {
            step_right(&cur)?
        } else {
            return Ok(None);
        };
        kinds.push(st.kind);
        cur = next;
    }
}

fn min_of<'a>(x: &'a Scalar, y: &'a Scalar) -> &'a Scalar {
    if cmp(x, y) == Ordering::Greater {
        y
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induced::{is_admissible, visitation_from_decomposition};

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn peel_small() {
        let path = peel_decompose(&im(&[&[1, 1], &[1, 2]]), &p(&[2, 1])).unwrap().unwrap();
        assert_eq!(path.kinds, vec![StepKind::R0, StepKind::R1]);
        assert_eq!(path.matrix().unwrap(), im(&[&[1, 1], &[1, 2]]));
        let empty = peel_decompose(&IntMatrix::identity(3), &p(&[3, 2, 1])).unwrap().unwrap();
        assert!(empty.is_empty());
        assert!(matches!(
            peel_decompose(&im(&[&[2, 0], &[0, 1]]), &p(&[2, 1])),
            Err(Error::InvalidProduct { index: 1, .. })
        ));
    }

    #[test]
    fn peel_rejects_unreachable() {
        // Unimodular and nonnegative, but a permutation matrix is no product of steps.
        assert_eq!(peel_decompose(&IntMatrix::reversal(2), &p(&[2, 1])).unwrap(), None);
    }

    #[test]
    fn weak_identity_keeps_everything() {
        let r = recover_weak(&[IntMatrix::identity(3)], 3).unwrap();
        assert_eq!(r.candidates.len(), 3);
        assert_eq!(r.prefix_counts, vec![3]);
    }

    #[test]
    fn two_by_two() {
        let bs = [im(&[&[1, 1], &[1, 2]])];
        assert_eq!(recover_weak(&bs, 2).unwrap().candidate_perms(), vec![p(&[2, 1])]);
        let r = recover_strict(&bs, 2).unwrap();
        assert_eq!(r.candidate_perms(), vec![p(&[2, 1])]);
        assert_eq!(r.candidates[0].paths.as_ref().unwrap()[0], vec![StepKind::R0, StepKind::R1]);
    }

    #[test]
    fn malformed_products() {
        let bad = IntMatrix::from_rows(vec![vec![1, 1], vec![1, 2], vec![1, 1]]).unwrap();
        assert!(matches!(recover_strict(std::slice::from_ref(&bad), 2), Err(Error::InvalidProduct { index: 1, .. })));
        assert!(matches!(
            recover_weak(&[IntMatrix::identity(2), bad], 2),
            Err(Error::InvalidProduct { index: 2, .. })
        ));
    }

    #[test]
    fn realize_golden() {
        let t = Iet::new(p(&[2, 1]), vec![Scalar::golden(), Scalar::one()]).unwrap();
        let j = SubInterval::new(Scalar::zero(), Scalar::golden()).unwrap();
        let path = realize_interval(&t, &j).unwrap().unwrap();
        assert_eq!(path.kinds, vec![StepKind::R1]);
        assert_eq!(path.matrix().unwrap(), visitation_from_decomposition(&t, &j).unwrap());
        assert!(realize_interval(&t, &SubInterval::domain(&t)).unwrap().unwrap().is_empty());
        let half = SubInterval::new(Scalar::zero(), Scalar::ratio(1, 2)).unwrap();
        assert_eq!(realize_interval(&t, &half).unwrap(), None);
        assert!(!is_admissible(&t, &half).unwrap().0);
    }
}
