//! Exhaustive and sampled checks of the algebra behind recovery.

pub mod cycles;
pub mod uniqueness;
pub mod rows;
pub mod spectral;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::scalar::rat;
use crate::exact::{IntMatrix, Rational};
use crate::perm::{l_matrix, nullity, sigma_partition, Permutation};
use crate::sample::{random_positive_vector, random_rational};

pub use cycles::{block_action, cycle_b_action, enumerate_cycles, step_block_map, walk_cycles, CycleEnumeration, Sides};
pub use uniqueness::{uniqueness_check, UniquenessOptions, UniquenessReport};
pub use rows::{positive_vector_exclusion, positive_vector_not_null, sign_definite_row};
pub use spectral::{perron, pf_pairing_check, PairingStatus, PairingTolerances, SpectralReport};

/// Outcome of one verification suite.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub cases: u64,
    pub failures: Vec<String>,
    pub skipped: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SuiteReport {
    fn new(suite: &str, n: usize) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            n,
            ..SuiteReport::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `#Sigma(pi) = dim N_pi + 1`, every `b_S` lies in `N_pi`, and the `b_S`
/// span it.
pub fn sigma_suite(n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("sigma", n);
    for pi in Permutation::irreducible(n) {
        r.cases += 1;
        let part = sigma_partition(&pi)?;
        let dim = nullity(&pi);
        if part.len() != dim + 1 {
            r.failures.push(format!("{pi}: {} blocks, nullity {dim}", part.len()));
            continue;
        }
        let l = l_matrix(&pi);
        let bs: Vec<Vec<i64>> = part.b_vectors().into_iter().map(|m| m.values).collect();
        if bs.iter().any(|b| l.matrix().mul_int_vec(b).map_or(true, |v| v.iter().any(|&x| x != 0))) {
            r.failures.push(format!("{pi}: some b_S is not in the nullspace"));
            continue;
        }
        let rank = IntMatrix::from_rows(bs)?.to_rational().rank();
        if rank != dim {
            r.failures.push(format!("{pi}: b_S span has rank {rank}, nullity {dim}"));
        }
    }
    Ok(r)
}

/// Every cycle up to `max_len` at every irreducible `pi` acts on the
/// `b_S` with a finite period.
pub fn cycles_suite(n: usize, max_len: usize, sides: Sides) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("cycles", n);
    for pi in Permutation::irreducible(n) {
        walk_cycles(&pi, max_len, sides, |kinds, b| {
            r.cases += 1;
            if let Err(e) = block_action(b, &pi) {
                r.failures.push(format!("{pi} {kinds:?}: {e}"));
            }
            Ok(())
        })?;
    }
    Ok(r)
}

/// The fixed grid of `c` values always tried.
pub fn c_grid() -> Vec<Rational> {
    vec![rat(-3, 1), rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)]
}

fn distinct_pairs(n: usize) -> Vec<(Permutation, Permutation)> {
    let all = Permutation::irreducible(n);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a != b {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Sign-definite rows for every ordered pair of distinct irreducible
/// permutations, over the grid plus `samples` random `c`.
pub fn signrows_suite(n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("signrows", n);
    r.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cs = c_grid();
    cs.extend((0..samples).map(|_| random_rational(&mut rng, -4, 4, 9)));
    for (a, b) in distinct_pairs(n) {
        for c in &cs {
            r.cases += 1;
            if let Err(e) = sign_definite_row(&a, &b, c) {
                r.failures.push(format!("{a} {b} c={c}: {e}"));
            }
        }
    }
    Ok(r)
}

/// Positive vectors escape every pencil `L_pi - c L_pi'`; for `n = 2` only
/// `L_pi v != 0` can be asked.
pub fn exclusion_suite(n: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("exclusion", n);
    r.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = distinct_pairs(n);
    if pairs.is_empty() {
        for pi in Permutation::irreducible(n) {
            for _ in 0..samples {
                r.cases += 1;
                let v = random_positive_vector(&mut rng, n);
                if !positive_vector_not_null(&pi, &v)?.passed {
                    r.failures.push(format!("{pi}: L v = 0"));
                }
            }
        }
    }
    for (a, b) in pairs {
        for _ in 0..samples {
            r.cases += 1;
            let v = random_positive_vector(&mut rng, n);
            if !positive_vector_exclusion(&a, &b, &v)?.passed {
                let text: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                r.failures.push(format!("{a} {b} v=({})", text.join(",")));
            }
        }
    }
    Ok(r)
}

/// Distinct positive cycle products up to `max_len`, in enumeration order.
pub fn positive_cycle_products(n: usize, max_len: usize, sides: Sides) -> Result<Vec<(Permutation, IntMatrix)>> {
    let mut out = Vec::new();
    for pi in Permutation::irreducible(n) {
        let mut seen = BTreeSet::new();
        walk_cycles(&pi, max_len, sides, |_, b| {
            if b.is_positive() && seen.insert(b.clone()) {
                out.push((pi.clone(), b.clone()));
            }
            Ok(())
        })?;
    }
    Ok(out)
}

/// Eigenvector pairing on up to `samples` positive cycle products, spread
/// evenly over the enumeration.
pub fn pf_suite(n: usize, max_len: usize, samples: usize, tol: &PairingTolerances) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("pf", n);
    let all = positive_cycle_products(n, max_len, Sides::Extended)?;
    if all.is_empty() || samples == 0 {
        return Ok(r);
    }
    let stride = (all.len() / samples).max(1);
    for (pi, b) in all.iter().step_by(stride).take(samples) {
        r.cases += 1;
        match pf_pairing_check(b, pi, tol) {
            Ok(rep) => match rep.status {
                PairingStatus::Pass => {}
                PairingStatus::Skipped => r.skipped += 1,
                PairingStatus::Fail => r
                    .failures
                    .push(format!("{pi} {b}: {}", rep.reason.unwrap_or_default())),
            },
            Err(Error::NonConvergence { .. }) => r.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for n in 2..=4 {
            assert!(sigma_suite(n).unwrap().passed());
            assert!(cycles_suite(n, 4, Sides::Extended).unwrap().passed());
            assert!(signrows_suite(n, 5, 1).unwrap().passed());
            assert!(exclusion_suite(n, 3, 1).unwrap().passed());
        }
    }
}
