//! Brute-force check that a positive cycle product determines its base
//! permutation.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exact::IntMatrix;
use crate::perm::Permutation;
use crate::rauzy::StepKind;
use crate::recovery::Peeler;

use super::cycles::{walk_cycles, Sides};

pub const DEFAULT_UNIQUENESS_LEN: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessOptions {
    pub max_len: usize,
    pub sides: Sides,
    /// Stop early (and flag the report partial) after this much wall time.
    pub time_budget: Option<Duration>,
}

impl Default for UniquenessOptions {
    fn default() -> Self {
        UniquenessOptions {
            max_len: DEFAULT_UNIQUENESS_LEN,
            sides: Sides::Extended,
            time_budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub pi: Permutation,
    pub cycle: Vec<StepKind>,
    pub other: Permutation,
    pub other_cycle: Vec<StepKind>,
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub n: usize,
    pub max_len: usize,
    pub permutations: usize,
    /// All cycles walked.
    pub cycles: u64,
    /// Cycles with an entrywise positive product.
    pub positive_cycles: u64,
    /// Distinct positive products, counted per base permutation.
    pub distinct_products: u64,
    pub violations: Vec<Violation>,
    pub partial: bool,
}

#[derive(Default)]
struct PerBase {
    cycles: u64,
    positive: u64,
    distinct: u64,
    violations: Vec<Violation>,
    partial: bool,
}

fn check_base(pi: &Permutation, all: &[Permutation], opts: &UniquenessOptions, start: Instant) -> Result<PerBase> {
    let mut out = PerBase::default();
    let mut products: BTreeMap<IntMatrix, Vec<StepKind>> = BTreeMap::new();
    walk_cycles(pi, opts.max_len, opts.sides, |kinds, b| {
        out.cycles += 1;
        if b.is_positive() {
            out.positive += 1;
            products.entry(b.clone()).or_insert_with(|| kinds.to_vec());
        }
        Ok(())
    })?;
    out.distinct = products.len() as u64;
    let mut peeler = Peeler::new();
    for (b, cycle) in products {
        if opts.time_budget.is_some_and(|budget| start.elapsed() > budget) {
            out.partial = true;
            break;
        }
        for other in all.iter().filter(|o| *o != pi) {
            if let Some(path) = peeler.all_ends(other, &b)?.remove(other) {
                out.violations.push(Violation {
                    pi: pi.clone(),
                    cycle: cycle.clone(),
                    other: other.clone(),
                    other_cycle: path,
                    matrix: b.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// For every irreducible `pi` and every cycle at `pi` up to `max_len` with
/// a positive product `B`, look for another irreducible `pi'` at which `B`
/// also factors as a cycle.
pub fn uniqueness_check(n: usize, opts: &UniquenessOptions) -> Result<UniquenessReport> {
    let all = Permutation::irreducible(n);
    let start = Instant::now();
    let per: Vec<PerBase> = all
        .par_iter()
        .map(|pi| check_base(pi, &all, opts, start))
        .collect::<Result<_>>()?;
    let mut report = UniquenessReport {
        n,
        max_len: opts.max_len,
        permutations: all.len(),
        ..UniquenessReport::default()
    };
    for p in per {
        report.cycles += p.cycles;
        report.positive_cycles += p.positive;
        report.distinct_products += p.distinct;
        report.violations.extend(p.violations);
        report.partial |= p.partial;
    }
    Ok(report)
}
