//! Extended Rauzy induction: right steps cut the shorter of the last interval
//! and the interval landing last; left steps do the same at the left end.
//!
//! Every step records its elementary visitation matrix `A`, which satisfies
//! `lambda = A lambda'` and `A^T L_pi A = L_pi'`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, Scalar};
use crate::iet::{cmp, Iet};
use crate::perm::{tau_dual, Permutation};

/// Default cap on the number of steps in a single drive.
pub const DEFAULT_STEP_CAP: usize = 10_000;
/// Default cap on orbit iterations when searching for returns.
pub const DEFAULT_ITERATION_CAP: usize = 1_000_000;

/// Iteration budgets shared by the engine, induced maps and realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub step_cap: usize,
    pub iteration_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            step_cap: DEFAULT_STEP_CAP,
            iteration_cap: DEFAULT_ITERATION_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    #[serde(rename = "R")]
    Right,
    #[serde(rename = "L")]
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "R",
            Side::Left => "L",
        })
    }
}

/// Side plus type: `Right/0` cuts from the right keeping the last interval's
/// label, `Right/1` inserts; the left kinds are their mirror images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepKind {
    pub side: Side,
    pub kind: u8,
}

impl StepKind {
    pub const R0: StepKind = StepKind { side: Side::Right, kind: 0 };
    pub const R1: StepKind = StepKind { side: Side::Right, kind: 1 };
    pub const L0: StepKind = StepKind { side: Side::Left, kind: 0 };
    pub const L1: StepKind = StepKind { side: Side::Left, kind: 1 };
    /// Search order used throughout: `R0 < R1 < L0 < L1`.
    pub const ALL: [StepKind; 4] = [StepKind::R0, StepKind::R1, StepKind::L0, StepKind::L1];
    pub const RIGHT: [StepKind; 2] = [StepKind::R0, StepKind::R1];

    pub fn new(side: Side, kind: u8) -> Result<StepKind> {
        if kind > 1 {
            return Err(Error::Parse(format!("step type {kind} is not 0 or 1")));
        }
        Ok(StepKind { side, kind })
    }

    /// The same type on the opposite side.
    pub fn mirrored(self) -> StepKind {
        let side = match self.side {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        };
        StepKind { side, kind: self.kind }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Right => 'R',
            Side::Left => 'L',
        };
        write!(f, "{s}{}", self.kind)
    }
}

impl FromStr for StepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<StepKind> {
        match s {
            "R0" => Ok(StepKind::R0),
            "R1" => Ok(StepKind::R1),
            "L0" => Ok(StepKind::L0),
            "L1" => Ok(StepKind::L1),
            _ => Err(Error::Parse(format!("unknown step kind {s:?}"))),
        }
    }
}

impl Serialize for StepKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The visitation matrix of one step of the given kind from `pi`.
///
/// With `m = pi^{-1}(n)` and `m' = pi^{-1}(1)`:
/// * `R0`: `I + E_{n,m}`;
/// * `R1`: `A_ij = 1` iff `i = j <= m`, or `j = i+1` with `m <= i < n`, or `(i,j) = (n, m+1)`;
/// * `L0`: `I + E_{1,m'}`;
/// * `L1`: `A_ij = 1` iff `i = j >= m'`, or `j = i-1` with `1 < i <= m'`, or `(i,j) = (1, m'-1)`.
pub fn elementary_matrix(pi: &Permutation, kind: StepKind) -> IntMatrix {
    let n = pi.n();
    let mut a = IntMatrix::zeros(n, n);
    // 1-based setter
    let mut set = |i: usize, j: usize| a[(i - 1, j - 1)] = 1;
    match (kind.side, kind.kind) {
        (Side::Right, 0) => {
            let m = pi.inverse_at(n);
            (1..=n).for_each(|i| set(i, i));
            set(n, m);
        }
        (Side::Right, _) => {
            let m = pi.inverse_at(n);
            (1..=m).for_each(|i| set(i, i));
            (m..n).for_each(|i| set(i, i + 1));
            set(n, m + 1);
        }
        (Side::Left, 0) => {
            let m = pi.inverse_at(1);
            (1..=n).for_each(|i| set(i, i));
            set(1, m);
        }
        (Side::Left, _) => {
            let m = pi.inverse_at(1);
            (m..=n).for_each(|i| set(i, i));
            (2..=m).for_each(|i| set(i, i - 1));
            set(1, m - 1);
        }
    }
    a
}

/// The permutation after one step of the given kind.
pub fn permutation_step(pi: &Permutation, kind: StepKind) -> Permutation {
    let n = pi.n();
    let image: Vec<usize> = match (kind.side, kind.kind) {
        (Side::Right, 0) => {
            let m = pi.inverse_at(n);
            let last = pi.at(n);
            (1..=n)
                .map(|i| {
                    let v = pi.at(i);
                    if i == m {
                        last + 1
                    } else if v > last {
                        v + 1
                    } else {
                        // v < pi(n), or i = n itself
                        v
                    }
                })
                .collect()
        }
        (Side::Right, _) => {
            let m = pi.inverse_at(n);
            (1..=n)
                .map(|i| match i.cmp(&(m + 1)) {
                    Ordering::Less => pi.at(i),
                    Ordering::Equal => pi.at(n),
                    Ordering::Greater => pi.at(i - 1),
                })
                .collect()
        }
        (Side::Left, 0) => {
            let m = pi.inverse_at(1);
            let first = pi.at(1);
            (1..=n)
                .map(|i| {
                    let v = pi.at(i);
                    if i == m {
                        first - 1
                    } else if v < first {
                        v - 1
                    } else {
                        v
                    }
                })
                .collect()
        }
        (Side::Left, _) => {
            let m = pi.inverse_at(1);
            (1..=n)
                .map(|i| match (i + 1).cmp(&m) {
                    Ordering::Less => pi.at(i + 1),
                    Ordering::Equal => pi.at(1),
                    Ordering::Greater => pi.at(i),
                })
                .collect()
        }
    };
    Permutation::new(image).expect("Rauzy steps map permutations to permutations")
}

/// One recorded step of induction.
#[derive(Clone, Debug, PartialEq)]
pub struct InductionStep {
    pub kind: StepKind,
    pub pre_perm: Permutation,
    pub post_perm: Permutation,
    pub matrix: IntMatrix,
}

fn check_transport(before: &[Scalar], a: &IntMatrix, after: &[Scalar]) -> Result<()> {
    if a.mul_scalar_vec(after)? != before {
        return Err(Error::Invariant("lambda != A lambda' after a Rauzy step".into()));
    }
    Ok(())
}

/// One right step. `m = pi^{-1}(n)`; type 0 iff `lambda_n > lambda_m`.
pub fn step_right(t: &Iet) -> Result<(InductionStep, Iet)> {
    let pi = t.permutation();
    let n = pi.n();
    let m = pi.inverse_at(n);
    let (ln, lm) = (t.length(n), t.length(m));
    let lambda = t.lengths();
    let (kind, lengths) = match cmp(ln, lm) {
        Ordering::Equal => return Err(Error::Tie { step: 1 }),
        Ordering::Greater => {
            let mut l = lambda.to_vec();
            l[n - 1] = ln - lm;
            (StepKind::R0, l)
        }
        Ordering::Less => {
            let l = (1..=n)
                .map(|i| match i.cmp(&m) {
                    Ordering::Less => lambda[i - 1].clone(),
                    Ordering::Equal => lm - ln,
                    Ordering::Greater if i == m + 1 => ln.clone(),
                    Ordering::Greater => lambda[i - 2].clone(),
                })
                .collect();
            (StepKind::R1, l)
        }
    };
    finish_step(t, kind, lengths, t.origin().clone())
}

/// One left step. `m' = pi^{-1}(1)`; type 0 iff `lambda_1 > lambda_{m'}`.
/// The successor keeps absolute coordinates, so its origin moves right.
pub fn step_left(t: &Iet) -> Result<(InductionStep, Iet)> {
    let pi = t.permutation();
    let n = pi.n();
    let m = pi.inverse_at(1);
    let (l1, lm) = (t.length(1), t.length(m));
    let lambda = t.lengths();
    let (kind, lengths, cut) = match cmp(l1, lm) {
        Ordering::Equal => return Err(Error::Tie { step: 1 }),
        Ordering::Greater => {
            let mut l = lambda.to_vec();
            l[0] = l1 - lm;
            (StepKind::L0, l, lm.clone())
        }
        Ordering::Less => {
            let l = (1..=n)
                .map(|i| match (i + 1).cmp(&m) {
                    Ordering::Less => lambda[i].clone(),
                    Ordering::Equal => l1.clone(),
                    Ordering::Greater if i == m => lm - l1,
                    Ordering::Greater => lambda[i - 1].clone(),
                })
                .collect();
            (StepKind::L1, l, l1.clone())
        }
    };
    finish_step(t, kind, lengths, t.origin() + &cut)
}

fn finish_step(t: &Iet, kind: StepKind, lengths: Vec<Scalar>, origin: Scalar) -> Result<(InductionStep, Iet)> {
    let pre = t.permutation().clone();
    let post = permutation_step(&pre, kind);
    let matrix = elementary_matrix(&pre, kind);
    check_transport(t.lengths(), &matrix, &lengths)?;
    let next = Iet::with_origin(post.clone(), lengths, origin)?;
    Ok((
        InductionStep {
            kind,
            pre_perm: pre,
            post_perm: post,
            matrix,
        },
        next,
    ))
}

pub fn step(t: &Iet, side: Side) -> Result<(InductionStep, Iet)> {
    match side {
        Side::Right => step_right(t),
        Side::Left => step_left(t),
    }
}

/// How a drive chooses the side of each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Policy {
    AlwaysRight,
    AlwaysLeft,
    /// Right, left, right, ...
    Alternate,
    /// Explicit sides, one per step.
    Sides(Vec<Side>),
    /// Uniform random sides from a ChaCha stream with this seed.
    Seeded(u64),
}

impl Policy {
    /// The side schedule for `steps` steps.
    pub fn schedule(&self, steps: usize) -> Result<Vec<Side>> {
        Ok(match self {
            Policy::AlwaysRight => vec![Side::Right; steps],
            Policy::AlwaysLeft => vec![Side::Left; steps],
            Policy::Alternate => (0..steps)
                .map(|k| if k % 2 == 0 { Side::Right } else { Side::Left })
                .collect(),
            Policy::Sides(s) => {
                if s.len() < steps {
                    return Err(Error::Policy(format!("{} sides given for {steps} steps", s.len())));
                }
                s[..steps].to_vec()
            }
            Policy::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..steps)
                    .map(|_| if rng.gen::<bool>() { Side::Right } else { Side::Left })
                    .collect()
            }
        })
    }
}

impl FromStr for Policy {
    type Err = Error;
    /// `right`, `left`, `alternate`, `seed:<u64>` or a side list like `R,L,R`.
    fn from_str(s: &str) -> Result<Policy> {
        match s {
            "right" => Ok(Policy::AlwaysRight),
            "left" => Ok(Policy::AlwaysLeft),
            "alternate" => Ok(Policy::Alternate),
            _ => {
                if let Some(seed) = s.strip_prefix("seed:") {
                    return seed
                        .parse()
                        .map(Policy::Seeded)
                        .map_err(|_| Error::Parse(format!("bad seed in {s:?}")));
                }
                s.split(',')
                    .map(|t| match t.trim() {
                        "R" | "r" => Ok(Side::Right),
                        "L" | "l" => Ok(Side::Left),
                        other => Err(Error::Parse(format!("unknown policy or side {other:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Policy::Sides)
            }
        }
    }
}

/// A finite run of extended Rauzy induction.
#[derive(Clone, Debug)]
pub struct InductionTrace {
    pub initial: Iet,
    pub steps: Vec<InductionStep>,
    /// `states[k]` is the IET after `k + 1` steps.
    pub states: Vec<Iet>,
}

impl InductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn n(&self) -> usize {
        self.initial.n()
    }

    pub fn kinds(&self) -> Vec<StepKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }

    pub fn matrices(&self) -> Vec<IntMatrix> {
        self.steps.iter().map(|s| s.matrix.clone()).collect()
    }

    pub fn last_state(&self) -> &Iet {
        self.states.last().unwrap_or(&self.initial)
    }

    /// `A_1 ... A_N`.
    pub fn product(&self) -> Result<IntMatrix> {
        IntMatrix::product(self.n(), self.steps.iter().map(|s| &s.matrix))
    }

    /// `A_j ... A_k`, 1-based and inclusive.
    pub fn window_product(&self, j: usize, k: usize) -> Result<IntMatrix> {
        if j == 0 || j > k || k > self.len() {
            return Err(Error::InvalidCuts(format!("window [{j}, {k}] in a trace of {}", self.len())));
        }
        IntMatrix::product(self.n(), self.steps[j - 1..k].iter().map(|s| &s.matrix))
    }
}

/// Run `steps` steps of induction with the given policy.
pub fn drive(t: &Iet, policy: &Policy, steps: usize) -> Result<InductionTrace> {
    drive_with_limits(t, policy, steps, &Limits::default())
}

pub fn drive_with_limits(t: &Iet, policy: &Policy, steps: usize, limits: &Limits) -> Result<InductionTrace> {
    if steps == 0 {
        return Err(Error::Precondition("a drive needs at least one step".into()));
    }
    if steps > limits.step_cap {
        return Err(Error::StepCapExceeded { cap: limits.step_cap });
    }
    let schedule = policy.schedule(steps)?;
    let mut trace = InductionTrace {
        initial: t.clone(),
        steps: Vec::with_capacity(steps),
        states: Vec::with_capacity(steps),
    };
    let mut cur = t.clone();
    for (k, side) in schedule.into_iter().enumerate() {
        let (st, next) = step(&cur, side).map_err(|e| match e {
            Error::Tie { .. } => Error::Tie { step: k + 1 },
            other => other,
        })?;
        trace.steps.push(st);
        trace.states.push(next.clone());
        cur = next;
    }
    Ok(trace)
}

/// Consecutive products `B_l = A_{k_{l-1}+1} ... A_{k_l}` with `k_0 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedProducts {
    pub cuts: Vec<usize>,
    pub products: Vec<IntMatrix>,
}

/// Group the trace's matrices at the given (strictly increasing, positive)
/// cut indices.
pub fn group_products(trace: &InductionTrace, cuts: &[usize]) -> Result<GroupedProducts> {
    let mut prev = 0;
    let mut products = Vec::with_capacity(cuts.len());
    for &c in cuts {
        if c <= prev {
            return Err(Error::InvalidCuts(format!("{cuts:?} is not strictly increasing from 1")));
        }
        if c > trace.len() {
            return Err(Error::InvalidCuts(format!("cut {c} beyond trace of {} steps", trace.len())));
        }
        products.push(trace.window_product(prev + 1, c)?);
        prev = c;
    }
    Ok(GroupedProducts {
        cuts: cuts.to_vec(),
        products,
    })
}

/// Least `k >= j` such that `A_j ... A_k` is entrywise positive.
pub fn first_positive_window(trace: &InductionTrace, j: usize) -> Result<Option<usize>> {
    if j == 0 || j > trace.len() {
        return Ok(None);
    }
    let mut acc = IntMatrix::identity(trace.n());
    for k in j..=trace.len() {
        acc = acc.checked_mul(&trace.steps[k - 1].matrix)?;
        if acc.is_positive() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Exact evidence that right induction on `t` never stops: the projective
/// state `(pi, lambda / |lambda|)` after `preperiod + period` steps equals the
/// state after `preperiod` steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Periodicity {
    pub preperiod: usize,
    pub period: usize,
    /// Product of the step matrices over one period.
    pub matrix: IntMatrix,
}

impl Periodicity {
    /// A positive period matrix makes every window eventually positive.
    pub fn is_primitive(&self) -> Result<bool> {
        let n = self.matrix.rows();
        let mut acc = self.matrix.clone();
        // A primitive nonnegative matrix has a positive power of exponent at most (n-1)^2 + 1.
        for _ in 0..((n - 1) * (n - 1)) {
            if acc.is_positive() {
                return Ok(true);
            }
            acc = acc.checked_mul(&self.matrix)?;
        }
        Ok(acc.is_positive())
    }
}

/// Run right induction looking for an exact projective repeat. `Ok(None)`
/// means undecided within `max_steps`; a tie is reported as an error, since
/// it proves the orbit condition fails.
pub fn find_periodicity(t: &Iet, max_steps: usize) -> Result<Option<Periodicity>> {
    let normalize = |x: &Iet| -> Result<(Permutation, Vec<Scalar>)> {
        let total = x.total_length();
        let lengths = x.lengths().iter().map(|l| l.checked_div(total)).collect::<Result<_>>()?;
        Ok((x.permutation().clone(), lengths))
    };
    let mut seen = vec![normalize(t)?];
    let mut matrices = Vec::new();
    let mut cur = t.clone();
    for k in 1..=max_steps {
        let (st, next) = step_right(&cur).map_err(|e| match e {
            Error::Tie { .. } => Error::Tie { step: k },
            other => other,
        })?;
        matrices.push(st.matrix);
        let state = normalize(&next)?;
        if let Some(pre) = seen.iter().position(|s| s == &state) {
            let matrix = IntMatrix::product(t.n(), matrices[pre..].iter())?;
            return Ok(Some(Periodicity {
                preperiod: pre,
                period: k - pre,
                matrix,
            }));
        }
        seen.push(state);
        cur = next;
    }
    Ok(None)
}

/// Elementary matrix of a left step computed through the reversal duality
/// `A_{pi, left} = P A_{pi_tau, right} P`. Used to cross-check
/// [`elementary_matrix`].
pub fn dual_elementary_matrix(pi: &Permutation, kind: StepKind) -> IntMatrix {
    elementary_matrix(&tau_dual(pi), kind.mirrored()).reversed()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::l_matrix;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn golden_swap() -> Iet {
        Iet::new(p(&[2, 1]), vec![Scalar::golden(), Scalar::one()]).unwrap()
    }

    #[test]
    fn elementary_matrices() {
        assert_eq!(elementary_matrix(&p(&[2, 1]), StepKind::R0), im(&[&[1, 0], &[1, 1]]));
        assert_eq!(elementary_matrix(&p(&[2, 1]), StepKind::R1), im(&[&[1, 1], &[0, 1]]));
        assert_eq!(
            elementary_matrix(&p(&[3, 2, 1]), StepKind::R1),
            im(&[&[1, 1, 0], &[0, 0, 1], &[0, 1, 0]])
        );
        assert_eq!(
            elementary_matrix(&p(&[3, 2, 1]), StepKind::R0),
            im(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]])
        );
    }

    #[test]
    fn permutation_steps() {
        assert_eq!(permutation_step(&p(&[3, 2, 1]), StepKind::R0), p(&[2, 3, 1]));
        assert_eq!(permutation_step(&p(&[3, 2, 1]), StepKind::R1), p(&[3, 1, 2]));
        for k in StepKind::ALL {
            assert_eq!(permutation_step(&p(&[2, 1]), k), p(&[2, 1]));
        }
    }

    #[test]
    fn left_steps_are_dual_to_right_steps() {
        for n in 2..=5 {
            for pi in Permutation::irreducible(n) {
                for k in [StepKind::L0, StepKind::L1] {
                    assert_eq!(elementary_matrix(&pi, k), dual_elementary_matrix(&pi, k), "{pi} {k}");
                    let via_dual = tau_dual(&permutation_step(&tau_dual(&pi), k.mirrored()));
                    assert_eq!(permutation_step(&pi, k), via_dual, "{pi} {k}");
                }
            }
        }
    }

    #[test]
    fn conjugation_on_small_classes() {
        for n in 2..=4 {
            for pi in Permutation::irreducible(n) {
                for k in StepKind::ALL {
                    let a = elementary_matrix(&pi, k);
                    let post = permutation_step(&pi, k);
                    let lhs = &(&a.transpose() * l_matrix(&pi).matrix()) * &a;
                    assert_eq!(&lhs, l_matrix(&post).matrix(), "{pi} {k}");
                    assert!(post.is_irreducible());
                }
            }
        }
    }

    #[test]
    fn golden_right_step() {
        let (st, next) = step_right(&golden_swap()).unwrap();
        assert_eq!(st.kind, StepKind::R1);
        assert_eq!(st.matrix, im(&[&[1, 1], &[0, 1]]));
        let expected = Scalar::quad_ratio(-1, 2, 1, 2, 5).unwrap();
        assert_eq!(next.lengths(), &[expected, Scalar::one()]);
    }

    #[test]
    fn golden_left_step() {
        let (st, next) = step_left(&golden_swap()).unwrap();
        assert_eq!(st.kind, StepKind::L0);
        assert_eq!(st.matrix, im(&[&[1, 1], &[0, 1]]));
        let expected = Scalar::quad_ratio(-1, 2, 1, 2, 5).unwrap();
        assert_eq!(next.lengths(), &[expected, Scalar::one()]);
        assert_eq!(next.origin(), &Scalar::one());
    }

    #[test]
    fn ties() {
        let t = Iet::new(p(&[2, 1]), vec![Scalar::one(), Scalar::one()]).unwrap();
        assert_eq!(step_right(&t).unwrap_err(), Error::Tie { step: 1 });
        assert_eq!(step_left(&t).unwrap_err(), Error::Tie { step: 1 });
    }

    #[test]
    fn reversal_type_zero() {
        let t = Iet::new(p(&[3, 2, 1]), vec![Scalar::ratio(1, 4), Scalar::ratio(1, 4), Scalar::ratio(1, 2)]).unwrap();
        let (st, next) = step_right(&t).unwrap();
        assert_eq!(st.kind, StepKind::R0);
        assert_eq!(st.post_perm, p(&[2, 3, 1]));
        assert_eq!(st.matrix, im(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1]]));
        assert_eq!(next.lengths()[2], Scalar::ratio(1, 4));
    }

    #[test]
    fn golden_drive() {
        let trace = drive(&golden_swap(), &Policy::AlwaysRight, 3).unwrap();
        let kinds: Vec<u8> = trace.steps.iter().map(|s| s.kind.kind).collect();
        assert_eq!(kinds, vec![1, 0, 1]);
        let b = trace.product().unwrap();
        assert_eq!(b, im(&[&[2, 3], &[1, 2]]));
        assert_eq!(
            b.mul_scalar_vec(trace.last_state().lengths()).unwrap(),
            trace.initial.lengths()
        );
    }

    #[test]
    fn drive_errors() {
        assert!(matches!(drive(&golden_swap(), &Policy::AlwaysRight, 0), Err(Error::Precondition(_))));
        let t = Iet::new(p(&[2, 1]), vec![Scalar::ratio(2, 3), Scalar::ratio(1, 3)]).unwrap();
        assert_eq!(drive(&t, &Policy::AlwaysRight, 10).unwrap_err(), Error::Tie { step: 2 });
        let limits = Limits { step_cap: 5, ..Limits::default() };
        assert_eq!(
            drive_with_limits(&golden_swap(), &Policy::AlwaysRight, 6, &limits).unwrap_err(),
            Error::StepCapExceeded { cap: 5 }
        );
        assert!(matches!(
            drive(&golden_swap(), &Policy::Sides(vec![Side::Right]), 2),
            Err(Error::Policy(_))
        ));
    }

    #[test]
    fn grouping() {
        let trace = drive(&golden_swap(), &Policy::AlwaysRight, 3).unwrap();
        let g = group_products(&trace, &[2, 3]).unwrap();
        assert_eq!(g.products, vec![im(&[&[2, 1], &[1, 1]]), im(&[&[1, 1], &[0, 1]])]);
        let g = group_products(&trace, &[1, 2, 3]).unwrap();
        assert_eq!(g.products, trace.matrices());
        assert!(matches!(group_products(&trace, &[3, 1]), Err(Error::InvalidCuts(_))));
        assert!(matches!(group_products(&trace, &[0, 1]), Err(Error::InvalidCuts(_))));
        assert!(matches!(group_products(&trace, &[4]), Err(Error::InvalidCuts(_))));
    }

    #[test]
    fn positive_windows() {
        let trace = drive(&golden_swap(), &Policy::AlwaysRight, 3).unwrap();
        assert_eq!(first_positive_window(&trace, 1).unwrap(), Some(2));
        let one = drive(&golden_swap(), &Policy::AlwaysRight, 1).unwrap();
        assert_eq!(first_positive_window(&one, 1).unwrap(), None);
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("right".parse::<Policy>().unwrap(), Policy::AlwaysRight);
        assert_eq!("R,L".parse::<Policy>().unwrap(), Policy::Sides(vec![Side::Right, Side::Left]));
        assert_eq!("seed:7".parse::<Policy>().unwrap(), Policy::Seeded(7));
        assert!("sideways".parse::<Policy>().is_err());
        assert_eq!(
            Policy::Alternate.schedule(3).unwrap(),
            vec![Side::Right, Side::Left, Side::Right]
        );
    }

    #[test]
    fn golden_swap_is_periodic() {
        let t = Iet::new(p(&[2, 1]), vec![Scalar::golden(), Scalar::one()]).unwrap();
        let per = find_periodicity(&t, 10).unwrap().unwrap();
        assert_eq!((per.preperiod, per.period), (0, 2));
        assert_eq!(per.matrix, im(&[&[2, 1], &[1, 1]]));
        assert!(per.is_primitive().unwrap());
        let rational = Iet::new(p(&[2, 1]), vec![Scalar::ratio(3, 2), Scalar::one()]).unwrap();
        assert!(matches!(find_periodicity(&rational, 10), Err(Error::Tie { .. })));
    }
}
