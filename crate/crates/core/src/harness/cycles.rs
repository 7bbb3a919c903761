//! Rauzy cycles and their action on the nullspace of `L_pi`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::perm::{sigma_partition, Permutation};
use crate::rauzy::{elementary_matrix, permutation_step, StepKind};
use crate::recovery::RealizationPath;

/// Longest cycle length any enumeration accepts.
pub const MAX_CYCLE_LEN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sides {
    /// Right steps only.
    Right,
    /// Right and left steps.
    Extended,
}

impl Sides {
    pub fn kinds(self) -> &'static [StepKind] {
        match self {
            Sides::Right => &StepKind::RIGHT,
            Sides::Extended => &StepKind::ALL,
        }
    }
}

impl std::str::FromStr for Sides {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sides> {
        match s {
            "right" => Ok(Sides::Right),
            "extended" => Ok(Sides::Extended),
            _ => Err(Error::Parse(format!("unknown sides {s:?}"))),
        }
    }
}

fn check_len(max_len: usize) -> Result<()> {
    if max_len > MAX_CYCLE_LEN {
        return Err(Error::Precondition(format!(
            "cycle length {max_len} exceeds the bound {MAX_CYCLE_LEN}"
        )));
    }
    Ok(())
}

/// Visit every nonempty step sequence of length `<= max_len` from `pi`
/// that returns to `pi`, along with its product matrix.
pub fn walk_cycles<F>(pi: &Permutation, max_len: usize, sides: Sides, mut visit: F) -> Result<()>
where
    F: FnMut(&[StepKind], &IntMatrix) -> Result<()>,
{
    check_len(max_len)?;
    pi.require_irreducible()?;
    let mut kinds = Vec::with_capacity(max_len);
    walk(pi, pi, &IntMatrix::identity(pi.n()), max_len, sides, &mut kinds, &mut visit)
}

fn walk<F>(
    base: &Permutation,
    cur: &Permutation,
    acc: &IntMatrix,
    left: usize,
    sides: Sides,
    kinds: &mut Vec<StepKind>,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&[StepKind], &IntMatrix) -> Result<()>,
{
    if left == 0 {
        return Ok(());
    }
    for &k in sides.kinds() {
        let next = permutation_step(cur, k);
        let prod = acc.checked_mul(&elementary_matrix(cur, k))?;
        kinds.push(k);
        if &next == base {
            visit(kinds, &prod)?;
        }
        walk(base, &next, &prod, left - 1, sides, kinds, visit)?;
        kinds.pop();
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleEnumeration {
    pub base: Permutation,
    pub max_len: usize,
    pub sides: Sides,
    pub cycles: Vec<RealizationPath>,
}

/// All cycles at `pi` up to the given length, shortest first and in step
/// order within a length.
pub fn enumerate_cycles(pi: &Permutation, max_len: usize, sides: Sides) -> Result<CycleEnumeration> {
    let mut cycles = Vec::new();
    walk_cycles(pi, max_len, sides, |kinds, _| {
        cycles.push(RealizationPath {
            base: pi.clone(),
            kinds: kinds.to_vec(),
            end: pi.clone(),
        });
        Ok(())
    })?;
    cycles.sort_by(|a, b| a.kinds.len().cmp(&b.kinds.len()).then_with(|| a.kinds.cmp(&b.kinds)));
    Ok(CycleEnumeration {
        base: pi.clone(),
        max_len,
        sides,
        cycles,
    })
}

/// How a cycle matrix permutes the vectors `b_S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockAction {
    /// `B b_S = signs[S] * b_{target[S]}`, blocks indexed as in the partition.
    pub target: Vec<usize>,
    pub signs: Vec<i8>,
    /// Least `p` for which the signed block permutation is trivial.
    pub period: u64,
}

fn mul_pow_vec(b: &IntMatrix, v: &[i64], p: u64) -> Result<Vec<i64>> {
    let mut out = v.to_vec();
    for _ in 0..p {
        out = b.mul_int_vec(&out)?;
    }
    Ok(out)
}

/// Match each `B b_S` (over `from`) against the signed vectors `+-b_{S'}`
/// (over `to`), preferring the unsigned match. Fails unless this is a
/// bijection of blocks.
pub fn match_blocks(b: &IntMatrix, from: &Permutation, to: &Permutation) -> Result<(Vec<usize>, Vec<i8>)> {
    let src: Vec<Vec<i64>> = sigma_partition(from)?.b_vectors().into_iter().map(|m| m.values).collect();
    let part = sigma_partition(to)?;
    let dst: Vec<Vec<i64>> = part.b_vectors().into_iter().map(|m| m.values).collect();
    if src.len() != dst.len() {
        return Err(Error::Invariant(format!("{} blocks map to {} blocks", src.len(), dst.len())));
    }
    let mut target = Vec::with_capacity(src.len());
    let mut signs = Vec::with_capacity(src.len());
    for v in &src {
        let image = b.mul_int_vec(v)?;
        let neg: Vec<i64> = image.iter().map(|x| -x).collect();
        let hit = dst
            .iter()
            .position(|w| w == &image)
            .map(|t| (t, 1))
            .or_else(|| dst.iter().position(|w| w == &neg).map(|t| (t, -1)));
        let Some((t, sign)) = hit else {
            return Err(Error::Invariant(format!("{image:?} is not a signed b-vector of {to}")));
        };
        if target.contains(&t) {
            return Err(Error::Invariant("block images are not a bijection".into()));
        }
        target.push(t);
        signs.push(sign);
    }
    Ok((target, signs))
}

/// Signed block permutation of a cycle matrix at `pi`, its period `p`, and
/// an exact check of `B^p b_S = b_S`.
pub fn block_action(b: &IntMatrix, pi: &Permutation) -> Result<BlockAction> {
    let (target, signs) = match_blocks(b, pi, pi)?;
    let bs: Vec<Vec<i64>> = sigma_partition(pi)?.b_vectors().into_iter().map(|m| m.values).collect();
    let mut seen = vec![false; bs.len()];
    let mut period = 1u64;
    for start in 0..bs.len() {
        if seen[start] {
            continue;
        }
        let (mut len, mut sign, mut s) = (0u64, 1i8, start);
        while !seen[s] {
            seen[s] = true;
            sign *= signs[s];
            s = target[s];
            len += 1;
        }
        let order = if sign < 0 { 2 * len } else { len };
        period = period.lcm(&order);
    }
    for v in &bs {
        if &mul_pow_vec(b, v, period)? != v {
            return Err(Error::Invariant(format!("B^{period} b_S != b_S")));
        }
    }
    Ok(BlockAction { target, signs, period })
}

/// Block correspondence of a single step. With `lambda = A lambda'` the
/// matrix carries the successor's vectors back: `A b_{S'} = +-b_S`, indexed
/// over the successor's partition.
pub fn step_block_map(pi: &Permutation, kind: StepKind) -> Result<(Vec<usize>, Vec<i8>)> {
    match_blocks(&elementary_matrix(pi, kind), &permutation_step(pi, kind), pi)
}

/// Block action of a cycle's product matrix.
pub fn cycle_b_action(path: &RealizationPath) -> Result<BlockAction> {
    if !path.is_consistent() || path.base != path.end {
        return Err(Error::Precondition(format!("{path} is not a cycle")));
    }
    block_action(&path.matrix()?, &path.base)
}
