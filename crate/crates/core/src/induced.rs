//! First-return maps on sub-intervals and their natural decompositions.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, Scalar};
use crate::iet::{cmp, Iet};
use crate::perm::Permutation;
use crate::rauzy::DEFAULT_ITERATION_CAP;

/// Half-open interval `[a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubInterval {
    pub a: Scalar,
    pub b: Scalar,
}

impl SubInterval {
    pub fn new(a: Scalar, b: Scalar) -> Result<SubInterval> {
        if a.try_cmp(&b)? != Ordering::Less {
            return Err(Error::DegenerateInterval(format!("[{a}, {b})")));
        }
        Ok(SubInterval { a, b })
    }

    /// The whole domain of `t`.
    pub fn domain(t: &Iet) -> SubInterval {
        SubInterval {
            a: t.origin().clone(),
            b: t.end().clone(),
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        cmp(x, &self.a) != Ordering::Less && cmp(x, &self.b) == Ordering::Less
    }

    pub fn length(&self) -> Scalar {
        &self.b - &self.a
    }

    pub fn is_within(&self, t: &Iet) -> bool {
        cmp(&self.a, t.origin()) != Ordering::Less && cmp(&self.b, t.end()) != Ordering::Greater
    }

    pub fn shifted(&self, by: &Scalar) -> SubInterval {
        SubInterval {
            a: &self.a + by,
            b: &self.b + by,
        }
    }
}

impl fmt::Display for SubInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.a, self.b)
    }
}

/// Where a discontinuity of the return map comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutSource {
    /// The left endpoint `a` itself.
    LeftEndpoint,
    /// First backward entry of `a` into `[a, b)`.
    BackwardFromA,
    BackwardFromB,
    /// First backward entry of the domain origin.
    BackwardFromOrigin,
    /// First backward entry (possibly after zero steps) of the breakpoint `beta_i`.
    BackwardFromBreak(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutMark {
    pub at: Scalar,
    pub source: CutSource,
    /// Number of backward steps taken.
    pub steps: usize,
}

/// Sorted, distinct cut points in `[a, b)`. When several sources hit the
/// same point the first one in source order is kept.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutPointSet {
    pub marks: Vec<CutMark>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub interval: SubInterval,
    pub return_time: usize,
    /// 1-based indices of the intervals visited by `x, T x, ..., T^{r-1} x`.
    pub word: Vec<usize>,
    /// `T^r x - x` on this piece.
    pub translation: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NaturalDecomposition {
    pub interval: SubInterval,
    pub cuts: CutPointSet,
    pub pieces: Vec<Piece>,
}

impl NaturalDecomposition {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Index of the piece containing `x`.
    pub fn piece_of(&self, x: &Scalar) -> Option<usize> {
        self.pieces.iter().position(|p| p.interval.contains(x))
    }
}

fn check_inside(t: &Iet, j: &SubInterval) -> Result<()> {
    if let (Some(c), Some(d)) = (t.context(), j.a.context().or(j.b.context())) {
        if c != d {
            return Err(Error::ContextMismatch(d, c));
        }
    }
    if !j.is_within(t) {
        return Err(Error::Domain(format!("{j} is not inside the domain")));
    }
    Ok(())
}

/// Least `k >= 1` with `T^k x` in `J`, together with the word and `T^k x`.
fn forward_return(t: &Iet, j: &SubInterval, x: &Scalar, cap: usize) -> Result<(Vec<usize>, Scalar)> {
    let mut word = Vec::new();
    let mut y = x.clone();
    for _ in 0..cap {
        let i = t.interval_of(&y)?;
        word.push(i);
        y = &y + &t.translations()[i - 1];
        if j.contains(&y) {
            return Ok((word, y));
        }
    }
    Err(Error::ReturnOverflow { cap })
}

/// First return time of `x` to `J`.
pub fn return_time(t: &Iet, j: &SubInterval, x: &Scalar) -> Result<usize> {
    return_time_capped(t, j, x, DEFAULT_ITERATION_CAP)
}

pub fn return_time_capped(t: &Iet, j: &SubInterval, x: &Scalar, cap: usize) -> Result<usize> {
    check_inside(t, j)?;
    if !j.contains(x) {
        return Err(Error::Domain(format!("{x} is not in {j}")));
    }
    Ok(forward_return(t, j, x, cap)?.0.len())
}

/// Walk backward from `z` (starting after `skip` steps) until the orbit
/// enters `J`. `None` if the orbit closes up without entering.
fn backward_entry(t: &Iet, j: &SubInterval, z: &Scalar, skip: usize, cap: usize) -> Result<Option<(Scalar, usize)>> {
    if !t.contains(z) {
        return Ok(None);
    }
    let mut w = z.clone();
    for _ in 0..skip {
        w = t.inverse_evaluate(&w)?;
    }
    let mut k = skip;
    while k <= cap {
        if j.contains(&w) {
            return Ok(Some((w, k)));
        }
        if k > 0 && &w == z {
            return Ok(None);
        }
        w = t.inverse_evaluate(&w)?;
        k += 1;
    }
    Err(Error::ReturnOverflow { cap })
}

/// Cut points of the first-return map to `J`: the left endpoint plus the
/// first backward entries of `a`, `b`, the origin and the interior
/// breakpoints.
pub fn cut_points(t: &Iet, j: &SubInterval, cap: usize) -> Result<CutPointSet> {
    check_inside(t, j)?;
    let mut marks = vec![CutMark {
        at: j.a.clone(),
        source: CutSource::LeftEndpoint,
        steps: 0,
    }];
    let mut sources = vec![
        (j.a.clone(), CutSource::BackwardFromA, 1),
        (j.b.clone(), CutSource::BackwardFromB, 1),
        (t.origin().clone(), CutSource::BackwardFromOrigin, 1),
    ];
    for i in 1..t.n() {
        // A breakpoint inside J is itself a cut, hence zero skipped steps.
        sources.push((t.interval_start(i + 1).clone(), CutSource::BackwardFromBreak(i), 0));
    }
    for (z, source, skip) in sources {
        if let Some((at, steps)) = backward_entry(t, j, &z, skip, cap)? {
            if !marks.iter().any(|m| m.at == at) {
                marks.push(CutMark { at, source, steps });
            }
        }
    }
    marks.sort_by(|x, y| cmp(&x.at, &y.at));
    Ok(CutPointSet { marks })
}

/// Partition of `J` into maximal intervals with a common return word.
pub fn natural_decomposition(t: &Iet, j: &SubInterval) -> Result<NaturalDecomposition> {
    natural_decomposition_capped(t, j, DEFAULT_ITERATION_CAP)
}

pub fn natural_decomposition_capped(t: &Iet, j: &SubInterval, cap: usize) -> Result<NaturalDecomposition> {
    let cuts = cut_points(t, j, cap)?;
    let mut pieces = Vec::with_capacity(cuts.marks.len());
    for (k, mark) in cuts.marks.iter().enumerate() {
        let end = cuts.marks.get(k + 1).map_or(&j.b, |m| &m.at);
        let (word, image) = forward_return(t, j, &mark.at, cap)?;
        pieces.push(Piece {
            interval: SubInterval {
                a: mark.at.clone(),
                b: end.clone(),
            },
            return_time: word.len(),
            word,
            translation: &image - &mark.at,
        });
    }
    Ok(NaturalDecomposition {
        interval: j.clone(),
        cuts,
        pieces,
    })
}

/// Whether the natural decomposition of `J` has exactly `n` pieces.
pub fn is_admissible(t: &Iet, j: &SubInterval) -> Result<(bool, NaturalDecomposition)> {
    let d = natural_decomposition(t, j)?;
    Ok((d.len() == t.n(), d))
}

fn require_admissible(t: &Iet, d: &NaturalDecomposition) -> Result<()> {
    if d.len() != t.n() {
        return Err(Error::NotAdmissible {
            n: t.n(),
            pieces: d.len(),
        });
    }
    Ok(())
}

/// `A_ij` = number of visits of piece `j` to `I_i` before returning, so
/// that `lambda = A lambda'`.
pub fn visitation_matrix(t: &Iet, d: &NaturalDecomposition) -> Result<IntMatrix> {
    require_admissible(t, d)?;
    let n = t.n();
    let mut a = IntMatrix::zeros(n, n);
    for (col, piece) in d.pieces.iter().enumerate() {
        for &i in &piece.word {
            a[(i - 1, col)] += 1;
        }
    }
    let lengths: Vec<Scalar> = d.pieces.iter().map(|p| p.interval.length()).collect();
    if a.mul_scalar_vec(&lengths)? != t.lengths() {
        return Err(Error::Invariant(
            "return towers over the sub-interval do not cover the domain".into(),
        ));
    }
    Ok(a)
}

pub fn visitation_from_decomposition(t: &Iet, j: &SubInterval) -> Result<IntMatrix> {
    let d = natural_decomposition(t, j)?;
    visitation_matrix(t, &d)
}

/// The induced map as an IET on `[a, b)` in the ambient coordinates.
pub fn induced_iet_in_place(t: &Iet, d: &NaturalDecomposition) -> Result<Iet> {
    require_admissible(t, d)?;
    let n = t.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        let px = &d.pieces[x];
        let py = &d.pieces[y];
        cmp(&(&px.interval.a + &px.translation), &(&py.interval.a + &py.translation))
    });
    let mut image = vec![0; n];
    for (pos, &piece) in order.iter().enumerate() {
        image[piece] = pos + 1;
    }
    let lengths = d.pieces.iter().map(|p| p.interval.length()).collect();
    let induced = Iet::with_origin(Permutation::new(image)?, lengths, d.interval.a.clone())?;
    for (p, w) in d.pieces.iter().zip(induced.translations()) {
        if &p.translation != w {
            return Err(Error::Invariant("induced translations disagree with return images".into()));
        }
    }
    Ok(induced)
}

/// The induced map, translated so that its domain starts at 0.
pub fn induced_iet(t: &Iet, j: &SubInterval) -> Result<Iet> {
    let d = natural_decomposition(t, j)?;
    induced_iet_in_place(t, &d)?.translated_to(Scalar::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn golden_swap() -> Iet {
        Iet::new(p(&[2, 1]), vec![Scalar::golden(), Scalar::one()]).unwrap()
    }

    fn inv_golden() -> Scalar {
        Scalar::quad_ratio(-1, 2, 1, 2, 5).unwrap()
    }

    #[test]
    fn return_times_of_rational_swap() {
        let t = Iet::new(p(&[2, 1]), vec![Scalar::ratio(2, 3), Scalar::ratio(1, 3)]).unwrap();
        let j = SubInterval::new(Scalar::zero(), Scalar::ratio(1, 3)).unwrap();
        assert_eq!(return_time(&t, &j, &Scalar::zero()).unwrap(), 3);
        assert_eq!(return_time(&t, &j, &Scalar::ratio(1, 4)).unwrap(), 3);
        assert!(matches!(return_time(&t, &j, &Scalar::ratio(1, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn degenerate_interval() {
        assert!(matches!(
            SubInterval::new(Scalar::one(), Scalar::one()),
            Err(Error::DegenerateInterval(_))
        ));
    }

    #[test]
    fn golden_decomposition() {
        let t = golden_swap();
        let j = SubInterval::new(Scalar::zero(), Scalar::golden()).unwrap();
        let d = natural_decomposition(&t, &j).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.pieces[0].interval.b, inv_golden());
        assert_eq!(d.pieces[0].word, vec![1]);
        assert_eq!(d.pieces[1].word, vec![1, 2]);
        let a = visitation_matrix(&t, &d).unwrap();
        assert_eq!(a, IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap());
        let induced = induced_iet(&t, &j).unwrap();
        assert_eq!(induced.permutation(), &p(&[2, 1]));
        assert_eq!(induced.lengths(), &[inv_golden(), Scalar::one()]);
    }

    #[test]
    fn full_domain_is_trivial() {
        let t = Iet::new(p(&[3, 1, 2]), vec![Scalar::golden(), Scalar::one(), Scalar::ratio(1, 3)]).unwrap();
        let j = SubInterval::domain(&t);
        let d = natural_decomposition(&t, &j).unwrap();
        assert!(d.pieces.iter().all(|p| p.return_time == 1));
        assert_eq!(visitation_matrix(&t, &d).unwrap(), IntMatrix::identity(3));
        assert_eq!(induced_iet(&t, &j).unwrap(), t);
    }

    #[test]
    fn golden_half_is_not_admissible() {
        let t = golden_swap();
        let j = SubInterval::new(Scalar::zero(), Scalar::ratio(1, 2)).unwrap();
        let (ok, d) = is_admissible(&t, &j).unwrap();
        assert!(!ok);
        assert_eq!(d.len(), 3);
        assert_eq!(
            visitation_matrix(&t, &d).unwrap_err(),
            Error::NotAdmissible { n: 2, pieces: 3 }
        );
        assert!(induced_iet(&t, &j).is_err());
    }

    #[test]
    fn single_right_step_interval() {
        let t = Iet::new(p(&[3, 2, 1]), vec![Scalar::ratio(1, 4), Scalar::ratio(1, 4), Scalar::ratio(1, 2)]).unwrap();
        let j = SubInterval::new(Scalar::zero(), Scalar::ratio(3, 4)).unwrap();
        let a = visitation_from_decomposition(&t, &j).unwrap();
        assert_eq!(a, crate::rauzy::elementary_matrix(t.permutation(), crate::rauzy::StepKind::R0));
    }

    #[test]
    fn periodic_orbits_hit_the_cap() {
        let t = Iet::new(p(&[2, 1]), vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)]).unwrap();
        let j = SubInterval::new(Scalar::zero(), Scalar::ratio(1, 4)).unwrap();
        // 0 -> 1/2 -> 0 returns fine; the cap only matters for orbits that never come back.
        assert_eq!(return_time(&t, &j, &Scalar::zero()).unwrap(), 2);
        let j = SubInterval::new(Scalar::ratio(1, 8), Scalar::ratio(1, 4)).unwrap();
        assert_eq!(
            return_time_capped(&t, &j, &Scalar::ratio(1, 8), 1).unwrap_err(),
            Error::ReturnOverflow { cap: 1 }
        );
    }
}
