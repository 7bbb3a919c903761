//! Interval exchange transformations over exact scalars.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::perm::Permutation;

/// The exchange of `n` half-open intervals `I_j = [origin + beta_{j-1},
/// origin + beta_j)` whose `j`-th piece lands in position `pi(j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Iet {
    pi: Permutation,
    lengths: Vec<Scalar>,
    /// `beta_0 = 0, ..., beta_n = |lambda|`, relative to `origin`.
    breakpoints: Vec<Scalar>,
    translations: Vec<Scalar>,
    origin: Scalar,
    #[serde(skip)]
    abs_breaks: Vec<Scalar>,
    #[serde(skip)]
    image_starts: Vec<Scalar>,
}

impl Iet {
    pub fn new(pi: Permutation, lengths: Vec<Scalar>) -> Result<Iet> {
        Iet::with_origin(pi, lengths, Scalar::zero())
    }

    pub fn with_origin(pi: Permutation, lengths: Vec<Scalar>, origin: Scalar) -> Result<Iet> {
        pi.require_irreducible()?;
        let n = pi.n();
        if lengths.len() != n {
            return Err(Error::DimensionMismatch(format!("{} lengths for n = {n}", lengths.len())));
        }
        for (i, l) in lengths.iter().enumerate() {
            if !l.is_positive() {
                return Err(Error::NonPositiveLength { index: i + 1 });
            }
        }
        // Reject mixed quadratic contexts up front; afterwards operator
        // arithmetic on these values cannot fail.
        lengths.iter().try_fold(origin.clone(), |acc, l| acc.checked_add(l))?;

        let mut breakpoints = Vec::with_capacity(n + 1);
        breakpoints.push(Scalar::zero());
        for l in &lengths {
            let next = breakpoints.last().expect("nonempty") + l;
            breakpoints.push(next);
        }
        let translations = pi.l_matrix().matrix().mul_scalar_vec(&lengths)?;

        let mut image_starts = Vec::with_capacity(n);
        for j in 1..=n {
            let before: Scalar = (1..=n)
                .filter(|&i| pi.at(i) < pi.at(j))
                .map(|i| lengths[i - 1].clone())
                .sum();
            // omega_j = sum_{pi(i) < pi(j)} lambda_i - sum_{k < j} lambda_k
            debug_assert_eq!(&before - &breakpoints[j - 1], translations[j - 1]);
            image_starts.push(&origin + &before);
        }
        let abs_breaks = breakpoints.iter().map(|b| &origin + b).collect();
        Ok(Iet {
            pi,
            lengths,
            breakpoints,
            translations,
            origin,
            abs_breaks,
            image_starts,
        })
    }

    pub fn n(&self) -> usize {
        self.pi.n()
    }

    pub fn permutation(&self) -> &Permutation {
        &self.pi
    }

    pub fn lengths(&self) -> &[Scalar] {
        &self.lengths
    }

    pub fn length(&self, j: usize) -> &Scalar {
        &self.lengths[j - 1]
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    /// `omega = L_pi lambda`.
    pub fn translations(&self) -> &[Scalar] {
        &self.translations
    }

    pub fn origin(&self) -> &Scalar {
        &self.origin
    }

    /// Right endpoint (excluded) of the domain.
    pub fn end(&self) -> &Scalar {
        self.abs_breaks.last().expect("n >= 2")
    }

    pub fn total_length(&self) -> &Scalar {
        self.breakpoints.last().expect("n >= 2")
    }

    /// Absolute left endpoint of `I_j`.
    pub fn interval_start(&self, j: usize) -> &Scalar {
        &self.abs_breaks[j - 1]
    }

    /// Absolute breakpoints `origin + beta_j`, `0 <= j <= n`.
    pub fn absolute_breakpoints(&self) -> &[Scalar] {
        &self.abs_breaks
    }

    /// Quadratic discriminant shared by all data, if any.
    pub fn context(&self) -> Option<u32> {
        self.lengths.iter().chain([&self.origin]).find_map(Scalar::context)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        cmp(x, &self.origin) != Ordering::Less && cmp(x, self.end()) == Ordering::Less
    }

    /// Index `j` (1-based) of the interval `I_j` containing `x`.
    pub fn interval_of(&self, x: &Scalar) -> Result<usize> {
        if x.context().is_some() && self.context().is_some() && x.context() != self.context() {
            return Err(Error::ContextMismatch(x.context().unwrap(), self.context().unwrap()));
        }
        if !self.contains(x) {
            return Err(Error::Domain(x.to_string()));
        }
        // Largest j with start_j <= x.
        let idx = self.abs_breaks[1..self.n()].partition_point(|b| cmp(b, x) != Ordering::Greater);
        Ok(idx + 1)
    }

    /// `T(x) = x + omega_j` for `x` in `I_j`.
    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar> {
        let j = self.interval_of(x)?;
        Ok(x + &self.translations[j - 1])
    }

    /// `T^{-1}(y)`.
    pub fn inverse_evaluate(&self, y: &Scalar) -> Result<Scalar> {
        if !self.contains(y) {
            return Err(Error::Domain(y.to_string()));
        }
        let n = self.n();
        // Images are laid out in position order; take the last one starting at or before y.
        let pos = (1..=n)
            .rev()
            .find(|&p| {
                let j = self.pi.inverse_at(p);
                cmp(&self.image_starts[j - 1], y) != Ordering::Greater
            })
            .expect("y lies in the domain");
        let j = self.pi.inverse_at(pos);
        Ok(y - &self.translations[j - 1])
    }

    /// Same exchange with the domain shifted to start at `origin`.
    pub fn translated_to(&self, origin: Scalar) -> Result<Iet> {
        Iet::with_origin(self.pi.clone(), self.lengths.clone(), origin)
    }
}

pub(crate) fn cmp(x: &Scalar, y: &Scalar) -> Ordering {
    x.try_cmp(y).unwrap_or_else(|e| panic!("{e}"))
}

/// Build an IET on `[0, |lambda|)`.
pub fn make_iet(pi: Permutation, lengths: Vec<Scalar>) -> Result<Iet> {
    Iet::new(pi, lengths)
}

/// Evaluate `T(x)`.
pub fn evaluate(t: &Iet, x: &Scalar) -> Result<Scalar> {
    t.evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn half() -> Scalar {
        Scalar::ratio(1, 2)
    }

    #[test]
    fn swap_translations() {
        let t = make_iet(p(&[2, 1]), vec![half(), half()]).unwrap();
        assert_eq!(t.translations(), &[half(), -half()]);
    }

    #[test]
    fn breakpoints_are_partial_sums() {
        let t = make_iet(p(&[3, 2, 1]), vec![Scalar::ratio(1, 4), Scalar::ratio(1, 4), half()]).unwrap();
        assert_eq!(t.breakpoints()[1..], [Scalar::ratio(1, 4), half(), Scalar::one()]);
    }

    #[test]
    fn reducible_is_rejected() {
        let err = make_iet(p(&[2, 1, 3]), vec![Scalar::one(); 3]).unwrap_err();
        assert!(matches!(err, Error::Reducible(_)));
    }

    #[test]
    fn non_positive_length() {
        let err = make_iet(p(&[2, 1]), vec![Scalar::one(), Scalar::zero()]).unwrap_err();
        assert_eq!(err, Error::NonPositiveLength { index: 2 });
        let err = make_iet(p(&[2, 1]), vec![Scalar::one()]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let err = make_iet(p(&[2, 1]), vec![Scalar::golden(), Scalar::silver()]).unwrap_err();
        assert_eq!(err, Error::ContextMismatch(5, 2));
    }

    #[test]
    fn evaluate_swap() {
        let t = make_iet(p(&[2, 1]), vec![half(), half()]).unwrap();
        assert_eq!(t.evaluate(&Scalar::ratio(1, 4)).unwrap(), Scalar::ratio(3, 4));
        assert_eq!(t.evaluate(&Scalar::ratio(3, 4)).unwrap(), Scalar::ratio(1, 4));
        assert!(matches!(t.evaluate(&Scalar::one()), Err(Error::Domain(_))));
        assert!(matches!(t.evaluate(&Scalar::ratio(-1, 4)), Err(Error::Domain(_))));
        assert_eq!(t.evaluate(&Scalar::zero()).unwrap(), half());
        assert_eq!(t.evaluate(&half()).unwrap(), Scalar::zero());
    }

    #[test]
    fn inverse_undoes_evaluate() {
        let phi = Scalar::golden();
        let t = make_iet(p(&[3, 1, 2]), vec![phi.clone(), Scalar::one(), Scalar::ratio(2, 3)]).unwrap();
        let mut x = Scalar::ratio(1, 7);
        for _ in 0..50 {
            let y = t.evaluate(&x).unwrap();
            assert_eq!(t.inverse_evaluate(&y).unwrap(), x);
            x = y;
        }
    }

    #[test]
    fn origin_shifts_everything() {
        let t = Iet::with_origin(p(&[2, 1]), vec![half(), half()], Scalar::int(3)).unwrap();
        assert_eq!(t.evaluate(&Scalar::ratio(13, 4)).unwrap(), Scalar::ratio(15, 4));
        assert!(t.evaluate(&Scalar::ratio(1, 4)).is_err());
        assert_eq!(t.end(), &Scalar::int(4));
    }
}
