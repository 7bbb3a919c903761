//! Sign-definite rows of `L_pi - c L_pi'` and the exclusion of positive
//! vectors from the nullspaces of such pencils.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Rational, RatMatrix};
use crate::perm::{l_matrix, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedRow {
    /// 1-based row index.
    pub row: usize,
    /// `1` if the row is nonnegative, `-1` if nonpositive.
    pub sign: i8,
    #[serde(serialize_with = "ser_rationals")]
    pub values: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Row `i` (1-based) of `L_pi - c L_pi'`.
pub fn pencil_row(pi: &Permutation, other: &Permutation, c: &Rational, i: usize) -> Vec<Rational> {
    let l = l_matrix(pi);
    let m = l_matrix(other);
    (0..pi.n())
        .map(|j| Rational::from_integer(l.matrix()[(i - 1, j)].into()) - c * Rational::from_integer(m.matrix()[(i - 1, j)].into()))
        .collect()
}

fn definite_sign(values: &[Rational]) -> Option<i8> {
    let pos = values.iter().any(|x| x.is_positive());
    let neg = values.iter().any(|x| x.is_negative());
    match (pos, neg) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}

fn choose_row(pi: &Permutation, other: &Permutation, c: &Rational) -> (usize, bool) {
    let n = pi.n();
    let one = Rational::from_integer(1.into());
    if !c.is_positive() {
        (1, false)
    } else if c < &one {
        (pi.inverse_at(n), false)
    } else if c == &one {
        let l = l_matrix(pi);
        let m = l_matrix(other);
        let row = (1..=n)
            .filter(|&i| l.matrix().row(i - 1) != m.matrix().row(i - 1))
            .max_by_key(|&i| pi.at(i))
            .expect("distinct permutations have distinct forms");
        (row, false)
    } else {
        // L_pi - c L_pi' = -c (L_pi' - c^{-1} L_pi)
        let (row, _) = choose_row(other, pi, &c.recip());
        (row, true)
    }
}

/// A nonzero sign-definite row of `L_pi - c L_pi'`, chosen by the value of
/// `c` and checked exactly.
pub fn sign_definite_row(pi: &Permutation, other: &Permutation, c: &Rational) -> Result<SignedRow> {
    if pi == other {
        return Err(Error::Precondition("the two permutations must differ".into()));
    }
    if pi.n() != other.n() {
        return Err(Error::DimensionMismatch(format!("{pi} vs {other}")));
    }
    pi.require_irreducible()?;
    other.require_irreducible()?;
    let (row, _) = choose_row(pi, other, c);
    let values = pencil_row(pi, other, c, row);
    let sign = definite_sign(&values)
        .ok_or_else(|| Error::Invariant(format!("row {row} of L_{pi} - ({c}) L_{other} is not sign-definite")))?;
    Ok(SignedRow { row, sign, values })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub passed: bool,
    /// 1-based rows `(i, j)` of a nonzero 2x2 minor of `[L_pi v | L_pi' v]`.
    pub witness: Option<(usize, usize)>,
}

fn require_positive(v: &[Rational], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("{} entries for n = {n}", v.len())));
    }
    if let Some(i) = v.iter().position(|x| !x.is_positive()) {
        return Err(Error::NonPositiveLength { index: i + 1 });
    }
    Ok(())
}

fn apply_l(pi: &Permutation, v: &[Rational]) -> Vec<Rational> {
    l_matrix(pi).matrix().mul_rational_vec(v).expect("dimensions checked")
}

/// No `c` (real or complex) puts the positive vector `v` in the nullspace
/// of `L_pi - c L_pi'`: equivalently `[L_pi v | L_pi' v]` has rank 2.
pub fn positive_vector_exclusion(pi: &Permutation, other: &Permutation, v: &[Rational]) -> Result<Exclusion> {
    if pi == other {
        return Err(Error::Precondition("the two permutations must differ".into()));
    }
    if pi.n() != other.n() {
        return Err(Error::DimensionMismatch(format!("{pi} vs {other}")));
    }
    require_positive(v, pi.n())?;
    let x = apply_l(pi, v);
    let y = apply_l(other, v);
    let n = pi.n();
    for i in 0..n {
        for j in i + 1..n {
            if !(&x[i] * &y[j] - &x[j] * &y[i]).is_zero() {
                return Ok(Exclusion {
                    passed: true,
                    witness: Some((i + 1, j + 1)),
                });
            }
        }
    }
    Ok(Exclusion {
        passed: false,
        witness: None,
    })
}

/// `L_pi v != 0` for a positive `v`; the whole statement when only one
/// irreducible permutation exists.
pub fn positive_vector_not_null(pi: &Permutation, v: &[Rational]) -> Result<Exclusion> {
    require_positive(v, pi.n())?;
    let x = apply_l(pi, v);
    let witness = x.iter().position(|e| !e.is_zero());
    Ok(Exclusion {
        passed: witness.is_some(),
        witness: witness.map(|i| (i + 1, i + 1)),
    })
}

/// Rank of `[L_pi v | L_pi' v]`, for reporting.
pub fn pencil_rank(pi: &Permutation, other: &Permutation, v: &[Rational]) -> usize {
    let x = apply_l(pi, v);
    let y = apply_l(other, v);
    let rows = x.into_iter().zip(y).map(|(a, b)| vec![a, b]).collect();
    RatMatrix::from_rows(rows).expect("two columns").rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn rats(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn reversal_against_rotation() {
        let (a, b) = (p(&[3, 2, 1]), p(&[2, 3, 1]));
        let r = sign_definite_row(&a, &b, &rat(1, 1)).unwrap();
        assert_eq!((r.row, r.sign), (1, 1));
        assert_eq!(r.values, rats(&[(0, 1), (1, 1), (0, 1)]));
        let r = sign_definite_row(&a, &b, &rat(0, 1)).unwrap();
        assert_eq!((r.row, r.sign), (1, 1));
        assert_eq!(r.values, rats(&[(0, 1), (1, 1), (1, 1)]));
        let r = sign_definite_row(&a, &b, &rat(1, 2)).unwrap();
        assert_eq!((r.row, r.sign), (1, 1));
        assert_eq!(r.values, rats(&[(0, 1), (1, 1), (1, 2)]));
    }

    #[test]
    fn large_c_flips_sign() {
        let (a, b) = (p(&[3, 2, 1]), p(&[2, 3, 1]));
        let r = sign_definite_row(&a, &b, &rat(2, 1)).unwrap();
        assert_eq!(r.row, b.inverse_at(3));
        assert_eq!(r.sign, -1);
    }

    #[test]
    fn equal_permutations_are_rejected() {
        let a = p(&[3, 2, 1]);
        assert!(matches!(sign_definite_row(&a, &a, &rat(1, 1)), Err(Error::Precondition(_))));
        let swap = p(&[2, 1]);
        assert!(positive_vector_exclusion(&swap, &swap, &rats(&[(1, 1), (1, 1)])).is_err());
    }

    #[test]
    fn exclusion_examples() {
        let (a, b) = (p(&[3, 2, 1]), p(&[2, 3, 1]));
        let v = rats(&[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(apply_l(&a, &v), rats(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(apply_l(&b, &v), rats(&[(1, 1), (1, 1), (-2, 1)]));
        assert!(positive_vector_exclusion(&a, &b, &v).unwrap().passed);
        assert_eq!(pencil_rank(&a, &b, &v), 2);
        let swap = p(&[2, 1]);
        assert!(positive_vector_not_null(&swap, &rats(&[(1, 1), (1, 1)])).unwrap().passed);
        assert!(matches!(
            positive_vector_exclusion(&a, &b, &rats(&[(1, 1), (0, 1), (1, 1)])),
            Err(Error::NonPositiveLength { index: 2 })
        ));
    }
}
