//! Dense exact matrices.
//!
//! Integer matrices (`IntMatrix`, `i64` entries with checked arithmetic) carry
//! the skew forms, elementary and product visitation matrices. Rational
//! matrices are only used for rank and nullspace computations, which run a
//! fraction-free elimination on an integer copy.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<i64>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Build from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// The reversal permutation matrix `P_n`, `(P_n)_{ij} = 1` iff `i + j = n + 1`
    /// in 1-based indices.
    pub fn reversal(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, n - 1 - i)] = T::one();
        }
        m
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a.checked_mul(rhs[(k, j)]).ok_or(Error::Overflow)?;
                    out[(i, j)] = out[(i, j)].checked_add(t).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Ordered product of a list of square matrices of size `n`; identity if empty.
    pub fn product<'a, I: IntoIterator<Item = &'a IntMatrix>>(n: usize, factors: I) -> Result<IntMatrix> {
        factors
            .into_iter()
            .try_fold(IntMatrix::identity(n), |acc, m| acc.checked_mul(m))
    }

    pub fn checked_pow(&self, p: u32) -> Result<IntMatrix> {
        let mut out = IntMatrix::identity(self.rows);
        for _ in 0..p {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector".into()));
        }
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).try_fold(0i64, |acc, (a, x)| {
                    a.checked_mul(*x).and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow)
                })
            })
            .collect()
    }

    /// Apply to a vector of exact scalars (all in one context).
    pub fn mul_scalar_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector".into()));
        }
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| **a != 0)
                    .try_fold(Scalar::zero(), |acc, (a, x)| acc.checked_add(&x.scale(*a)))
            })
            .collect()
    }

    pub fn mul_rational_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, x)| acc + x * Rational::from_integer(BigInt::from(*a)))
            })
            .collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0)
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&x| x > 0)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == -self[(j, i)]))
    }

    pub fn entry_sum(&self) -> i128 {
        self.data.iter().map(|&x| i128::from(x)).sum()
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|&x| Rational::from_integer(BigInt::from(x)))
    }

    /// Exact determinant by Bareiss elimination over big integers.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = self.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
    }

    /// Exact integer inverse of a matrix with determinant `+1` or `-1`.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let det = self.determinant()?;
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let n = self.rows;
        // Gauss-Jordan over Q on [A | I]; the result is integral because det = ±1.
        let mut a = self.to_rational().to_rows();
        let mut inv = RatMatrix::identity(n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("det is nonzero");
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
        let data = inv
            .into_iter()
            .flatten()
            .map(|x| {
                debug_assert!(x.is_integer());
                x.to_integer().to_i64().ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_vec(n, n, data)
    }

    /// `P_n M P_n`: reverse both row and column order.
    pub fn reversed(&self) -> IntMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(self.rows - 1 - i, self.cols - 1 - j)];
            }
        }
        out
    }
}

impl Mul<&IntMatrix> for &IntMatrix {
    type Output = IntMatrix;
    /// Panics on overflow or shape mismatch; use [`IntMatrix::checked_mul`] in
    /// library code.
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Scale each row to integers (row scaling preserves kernel and rank).
fn integer_rows(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free reduced echelon form. Returns the reduced rows and the pivot
/// column of each nonzero row. Rows stay integral; each is kept primitive.
fn echelon(m: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        make_primitive(&mut a[r]);
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let (pv, f) = (a[r][c].clone(), a[i][c].clone());
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x = &*x * &pv - y * &f;
            }
            make_primitive(&mut a[i]);
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(pivots.len());
    (a, pivots)
}

impl RatMatrix {
    pub fn rank(&self) -> usize {
        echelon(self).1.len()
    }

    /// Basis of `{v : M v = 0}` as primitive integer vectors (stored as
    /// rationals). Empty iff `M` is injective.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (rows, pivots) = echelon(self);
        let cols = self.cols();
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let l = rows
            .iter()
            .zip(&pivots)
            .fold(BigInt::one(), |acc, (row, &p)| acc.lcm(&row[p]));
        free.iter()
            .map(|&f| {
                let mut v = vec![BigInt::zero(); cols];
                v[f] = l.clone();
                for (row, &p) in rows.iter().zip(&pivots) {
                    v[p] = -(&row[f] * &l) / &row[p];
                }
                make_primitive(&mut v);
                v.into_iter().map(Rational::from_integer).collect()
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch("matrix-vector".into()));
        }
        Ok((0..self.rows())
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, x)| acc + a * x))
            .collect())
    }
}

/// Nullspace basis of a rational matrix (see [`RatMatrix::nullspace`]).
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    m.nullspace()
}

/// `u^T L v` for an anti-symmetric integer matrix `L`.
pub fn bilinear(u: &[Scalar], l: &IntMatrix, v: &[Scalar]) -> Result<Scalar> {
    if !l.is_antisymmetric() {
        return Err(Error::NotAntiSymmetric);
    }
    if u.len() != l.rows() || v.len() != l.cols() {
        return Err(Error::DimensionMismatch("bilinear form".into()));
    }
    let lv = l.mul_scalar_vec(v)?;
    u.iter()
        .zip(&lv)
        .try_fold(Scalar::zero(), |acc, (x, y)| acc.checked_add(&x.checked_mul(y)?))
}

/// Matrix JSON: `{"rows":n,"cols":m,"entries":[[...],...]}`, entries in scalar
/// text encoding. Plain JSON integers are accepted on input.
#[derive(Serialize, Deserialize)]
struct MatrixRepr<E> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<E>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x.to_string()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<IntMatrix, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::<Scalar>::deserialize(de)?;
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(D::Error::custom("matrix shape does not match rows/cols"));
        }
        let data = repr
            .entries
            .into_iter()
            .flatten()
            .map(|x| {
                x.as_rational()
                    .filter(|r| r.is_integer())
                    .and_then(|r| r.to_integer().to_i64())
                    .ok_or_else(|| D::Error::custom(format!("entry {x} is not a 64-bit integer")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntMatrix::from_vec(repr.rows, repr.cols, data).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn ints(v: &[Rational]) -> Vec<i64> {
        v.iter().map(|x| x.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn nullspace_of_swap_form_is_trivial() {
        assert!(im(&[&[0, 1], &[-1, 0]]).to_rational().nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_zero_matrix_is_everything() {
        let ns = IntMatrix::zeros(2, 2).to_rational().nullspace();
        assert_eq!(ns.len(), 2);
    }

    #[test]
    fn nullspace_of_reversal_form() {
        let ns = im(&[&[0, 1, 1], &[-1, 0, 1], &[-1, -1, 0]]).to_rational().nullspace();
        assert_eq!(ns.len(), 1);
        let v = ints(&ns[0]);
        assert!(v == vec![1, -1, 1] || v == vec![-1, 1, -1], "{v:?}");
    }

    #[test]
    fn rational_entries_are_cleared() {
        let m = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 1), rat(2, 3)]]).unwrap();
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn bilinear_basics() {
        let l = im(&[&[0, 1], &[-1, 0]]);
        let e1 = vec![Scalar::one(), Scalar::zero()];
        let e2 = vec![Scalar::zero(), Scalar::one()];
        assert_eq!(bilinear(&e1, &l, &e2).unwrap(), Scalar::one());
        assert_eq!(bilinear(&e2, &l, &e1).unwrap(), -Scalar::one());
        assert_eq!(bilinear(&e1, &im(&[&[0, 1], &[1, 0]]), &e2), Err(Error::NotAntiSymmetric));
    }

    #[test]
    fn unimodular_inverses() {
        assert_eq!(IntMatrix::identity(3).unimodular_inverse().unwrap(), IntMatrix::identity(3));
        assert_eq!(im(&[&[1, 1], &[0, 1]]).unimodular_inverse().unwrap(), im(&[&[1, -1], &[0, 1]]));
        assert!(matches!(
            im(&[&[2, 0], &[0, 1]]).unimodular_inverse(),
            Err(Error::NotUnimodular(d)) if d == "2"
        ));
        let p = IntMatrix::reversal(3);
        assert_eq!(p.unimodular_inverse().unwrap(), p);
    }

    #[test]
    fn determinant_with_pivoting() {
        assert_eq!(im(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(im(&[&[2, 3, 1], &[4, 1, 0], &[1, 1, 1]]).determinant().unwrap(), BigInt::from(-7));
        assert_eq!(im(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 1]]).determinant().unwrap(), BigInt::from(-5));
    }

    #[test]
    fn overflow_is_reported() {
        let big = im(&[&[i64::MAX, 1], &[1, 1]]);
        assert_eq!(big.checked_mul(&big), Err(Error::Overflow));
    }

    #[test]
    fn json_shape() {
        let m = im(&[&[1, 1], &[0, 1]]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"rows":2,"cols":2,"entries":[["1","1"],["0","1"]]}"#);
        let back: IntMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let loose: IntMatrix = serde_json::from_str(r#"{"rows":2,"cols":2,"entries":[[1,1],[0,1]]}"#).unwrap();
        assert_eq!(loose, m);
        assert!(serde_json::from_str::<IntMatrix>(r#"{"rows":2,"cols":2,"entries":[[1,1]]}"#).is_err());
        assert!(serde_json::from_str::<IntMatrix>(r#"{"rows":1,"cols":1,"entries":[["1/2"]]}"#).is_err());
    }
}
