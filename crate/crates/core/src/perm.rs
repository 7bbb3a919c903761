//! Permutations, their skew forms `L_pi`, and Veech's orbit partition.
//!
//! Permutations are 1-indexed: `pi.at(i)` is the position of interval `i`
//! after the exchange. The extension `pi(0) = 0`, `pi(n+1) = n+1` only exists
//! inside [`sigma_map`].

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{IntMatrix, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// `image[i-1] = pi(i)`; must be a bijection of `{1..n}` with `n >= 2`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n < 2 {
            return Err(Error::InvalidPermutation(format!("size {n} < 2")));
        }
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection of 1..{n}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Permutation::new((1..=n).collect())
    }

    /// The reversal `(n, n-1, ..., 1)`.
    pub fn reversal(n: usize) -> Result<Self> {
        Permutation::new((1..=n).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `pi(i)` for `1 <= i <= n`.
    pub fn at(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    /// `pi^{-1}(v)` for `1 <= v <= n`.
    pub fn inverse_at(&self, v: usize) -> usize {
        self.image.iter().position(|&x| x == v).expect("value in range") + 1
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { image: inv }
    }

    /// No proper prefix `{1..k}` is mapped onto itself.
    pub fn is_irreducible(&self) -> bool {
        let mut max = 0;
        for (k, &v) in self.image.iter().enumerate().take(self.n() - 1) {
            max = max.max(v);
            if max == k + 1 {
                return false;
            }
        }
        true
    }

    pub fn require_irreducible(&self) -> Result<()> {
        if self.is_irreducible() {
            Ok(())
        } else {
            Err(Error::Reducible(self.to_string()))
        }
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation { image: cur.clone() }];
        while next_permutation(&mut cur) {
            out.push(Permutation { image: cur.clone() });
        }
        out
    }

    /// The irreducible permutations of size `n`, lexicographic.
    pub fn irreducible(n: usize) -> Vec<Permutation> {
        Permutation::all(n).into_iter().filter(Permutation::is_irreducible).collect()
    }

    pub fn l_matrix(&self) -> SkewForm {
        l_matrix(self)
    }

    pub fn tau_dual(&self) -> Permutation {
        tau_dual(self)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.image.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    n: usize,
    image: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PermIn {
    Object(PermRepr),
    Image(Vec<usize>),
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermRepr {
            n: self.n(),
            image: self.image.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Permutation, D::Error> {
        use serde::de::Error as _;
        let image = match PermIn::deserialize(de)? {
            PermIn::Object(r) => {
                if r.n != r.image.len() {
                    return Err(D::Error::custom(format!("n = {} but {} images", r.n, r.image.len())));
                }
                r.image
            }
            PermIn::Image(v) => v,
        };
        Permutation::new(image).map_err(D::Error::custom)
    }
}

/// Anti-symmetric `{-1, 0, 1}` matrix recording which pairs of intervals an
/// exchange reorders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewForm(IntMatrix);

impl SkewForm {
    pub fn from_matrix(m: IntMatrix) -> Result<Self> {
        if !m.is_antisymmetric() {
            return Err(Error::NotAntiSymmetric);
        }
        if m.entries().any(|&x| !(-1..=1).contains(&x)) {
            return Err(Error::InvalidPermutation("skew form entries outside {-1,0,1}".into()));
        }
        Ok(SkewForm(m))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }
}

/// `(L)_{ij} = 1` if `i < j` and `pi(i) > pi(j)`, `-1` if `i > j` and
/// `pi(i) < pi(j)`, else 0.
pub fn l_matrix(pi: &Permutation) -> SkewForm {
    let n = pi.n();
    let mut m = IntMatrix::zeros(n, n);
    for i in 1..=n {
        for j in 1..=n {
            if i < j && pi.at(i) > pi.at(j) {
                m[(i - 1, j - 1)] = 1;
            } else if i > j && pi.at(i) < pi.at(j) {
                m[(i - 1, j - 1)] = -1;
            }
        }
    }
    SkewForm(m)
}

/// Invert `l_matrix` through the row-sum identity `pi(i) - i = sum_j L_ij`.
///
/// The candidate is only returned if it reproduces `m` exactly; row sums by
/// themselves do not characterise skew forms.
pub fn permutation_from_l(m: &IntMatrix) -> Option<Permutation> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let image = (0..n)
        .map(|i| {
            let s: i64 = m.row(i).iter().sum();
            usize::try_from(i as i64 + 1 + s).ok()
        })
        .collect::<Option<Vec<usize>>>()?;
    let pi = Permutation::new(image).ok()?;
    (l_matrix(&pi).matrix() == m).then_some(pi)
}

/// `pi_tau(i) = n + 1 - pi(n + 1 - i)`.
pub fn tau_dual(pi: &Permutation) -> Permutation {
    let n = pi.n();
    Permutation {
        image: (1..=n).map(|i| n + 1 - pi.at(n + 1 - i)).collect(),
    }
}

/// Veech's map `sigma(i) = pi^{-1}(pi(i) + 1) - 1` on `{0..n}`, using the
/// extension `pi(0) = 0`, `pi(n+1) = n+1`.
pub fn sigma_map(pi: &Permutation) -> Vec<usize> {
    let n = pi.n();
    let ext = |i: usize| if i == 0 { 0 } else { pi.at(i) };
    let ext_inv = |v: usize| if v == n + 1 { n + 1 } else { pi.inverse_at(v) };
    (0..=n).map(|i| ext_inv(ext(i) + 1) - 1).collect()
}

/// Orbits of `sigma` on `{0..n}`; each block ascending, blocks sorted by
/// their minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SigmaPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `b_S` for every block, in block order.
    pub fn b_vectors(&self) -> Vec<MarkedVector> {
        self.blocks.iter().map(|s| b_vector(s, self.n)).collect()
    }
}

pub fn sigma_partition(pi: &Permutation) -> Result<SigmaPartition> {
    pi.require_irreducible()?;
    let n = pi.n();
    let sigma = sigma_map(pi);
    let mut seen = vec![false; n + 1];
    let mut blocks = Vec::new();
    for start in 0..=n {
        if seen[start] {
            continue;
        }
        let mut block = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            block.push(i);
            i = sigma[i];
        }
        block.sort_unstable();
        blocks.push(block);
    }
    Ok(SigmaPartition { n, blocks })
}

/// Integer vector `(b_S)_i = chi_S(i-1) - chi_S(i)`, `1 <= i <= n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedVector {
    pub block: Vec<usize>,
    pub values: Vec<i64>,
}

impl MarkedVector {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn negated(&self) -> Vec<i64> {
        self.values.iter().map(|x| -x).collect()
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.values.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }
}

pub fn b_vector(block: &[usize], n: usize) -> MarkedVector {
    let chi = |i: usize| i64::from(block.contains(&i));
    MarkedVector {
        block: block.to_vec(),
        values: (1..=n).map(|i| chi(i - 1) - chi(i)).collect(),
    }
}

/// Greedy rank extension over the `b_S` in block order; the result is a basis
/// of the nullspace of `L_pi` with `#blocks - 1` elements.
pub fn nullspace_basis_from_sigma(pi: &Permutation) -> Result<Vec<MarkedVector>> {
    let part = sigma_partition(pi)?;
    let mut basis: Vec<MarkedVector> = Vec::new();
    for b in part.b_vectors() {
        let mut rows: Vec<Vec<i64>> = basis.iter().map(|m| m.values.clone()).collect();
        rows.push(b.values.clone());
        let rank = IntMatrix::from_rows(rows).expect("equal lengths").to_rational().rank();
        if rank > basis.len() {
            basis.push(b);
        }
    }
    Ok(basis)
}

/// Dimension of the nullspace of `L_pi`, by elimination.
pub fn nullity(pi: &Permutation) -> usize {
    let l: RatMatrix = l_matrix(pi).matrix().to_rational();
    pi.n() - l.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(Permutation::new(vec![1]).is_err());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
    }

    #[test]
    fn irreducibility() {
        assert!(!p(&[1, 2]).is_irreducible());
        assert!(p(&[2, 1]).is_irreducible());
        assert!(!p(&[2, 1, 3]).is_irreducible());
        assert!(p(&[3, 1, 2]).is_irreducible());
        assert_eq!(Permutation::irreducible(3).len(), 3);
        assert_eq!(Permutation::irreducible(4).len(), 13);
        assert_eq!(Permutation::irreducible(5).len(), 71);
    }

    #[test]
    fn skew_forms() {
        assert_eq!(l_matrix(&p(&[2, 1])).matrix(), &im(&[&[0, 1], &[-1, 0]]));
        assert_eq!(
            l_matrix(&p(&[3, 2, 1])).matrix(),
            &im(&[&[0, 1, 1], &[-1, 0, 1], &[-1, -1, 0]])
        );
        assert_eq!(
            l_matrix(&p(&[2, 3, 1])).matrix(),
            &im(&[&[0, 0, 1], &[0, 0, 1], &[-1, -1, 0]])
        );
    }

    #[test]
    fn row_sum_inversion() {
        assert_eq!(permutation_from_l(&im(&[&[0, 1], &[-1, 0]])), Some(p(&[2, 1])));
        assert_eq!(permutation_from_l(&IntMatrix::zeros(2, 2)), Some(p(&[1, 2])));
        assert_eq!(permutation_from_l(&im(&[&[0, 2], &[-2, 0]])), None);
        // Row sums (1, 0, -1) name (2,2,2)... not a bijection: rejected.
        assert_eq!(permutation_from_l(&im(&[&[0, 1, 0], &[0, 0, 0], &[0, -1, 0]])), None);
        // Row sums of L_(3,2,1) but the wrong pattern.
        assert_eq!(permutation_from_l(&im(&[&[0, 2, 0], &[-1, 0, 1], &[-1, -1, 0]])), None);
    }

    #[test]
    fn sigma_partitions() {
        let blocks = |v: &[usize]| sigma_partition(&p(v)).unwrap().blocks().to_vec();
        assert_eq!(blocks(&[2, 1]), vec![vec![0, 1, 2]]);
        assert_eq!(blocks(&[3, 2, 1]), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(blocks(&[2, 3, 1]), vec![vec![0, 2, 3], vec![1]]);
        assert_eq!(sigma_map(&p(&[2, 1])), vec![1, 2, 0]);
        assert!(matches!(sigma_partition(&p(&[2, 1, 3])), Err(Error::Reducible(_))));
    }

    #[test]
    fn b_vectors() {
        assert_eq!(b_vector(&[1], 3).values, vec![-1, 1, 0]);
        assert_eq!(b_vector(&[0, 1, 2, 3], 3).values, vec![0, 0, 0]);
        assert_eq!(b_vector(&[0, 2], 3).values, vec![1, -1, 1]);
    }

    #[test]
    fn sigma_bases() {
        assert!(nullspace_basis_from_sigma(&p(&[2, 1])).unwrap().is_empty());
        let b = nullspace_basis_from_sigma(&p(&[3, 2, 1])).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].values, vec![1, -1, 1]);
        let b = nullspace_basis_from_sigma(&p(&[2, 3, 1])).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].values == vec![-1, 1, 0] || b[0].values == vec![1, -1, 0]);
    }

    #[test]
    fn tau_duality() {
        assert_eq!(tau_dual(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(tau_dual(&p(&[2, 3, 1])), p(&[3, 1, 2]));
        for pi in Permutation::irreducible(4) {
            assert_eq!(tau_dual(&tau_dual(&pi)), pi);
            assert!(tau_dual(&pi).is_irreducible());
        }
    }

    #[test]
    fn json() {
        let pi = p(&[3, 2, 1]);
        assert_eq!(serde_json::to_string(&pi).unwrap(), r#"{"n":3,"image":[3,2,1]}"#);
        let back: Permutation = serde_json::from_str(r#"{"n":3,"image":[3,2,1]}"#).unwrap();
        assert_eq!(back, pi);
        let bare: Permutation = serde_json::from_str("[3,2,1]").unwrap();
        assert_eq!(bare, pi);
        assert!(serde_json::from_str::<Permutation>(r#"{"n":2,"image":[3,2,1]}"#).is_err());
    }
}
