//! Oracles written directly from the definitions, independent of the
//! library's own implementations.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `L_ij = 1` if `i < j` and `pi(i) > pi(j)`, `-1` if `i > j` and
/// `pi(i) < pi(j)`, else 0. `pi` is 1-based in values, 0-based in slots.
pub fn l_oracle(pi: &[usize]) -> Vec<Vec<i64>> {
    let n = pi.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < j && pi[i] > pi[j] {
                        1
                    } else if i > j && pi[i] < pi[j] {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// Orbits of `i -> pi^{-1}(pi(i) + 1) - 1` on `{0..n}` with `pi(0) = 0` and
/// `pi^{-1}(n + 1) = n + 1`.
pub fn sigma_blocks_oracle(pi: &[usize]) -> Vec<Vec<usize>> {
    let n = pi.len();
    let ext = |i: usize| if i == 0 { 0 } else { pi[i - 1] };
    let inv = |v: usize| {
        if v == n + 1 {
            n + 1
        } else {
            1 + pi.iter().position(|&x| x == v).unwrap()
        }
    };
    let mut seen = vec![false; n + 1];
    let mut blocks = Vec::new();
    for s in 0..=n {
        if seen[s] {
            continue;
        }
        let mut b = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            b.push(i);
            i = inv(ext(i) + 1) - 1;
        }
        b.sort();
        blocks.push(b);
    }
    blocks
}

pub fn b_oracle(block: &[usize], n: usize) -> Vec<i64> {
    (1..=n)
        .map(|i| i64::from(block.contains(&(i - 1))) - i64::from(block.contains(&i)))
        .collect()
}

/// Rank over `Q` by plain Gaussian elimination.
pub fn rank_oracle(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= y * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn is_positive(a: &[Vec<i64>]) -> bool {
    a.iter().flatten().all(|&x| x > 0)
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// No proper prefix `{1..k}` is mapped onto itself.
pub fn irreducible_oracle(pi: &[usize]) -> bool {
    let n = pi.len();
    (1..n).all(|k| pi[..k].iter().any(|&v| v > k))
}

pub fn one() -> BigRational {
    BigRational::one()
}
