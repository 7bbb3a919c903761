//! Seeded generators of random exact instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::scalar::rat;
use crate::exact::{IntMatrix, Rational, Scalar};
use crate::iet::{cmp, Iet};
use crate::induced::SubInterval;
use crate::perm::Permutation;
use crate::rauzy::{drive, InductionTrace, Policy};

/// Random rational `p/q` with `1 <= q <= max_den` and `lo <= p/q <= hi`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(lo * q..=hi * q);
    rat(p, q)
}

/// Random entrywise positive rational vector.
pub fn random_positive_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=12);
            rat(rng.gen_range(1..=4 * q), q)
        })
        .collect()
}

pub fn random_irreducible<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    Permutation::irreducible(n)
        .choose(rng)
        .expect("irreducible permutations exist for n >= 2")
        .clone()
}

/// Positive lengths `a + b sqrt(d)` with small random rational `a`, `b`.
pub fn random_quadratic_lengths<R: Rng>(rng: &mut R, n: usize, d: u32) -> Vec<Scalar> {
    (0..n)
        .map(|_| loop {
            let a = random_rational(rng, -2, 3, 7);
            let b = random_rational(rng, -1, 2, 7);
            if b == rat(0, 1) {
                continue;
            }
            let s = Scalar::quad(a, b, d).expect("valid discriminant");
            if s.to_f64() > 0.1 {
                break s;
            }
        })
        .collect()
}

/// A random IET with quadratic lengths that survives `steps` steps of the
/// given policy without a tie; returns it together with its trace.
pub fn random_quadratic_drive<R: Rng>(
    rng: &mut R,
    n: usize,
    steps: usize,
    policy: &Policy,
) -> Result<(Iet, InductionTrace)> {
    for _ in 0..1000 {
        let pi = random_irreducible(rng, n);
        let t = Iet::new(pi, random_quadratic_lengths(rng, n, 5))?;
        match drive(&t, policy, steps) {
            Ok(trace) => return Ok((t, trace)),
            Err(Error::Tie { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Precondition("could not sample a tie-free drive".into()))
}

/// Named quadratic length vectors built from `x` = `phi` (`golden`) or
/// `1 + sqrt 2` (`silver`): `(x, 1, 1 + frac(3x), 1 + frac(4x), ...)`.
pub fn preset_lengths(name: &str, n: usize) -> Result<Vec<Scalar>> {
    let x = match name {
        "golden" => Scalar::golden(),
        "silver" => Scalar::silver(),
        _ => return Err(Error::Parse(format!("unknown length preset {name:?}"))),
    };
    Ok((1..=n as i64)
        .map(|k| match k {
            1 => x.clone(),
            2 => Scalar::one(),
            _ => &x.scale(k).fract() + &Scalar::one(),
        })
        .collect())
}

fn squarefree_split(mut m: u64) -> (u64, u64) {
    let mut k = 1;
    let mut f = 2;
    while f * f <= m {
        while m % (f * f) == 0 {
            m /= f * f;
            k *= f;
        }
        f += 1;
    }
    (k, m)
}

/// Positive lengths `lambda` with `B lambda = alpha lambda` for the Perron
/// eigenvalue `alpha` of a positive cycle matrix `B`, when `alpha` is a
/// quadratic unit. Defined for `n <= 3`, where the form `L_pi` has rank 2 and
/// `B` acts on its nullspace by `+-1`. Such lengths make right induction
/// repeat the cycle forever.
pub fn self_similar_lengths(b: &IntMatrix) -> Result<Option<Vec<Scalar>>> {
    let n = b.rows();
    if !b.is_square() || !(2..=3).contains(&n) {
        return Err(Error::Precondition("self-similar lengths need a 2x2 or 3x3 matrix".into()));
    }
    if !b.is_positive() {
        return Err(Error::Precondition("self-similar lengths need a positive matrix".into()));
    }
    let trace: i64 = (0..n).map(|i| b[(i, i)]).sum();
    let sums: Vec<i64> = if n == 2 { vec![trace] } else { vec![trace - 1, trace + 1] };
    let entry = |i: usize, j: usize| Scalar::int(b[(i, j)]);
    for s in sums {
        let disc = s * s - 4;
        if disc <= 0 {
            continue;
        }
        let (k, d) = squarefree_split(disc as u64);
        if d == 1 {
            continue;
        }
        let alpha = Scalar::quad(rat(s, 2), rat(k as i64, 2), d as u32)?;
        let shifted = |i: usize, j: usize| -> Result<Scalar> {
            if i == j {
                entry(i, j).checked_sub(&alpha)
            } else {
                Ok(entry(i, j))
            }
        };
        let v = if n == 2 {
            vec![entry(0, 1), alpha.checked_sub(&entry(0, 0))?]
        } else {
            // kernel of a rank-2 3x3 matrix: cross product of two independent rows
            let mut found = None;
            for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
                let mut c = Vec::with_capacity(3);
                for i in 0..3 {
                    let (j, l) = ((i + 1) % 3, (i + 2) % 3);
                    let x = shifted(r1, j)?.checked_mul(&shifted(r2, l)?)?;
                    let y = shifted(r1, l)?.checked_mul(&shifted(r2, j)?)?;
                    c.push(x.checked_sub(&y)?);
                }
                if c.iter().any(|x| !x.is_zero()) {
                    found = Some(c);
                    break;
                }
            }
            match found {
                Some(c) => c,
                None => continue,
            }
        };
        let v = if v[0].is_negative() { v.iter().map(|x| x.scale(-1)).collect() } else { v };
        if !v.iter().all(Scalar::is_positive) {
            continue;
        }
        let bv = b.mul_scalar_vec(&v)?;
        let av = v.iter().map(|x| alpha.checked_mul(x)).collect::<Result<Vec<_>>>()?;
        if bv == av {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Random sub-interval `[a, b)` of the domain of `t` with rational
/// endpoints.
pub fn random_subinterval<R: Rng>(rng: &mut R, t: &Iet) -> SubInterval {
    let lo = t.origin().to_f64();
    let hi = t.end().to_f64();
    loop {
        let mut pick = || {
            let q = rng.gen_range(1i64..=60);
            let span = ((hi - lo) * q as f64).floor() as i64;
            let base = (lo * q as f64).ceil() as i64;
            Scalar::Rational(rat(base + rng.gen_range(0..=span), q))
        };
        let (x, y) = (pick(), pick());
        let (a, b) = match cmp(&x, &y) {
            std::cmp::Ordering::Less => (x, y),
            std::cmp::Ordering::Greater => (y, x),
            std::cmp::Ordering::Equal => continue,
        };
        let j = SubInterval { a, b };
        if j.is_within(t) {
            return j;
        }
    }
}
