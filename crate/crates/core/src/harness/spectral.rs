//! Floating-point spectral checks: Perron-Frobenius data of positive
//! matrices and the pairing of eigenvectors under the form `L_pi`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::perm::{l_matrix, Permutation};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MAX_POWER_ITERATIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub matrix: IntMatrix,
    pub alpha: f64,
    /// Positive eigenvector with `|u|_1 = 1`.
    pub u: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn to_f64(b: &IntMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(b.rows(), b.cols(), |i, j| b[(i, j)] as f64)
}

/// Perron eigenvalue and eigenvector of an entrywise positive matrix by
/// power iteration.
pub fn perron(b: &IntMatrix, tol: f64) -> Result<SpectralReport> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch("perron needs a square matrix".into()));
    }
    if !b.is_positive() {
        return Err(Error::Precondition("perron needs an entrywise positive matrix".into()));
    }
    let n = b.rows();
    let m = to_f64(b);
    let mut u = DVector::from_element(n, 1.0 / n as f64);
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_POWER_ITERATIONS {
        let w = &m * &u;
        let alpha = w.sum();
        let next = w / alpha;
        let bu = &m * &next;
        residual = (&bu - &next * alpha).amax() / alpha;
        u = next;
        if residual <= tol {
            if alpha <= 1.0 {
                return Err(Error::Invariant(format!("Perron eigenvalue {alpha} is not > 1")));
            }
            return Ok(SpectralReport {
                matrix: b.clone(),
                alpha,
                u: u.iter().copied().collect(),
                residual,
                iterations: it,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_POWER_ITERATIONS,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingReport {
    pub status: PairingStatus,
    pub alpha: f64,
    /// `(re, im)` of every eigenvalue, Perron eigenvalue first.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Eigenvectors pairing nontrivially with the Perron vector.
    pub partners: usize,
    pub partner_eigenvalue: Option<(f64, f64)>,
    /// `|alpha_j alpha - 1|` for the partner.
    pub product_error: Option<f64>,
    /// Eigenvectors lying in the nullspace of `L_pi`.
    pub null_directions: usize,
    pub reason: Option<String>,
}

/// Tuning for [`pf_pairing_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairingTolerances {
    /// Bound on `|alpha_j alpha - 1|` and on `||beta| - 1|` over the nullspace.
    pub eigen: f64,
    /// Pairings below this (for unit vectors) count as zero.
    pub pairing: f64,
    /// Eigenvalues closer than this (relative) are treated as one cluster.
    pub cluster: f64,
}

impl Default for PairingTolerances {
    fn default() -> Self {
        PairingTolerances {
            eigen: 1e-8,
            pairing: 1e-6,
            cluster: 1e-6,
        }
    }
}

fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    m.clone().schur().complex_eigenvalues().iter().copied().collect()
}

/// Orthonormal basis of the numerical nullspace of `B - lambda I`.
fn null_vectors(m: &DMatrix<f64>, lambda: Complex64, thr: f64) -> Vec<DVector<Complex64>> {
    let n = m.nrows();
    let shifted = DMatrix::from_fn(n, n, |i, j| {
        let v = Complex64::new(m[(i, j)], 0.0);
        if i == j {
            v - lambda
        } else {
            v
        }
    });
    let svd = shifted.svd(false, true);
    let vt = svd.v_t.expect("requested");
    (0..n)
        .filter(|&k| svd.singular_values[k] <= thr)
        .map(|k| vt.row(k).adjoint())
        .collect()
}

fn skipped(alpha: f64, eig: &[Complex64], reason: String) -> PairingReport {
    PairingReport {
        status: PairingStatus::Skipped,
        alpha,
        eigenvalues: eig.iter().map(|z| (z.re, z.im)).collect(),
        partners: 0,
        partner_eigenvalue: None,
        product_error: None,
        null_directions: 0,
        reason: Some(reason),
    }
}

/// For a positive cycle matrix `B` at `pi`: exactly one eigenvector pairs
/// nontrivially with the Perron vector under `L_pi`, its eigenvalue is
/// `1 / alpha`, and eigenvalues on the nullspace of `L_pi` have modulus 1.
pub fn pf_pairing_check(b: &IntMatrix, pi: &Permutation, tol: &PairingTolerances) -> Result<PairingReport> {
    let n = pi.n();
    if b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix at {pi}", b.rows(), b.cols())));
    }
    let l = l_matrix(pi);
    let congruent = b.transpose().checked_mul(l.matrix())?.checked_mul(b)?;
    if &congruent != l.matrix() {
        return Err(Error::Precondition(format!("B does not preserve L_{pi}")));
    }
    let pf = perron(b, DEFAULT_TOLERANCE)?;
    let alpha = pf.alpha;
    let m = to_f64(b);
    let lf = to_f64(l.matrix());

    // Small eigenvalues come out more accurately as reciprocals of the
    // large eigenvalues of the exact inverse.
    let inv = to_f64(&b.unimodular_inverse()?);
    let inv_eig = eigenvalues(&inv);
    let mut eig: Vec<Complex64> = eigenvalues(&m)
        .into_iter()
        .map(|z| {
            if z.norm() >= 1.0 {
                return z;
            }
            let target = z.inv();
            let mu = inv_eig
                .iter()
                .min_by(|a, c| (*a - target).norm().total_cmp(&(*c - target).norm()))
                .expect("nonempty");
            mu.inv()
        })
        .collect();
    let top = (0..n)
        .max_by(|&i, &j| eig[i].norm().total_cmp(&eig[j].norm()))
        .expect("nonempty");
    eig.swap(0, top);
    if (eig[0].re - alpha).abs() > 1e-6 * alpha || eig[0].im.abs() > 1e-6 * alpha {
        return Ok(skipped(alpha, &eig, "Schur and power iteration disagree on alpha".into()));
    }

    // Cluster nearby eigenvalues and demand a full set of eigenvectors for each.
    let scale = m.norm().max(1.0);
    let mut used = vec![false; n];
    let mut vectors: Vec<(Complex64, DVector<Complex64>)> = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let members: Vec<usize> = (i..n)
            .filter(|&j| !used[j] && (eig[j] - eig[i]).norm() <= tol.cluster * eig[i].norm().max(1.0))
            .collect();
        members.iter().for_each(|&j| used[j] = true);
        let centre = members.iter().map(|&j| eig[j]).sum::<Complex64>() / members.len() as f64;
        let null = null_vectors(&m, centre, 1e-9 * scale);
        if null.len() != members.len() {
            return Ok(skipped(
                alpha,
                &eig,
                format!(
                    "eigenvalue {centre:.6} has multiplicity {} but {} eigenvectors",
                    members.len(),
                    null.len()
                ),
            ));
        }
        for v in null {
            vectors.push((centre, v));
        }
    }

    let u1 = DVector::from_iterator(n, pf.u.iter().copied());
    let u1 = &u1 / u1.norm();
    let u1c: DVector<Complex64> = u1.map(|x| Complex64::new(x, 0.0));
    let lc: DMatrix<Complex64> = lf.map(|x| Complex64::new(x, 0.0));
    let mut partners = Vec::new();
    let mut null_directions = 0;
    let mut failures = Vec::new();
    for (k, (beta, v)) in vectors.iter().enumerate() {
        if k == 0 {
            // the Perron direction itself
            continue;
        }
        let lv = &lc * v;
        if lv.norm() <= tol.pairing {
            null_directions += 1;
            if (beta.norm() - 1.0).abs() > tol.eigen {
                failures.push(format!("nullspace eigenvalue {beta:.6} is off the unit circle"));
            }
            continue;
        }
        let pairing = u1c.transpose() * &lv;
        if pairing[(0, 0)].norm() > tol.pairing {
            partners.push(*beta);
        }
    }
    let partner = (partners.len() == 1).then(|| partners[0]);
    let product_error = partner.map(|beta| (beta * alpha - Complex64::new(1.0, 0.0)).norm());
    if partners.len() != 1 {
        failures.push(format!("{} pairing partners", partners.len()));
    } else if product_error.expect("one partner") > tol.eigen {
        failures.push(format!("alpha_j alpha - 1 = {:.3e}", product_error.expect("one partner")));
    }
    Ok(PairingReport {
        status: if failures.is_empty() {
            PairingStatus::Pass
        } else {
            PairingStatus::Fail
        },
        alpha,
        eigenvalues: eig.iter().map(|z| (z.re, z.im)).collect(),
        partners: partners.len(),
        partner_eigenvalue: partner.map(|z| (z.re, z.im)),
        product_error,
        null_directions,
        reason: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn golden_perron() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r = perron(&im(&[&[1, 1], &[1, 2]]), DEFAULT_TOLERANCE).unwrap();
        assert!((r.alpha - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!((r.u[1] / r.u[0] - phi).abs() < 1e-10);
        assert!(r.residual <= DEFAULT_TOLERANCE);
        let r = perron(&im(&[&[2, 1], &[1, 1]]), DEFAULT_TOLERANCE).unwrap();
        assert!((r.alpha - 2.618033988749895).abs() < 1e-10);
        assert!(matches!(perron(&im(&[&[1, 1], &[0, 1]]), DEFAULT_TOLERANCE), Err(Error::Precondition(_))));
    }

    #[test]
    fn golden_pairing() {
        let pi = Permutation::new(vec![2, 1]).unwrap();
        let r = pf_pairing_check(&im(&[&[1, 1], &[1, 2]]), &pi, &PairingTolerances::default()).unwrap();
        assert_eq!(r.status, PairingStatus::Pass, "{r:?}");
        assert_eq!(r.partners, 1);
        assert!(r.product_error.unwrap() < 1e-12);
    }

    #[test]
    fn non_cycle_matrix_is_rejected() {
        let pi = Permutation::new(vec![3, 2, 1]).unwrap();
        let b = im(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 2]]);
        assert!(matches!(
            pf_pairing_check(&b, &pi, &PairingTolerances::default()),
            Err(Error::Precondition(_))
        ));
    }
}
