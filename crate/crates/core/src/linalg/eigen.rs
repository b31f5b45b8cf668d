//! Cyclic Jacobi methods for small dense complex matrices.
//!
//! Both the Hermitian eigensolver and the one-sided SVD use the same 2×2
//! unitary rotation: a phase that makes the pivot real followed by a real
//! Jacobi rotation that annihilates it.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real = f64> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix<T>,
}

/// Singular values (descending) and right singular vectors.
#[derive(Clone, Debug)]
pub struct SingularValues<T: Real = f64> {
    pub values: Vec<T>,
    /// Column `k` pairs with `values[k]`.
    pub right_vectors: CMatrix<T>,
}

/// Unitary W on the (p, q) plane with W† [[a, b], [b*, d]] W diagonal.
/// Returned as (w_pp, w_pq, w_qp, w_qq).
fn rotation<T: Real>(app: T, aqq: T, apq: C<T>) -> [C<T>; 4] {
    let mag = apq.norm();
    let phase = if mag > T::zero() {
        apq.conj() / mag
    } else {
        C::new(T::one(), T::zero())
    };
    let theta = (aqq - app) / (mag + mag);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    let z = T::zero();
    [
        Complex::new(cs, z),
        Complex::new(sn, z),
        -phase.scale(sn),
        phase.scale(cs),
    ]
}

fn rotate_columns<T: Real>(m: &mut CMatrix<T>, p: usize, q: usize, w: &[C<T>; 4]) {
    for k in 0..m.rows() {
        let a = m[(k, p)];
        let b = m[(k, q)];
        m[(k, p)] = a * w[0] + b * w[2];
        m[(k, q)] = a * w[1] + b * w[3];
    }
}

fn rotate_rows_adjoint<T: Real>(m: &mut CMatrix<T>, p: usize, q: usize, w: &[C<T>; 4]) {
    for k in 0..m.cols() {
        let a = m[(p, k)];
        let b = m[(q, k)];
        m[(p, k)] = w[0].conj() * a + w[2].conj() * b;
        m[(q, k)] = w[1].conj() * a + w[3].conj() * b;
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// Converges when every off-diagonal magnitude is below `1e-14·‖h‖_F`.
pub fn hermitian_eigen<T: Real>(h: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    if !h.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    if h.as_slice().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NotPhysical("matrix has non-finite entries".into()));
    }
    let n = h.rows();
    let scale = h.max_abs().max(T::one());
    let defect = h.hermitian_defect();
    if defect > T::tol(1e-10) * scale {
        return Err(Error::Hermiticity {
            defect: defect.as_f64(),
        });
    }

    let mut a = h.hermitian_part();
    let mut v = CMatrix::identity(n);
    let threshold = T::tol(1e-14) * h.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() == T::zero() {
                    continue;
                }
                let w = rotation(a[(p, p)].re, a[(q, q)].re, apq);
                rotate_columns(&mut a, p, q, &w);
                rotate_rows_adjoint(&mut a, p, q, &w);
                rotate_columns(&mut v, p, q, &w);
                a[(p, q)] = C::new(T::zero(), T::zero());
                a[(q, p)] = C::new(T::zero(), T::zero());
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues<T: Real>(h: &CMatrix<T>) -> Result<Vec<T>> {
    hermitian_eigen(h).map(|e| e.values)
}

/// Singular value decomposition by one-sided (Hestenes) Jacobi.
///
/// Orthogonalizes the columns of `a` with the same rotations the Hermitian
/// solver would apply to `a†a`, without forming `a†a`, so tiny singular
/// values are resolved to roughly `ε·‖a‖`.
pub fn singular_values<T: Real>(a: &CMatrix<T>) -> SingularValues<T> {
    let n = a.cols();
    let mut u = a.clone();
    let mut v = CMatrix::identity(n);
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = C::new(T::zero(), T::zero());
                for k in 0..u.rows() {
                    let up = u[(k, p)];
                    let uq = u[(k, q)];
                    alpha += up.norm_sqr();
                    beta += uq.norm_sqr();
                    gamma += up.conj() * uq;
                }
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.norm() == T::zero() {
                    continue;
                }
                rotated = true;
                let w = rotation(alpha, beta, gamma);
                rotate_columns(&mut u, p, q, &w);
                rotate_columns(&mut v, p, q, &w);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = (0..n)
        .map(|j| (0..u.rows()).map(|k| u[(k, j)].norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    SingularValues {
        values: order.iter().map(|&i| norms[i]).collect(),
        right_vectors: CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn residual(h: &CMatrix<f64>, e: &HermitianEigen<f64>) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..h.rows() {
            let v = e.vectors.column(k);
            let hv = h.matvec(&v);
            for (a, b) in hv.iter().zip(&v) {
                worst = worst.max((*a - b.scale(e.values[k])).norm());
            }
        }
        worst
    }

    #[test]
    fn sigma_z() {
        let z = CMatrix::real_diag(&[1.0, -1.0]);
        let e = hermitian_eigen(&z).unwrap();
        assert_eq!(e.values, vec![1.0, -1.0]);
    }

    #[test]
    fn complex_hermitian_residual_and_orthonormality() {
        let h = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.2)],
            vec![c(0.0, -0.5), c(0.3, -0.2), c(0.7, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert!(residual(&h, &e) < 1e-13);
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(gram.max_abs_diff(&CMatrix::identity(3)) < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::Hermiticity { .. })));
    }

    #[test]
    fn svd_finds_exact_rank_deficiency() {
        // rank 2 complex 3x3
        let u = [c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)];
        let w = [c(0.5, 0.5), c(1.0, 0.0), c(0.0, -1.0)];
        let m = &CMatrix::outer(&u, &u) + &CMatrix::outer(&w, &u).scale(c(0.0, 1.0));
        let m = &m + &CMatrix::outer(&w, &w);
        let s = singular_values(&m);
        assert!(s.values[2] < 1e-14 * s.values[0]);
        let null = s.right_vectors.column(2);
        let image = m.matvec(&null);
        assert!(image.iter().all(|z| z.norm() < 1e-13));
    }
}
