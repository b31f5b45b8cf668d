use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{Real, C};

/// Solves `a·x = b` by Gaussian elimination with partial pivoting.
pub fn lu_solve<T: Real>(a: &CMatrix<T>, b: &[C<T>]) -> Result<Vec<C<T>>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::Dimension(format!(
            "system {}x{} with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let tiny = T::epsilon() * a.max_abs().max(T::min_positive_value());

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().partial_cmp(&m[(j, col)].norm()).unwrap())
            .unwrap();
        if m[(pivot, col)].norm() <= tiny {
            return Err(Error::SolverFailure(format!("singular matrix at column {col}")));
        }
        if pivot != col {
            for k in 0..n {
                let tmp = m[(col, k)];
                m[(col, k)] = m[(pivot, k)];
                m[(pivot, k)] = tmp;
            }
            x.swap(col, pivot);
        }
        let d = m[(col, col)];
        for r in col + 1..n {
            let f = m[(r, col)] / d;
            if f.norm() == T::zero() {
                continue;
            }
            for k in col..n {
                let v = m[(col, k)];
                m[(r, k)] -= f * v;
            }
            let xv = x[col];
            x[r] -= f * xv;
        }
    }
    for r in (0..n).rev() {
        let mut acc = x[r];
        for k in r + 1..n {
            acc -= m[(r, k)] * x[k];
        }
        x[r] = acc / m[(r, r)];
    }
    Ok(x)
}
