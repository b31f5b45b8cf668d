use crate::linalg::CMatrix;
use crate::scalar::Real;

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    assert!(a.is_square(), "expm of a non-square matrix");
    let n = a.rows();
    let norm = a.row_sum_norm();
    let mut squarings = 0u32;
    let half = T::lit(0.5);
    while norm / T::lit(2f64.powi(squarings as i32)) > half {
        squarings += 1;
    }
    let scaled = a.scale_real(T::one() / T::lit(2f64.powi(squarings as i32)));

    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale_real(T::one() / T::lit(k as f64));
        result = &result + &term;
        if term.max_abs() <= T::epsilon() * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
