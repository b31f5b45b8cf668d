//! Small dense complex linear algebra (dimensions up to 16).

mod eigen;
mod expm;
mod lu;
mod matrix;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, singular_values, HermitianEigen, SingularValues};
pub use expm::expm;
pub use lu::lu_solve;
pub use matrix::CMatrix;
