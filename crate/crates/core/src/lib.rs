//! Steady states and correlations of two laser-driven two-level atoms damped
//! collectively by the vacuum.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`, which is what the CLI and sweeps use.
//!
//! ```
//! use steadycorr::{full_report, steady_state, ModelParams};
//!
//! let p = ModelParams::new(0.5, 0.0, std::f64::consts::FRAC_PI_2, 1.0).unwrap();
//! let sol = steady_state(&p, None).unwrap();
//! let report = full_report(&sol.rho).unwrap();
//! assert!(report.concurrence > 0.0);
//! ```

// `!(a > b)` is how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod error;
pub mod linalg;
pub mod master;
pub mod oracles;
pub mod qubit;
pub mod random;
pub mod scalar;
pub mod sweep;
pub mod verify;

pub use correlations::{
    classical_correlation, concurrence, conditional_entropy_objective, conditional_state,
    full_report, geometric_discord, linear_entropy, mutual_information, quantum_discord,
    von_neumann_entropy,
};
pub use error::{Error, Result};
pub use linalg::{hermitian_eigen, CMatrix};
pub use master::{apply_generator, build_liouvillian, coupling_f, spectral_gap, steady_state, time_evolve};
pub use qubit::{
    bloch_decompose, bloch_reconstruct, change_basis, partial_trace, psd_sqrt, reorder_qubits,
    tensor_product, Atom, BasisTag,
};
pub use scalar::Real;

pub type ComplexMatrix = linalg::CMatrix<f64>;
pub type DensityMatrix4 = qubit::DensityMatrix4<f64>;
pub type BlochDecomposition = qubit::BlochDecomposition<f64>;
pub type ModelParams = master::ModelParams<f64>;
pub type Liouvillian = master::Liouvillian<f64>;
pub type SteadyStateSolution = master::SteadyStateSolution<f64>;
pub type ProjectorParams = correlations::ProjectorParams<f64>;
pub type CorrelationReport = correlations::CorrelationReport<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type ComplexMatrix = crate::linalg::CMatrix<f32>;
    pub type DensityMatrix4 = crate::qubit::DensityMatrix4<f32>;
    pub type BlochDecomposition = crate::qubit::BlochDecomposition<f32>;
    pub type ModelParams = crate::master::ModelParams<f32>;
    pub type Liouvillian = crate::master::Liouvillian<f32>;
    pub type SteadyStateSolution = crate::master::SteadyStateSolution<f32>;
    pub type ProjectorParams = crate::correlations::ProjectorParams<f32>;
    pub type CorrelationReport = crate::correlations::CorrelationReport<f32>;
}
