//! Classical correlation and quantum discord by minimization over
//! projective measurements on one atom.
//!
//! A rank-one projector on a qubit is |ψ⟩⟨ψ| with ψ = (α, β), a = |α|²,
//! b = √(a(1−a)) and relative phase Φ. Its Bloch vector is
//! γ = (2b cos Φ, 2b sin Φ, 2a − 1); the complementary projector has −γ.
//! Only the pair matters, so (a, Φ) and (1 − a, Φ + π) are equivalent and
//! Φ ∈ [0, π] suffices.

use serde::Serialize;

use super::nelder_mead::{self, Settings};
use super::{mutual_information, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::qubit::{bloch_decompose, partial_trace, pauli, reorder_qubits, Atom, BasisTag, BlochDecomposition, DensityMatrix4};
use crate::scalar::Real;

const GRID_A: usize = 65;
const GRID_PHI: usize = 129;
const REFINED_CELLS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectorParams<T = f64> {
    /// a = |α|²
    pub alpha_sq: T,
    /// Relative phase Φ.
    pub phi: T,
}

impl<T: Real> ProjectorParams<T> {
    pub fn new(alpha_sq: T, phi: T) -> Self {
        Self { alpha_sq, phi }
    }

    /// From angles with Bloch vector (sin 2θ cos Φ, sin 2θ sin Φ, cos 2θ),
    /// so a = cos²θ and a negative sin 2θ shifts the phase by π.
    pub fn from_angles(theta: T, phi: T) -> Self {
        let ct = theta.cos();
        let phi = if (theta + theta).sin() < T::zero() { phi + T::PI() } else { phi };
        Self {
            alpha_sq: ct * ct,
            phi,
        }
    }

    /// Unit Bloch vector of the projector.
    pub fn bloch_vector(&self) -> [T; 3] {
        let a = self.alpha_sq.max(T::zero()).min(T::one());
        let two_b = T::lit(2.0) * (a * (T::one() - a)).sqrt();
        let (s, c) = self.phi.sin_cos();
        [two_b * c, two_b * s, T::lit(2.0) * a - T::one()]
    }

    /// The same measurement, with the phase folded into [0, π].
    pub fn canonical(&self) -> Self {
        let pi = T::PI();
        let two_pi = pi + pi;
        let mut phi = self.phi % two_pi;
        if phi < T::zero() {
            phi += two_pi;
        }
        if phi > pi {
            Self::new(T::one() - self.alpha_sq, phi - pi)
        } else {
            Self::new(self.alpha_sq, phi)
        }
    }
}

fn dot<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// x + s·T·γ and 1 + s·y·γ for the outcome with Bloch vector s·γ.
fn branch<T: Real>(b: &BlochDecomposition<T>, gamma: &[T; 3], sign: T) -> (T, [T; 3]) {
    let mu = T::one() + sign * dot(&b.y, gamma);
    let nu = std::array::from_fn(|i| b.x[i] + sign * dot(&b.t[i], gamma));
    (mu, nu)
}

/// Outcome probability and post-measurement state of atom 1 when atom 2 is
/// found in the state selected by `proj`.
pub fn conditional_state<T: Real>(b: &BlochDecomposition<T>, proj: &ProjectorParams<T>) -> Result<(T, CMatrix<T>)> {
    let gamma = proj.bloch_vector();
    let (mu, nu) = branch(b, &gamma, T::one());
    let p = mu * T::lit(0.5);
    if p < T::lit(1e-14) {
        return Err(Error::UndefinedConditionalState(p.as_f64()));
    }
    let mut m = CMatrix::identity(2).scale_real(mu);
    for (i, &v) in nu.iter().enumerate() {
        m = &m + &pauli(i).scale_real(v);
    }
    Ok((p, m.scale_real(T::one() / (mu + mu))))
}

/// p·S(ρ) for a branch with weight μ/2 and unnormalized Bloch vector ν.
fn branch_entropy<T: Real>(mu: T, nu: &[T; 3]) -> T {
    if mu < T::lit(2e-14) {
        return T::zero();
    }
    let r = dot(nu, nu).sqrt() / mu;
    let half = T::lit(0.5);
    let mut s = T::zero();
    for lambda in [half * (T::one() + r), half * (T::one() - r)] {
        if lambda > T::lit(1e-14) {
            s -= lambda * lambda.log2();
        }
    }
    mu * half * s
}

/// Average entropy of atom 1 after measuring atom 2 with the projector pair.
pub fn conditional_entropy_objective<T: Real>(b: &BlochDecomposition<T>, proj: &ProjectorParams<T>) -> T {
    entropy_along(b, &proj.bloch_vector())
}

fn entropy_along<T: Real>(b: &BlochDecomposition<T>, gamma: &[T; 3]) -> T {
    let (mu_p, nu_p) = branch(b, gamma, T::one());
    let (mu_m, nu_m) = branch(b, gamma, -T::one());
    branch_entropy(mu_p, &nu_p) + branch_entropy(mu_m, &nu_m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalCorrelation<T = f64> {
    pub value: T,
    pub argmin: ProjectorParams<T>,
    /// Objective evaluations (grid plus refinement).
    pub evals: usize,
    /// Minimum conditional entropy found on the coarse grid.
    pub grid_minimum: T,
    /// Minimum after refinement.
    pub refined_minimum: T,
}

/// Classical correlation when atom `measured` is measured.
pub fn classical_correlation<T: Real>(rho: &DensityMatrix4<T>, measured: Atom) -> Result<ClassicalCorrelation<T>> {
    let rho = rho.in_basis(BasisTag::Product);
    let rho = match measured {
        Atom::Second => rho,
        Atom::First => reorder_qubits(&rho)?,
    };
    let b = bloch_decompose(&rho)?;
    let unmeasured = partial_trace(&rho, Atom::First)?;
    let s_unmeasured = von_neumann_entropy(&unmeasured)?;

    // angles rather than (a, Φ) keep the surface smooth through the poles
    let objective = |theta: T, phi: T| {
        let (s2, c2) = (theta + theta).sin_cos();
        let (sp, cp) = phi.sin_cos();
        entropy_along(&b, &[s2 * cp, s2 * sp, c2])
    };
    let a_step = T::one() / T::lit((GRID_A - 1) as f64);
    let phi_step = T::PI() / T::lit((GRID_PHI - 1) as f64);
    let mut grid: Vec<(T, T, T)> = Vec::with_capacity(GRID_A * GRID_PHI);
    for i in 0..GRID_A {
        let a = T::lit(i as f64) * a_step;
        let theta = a.sqrt().acos();
        for j in 0..GRID_PHI {
            let phi = T::lit(j as f64) * phi_step;
            grid.push((objective(theta, phi), theta, phi));
        }
    }
    let mut evals = grid.len();
    grid.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let grid_minimum = grid[0].0;

    let settings = Settings::default();
    let theta_step = T::FRAC_PI_2() / T::lit((GRID_A - 1) as f64);
    let mut best = (grid[0].0, grid[0].1, grid[0].2);
    for &(_, theta, phi) in grid.iter().take(REFINED_CELLS) {
        let m = nelder_mead::minimize(|p| objective(p[0], p[1]), [theta, phi], [theta_step, phi_step], &settings);
        evals += m.evals;
        if m.value < best.0 {
            best = (m.value, m.point[0], m.point[1]);
        }
    }
    Ok(ClassicalCorrelation {
        value: s_unmeasured - best.0,
        argmin: ProjectorParams::from_angles(best.1, best.2).canonical(),
        evals,
        grid_minimum,
        refined_minimum: best.0,
    })
}

/// Quantum discord I − C_cl when atom `measured` is measured. Values
/// within 1e−9 below zero are reported as zero.
pub fn quantum_discord<T: Real>(rho: &DensityMatrix4<T>, measured: Atom) -> Result<T> {
    let ccl = classical_correlation(rho, measured)?;
    Ok(discord_from_parts(mutual_information(rho)?, ccl.value))
}

pub(crate) fn discord_from_parts<T: Real>(qmi: T, ccl: T) -> T {
    let d = qmi - ccl;
    if d < T::zero() && d >= -T::tol(1e-9) {
        T::zero()
    } else {
        d
    }
}

/// Entropy of the reduced state of `atom`, for checks on pure states.
pub fn marginal_entropy<T: Real>(rho: &DensityMatrix4<T>, atom: Atom) -> Result<T> {
    von_neumann_entropy(&partial_trace(&rho.in_basis(BasisTag::Product), atom)?)
}
