//! Correlation measures of two-qubit states. Entropies are in bits.
//!
//! Every function accepts a state in either basis and works in the product
//! basis internally.

mod discord;
pub mod nelder_mead;

pub use discord::{
    classical_correlation, conditional_entropy_objective, conditional_state, marginal_entropy,
    quantum_discord, ClassicalCorrelation, ProjectorParams,
};
pub(crate) use discord::discord_from_parts;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, singular_values, CMatrix};
use crate::qubit::{bloch_decompose, partial_trace, pauli, psd_sqrt, reorder_qubits, Atom, BasisTag, DensityMatrix4};
use crate::scalar::Real;

/// −Σ λ log₂ λ over the eigenvalues, ignoring those below 1e−14.
pub fn von_neumann_entropy<T: Real>(rho: &CMatrix<T>) -> Result<T> {
    let eig = hermitian_eigenvalues(rho)?;
    let tr: T = eig.iter().copied().sum();
    if (tr - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::NotPhysical(format!("trace {tr}")));
    }
    if let Some(&low) = eig.last() {
        if low < -T::tol(1e-10) {
            return Err(Error::NotPsd { eigenvalue: low.as_f64() });
        }
    }
    let cutoff = T::lit(1e-14);
    Ok(-eig.iter().filter(|&&l| l > cutoff).map(|&l| l * l.log2()).sum::<T>())
}

/// S(ρ₁) + S(ρ₂) − S(ρ₁₂)
pub fn mutual_information<T: Real>(rho: &DensityMatrix4<T>) -> Result<T> {
    let entropies = Entropies::of(rho)?;
    Ok(entropies.a + entropies.b - entropies.ab)
}

struct Entropies<T> {
    a: T,
    b: T,
    ab: T,
}

impl<T: Real> Entropies<T> {
    fn of(rho: &DensityMatrix4<T>) -> Result<Self> {
        let p = rho.in_basis(BasisTag::Product);
        Ok(Self {
            a: von_neumann_entropy(&partial_trace(&p, Atom::First)?)?,
            b: von_neumann_entropy(&partial_trace(&p, Atom::Second)?)?,
            ab: von_neumann_entropy(p.matrix())?,
        })
    }
}

/// Wootters concurrence, from the Hermitian matrix √(√ρ ρ̃ √ρ) whose
/// eigenvalues are the square roots of those of ρρ̃.
pub fn concurrence<T: Real>(rho: &DensityMatrix4<T>) -> Result<T> {
    let p = rho.in_basis(BasisTag::Product);
    let yy = pauli::<T>(1).kron(&pauli(1));
    let s = psd_sqrt(p.matrix())?;
    let s_flipped = &(&yy * &s.conj()) * &yy;
    // singular values of √ρ √ρ̃ are the square roots of the spectrum of ρρ̃
    let mut r = singular_values(&(&s * &s_flipped)).values;
    r.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let c = r[0] - r[1] - r[2] - r[3];
    Ok(c.max(T::zero()).min(T::one()))
}

/// 1 − Tr ρ²
pub fn linear_entropy<T: Real>(rho: &DensityMatrix4<T>) -> T {
    T::one() - rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum::<T>()
}

/// Geometric discord when atom `measured` is measured:
/// ¼(‖x‖² + ‖T‖² − k_max) with K = x xᵀ + T Tᵀ and x the Bloch vector of
/// the measured atom. Clamped at zero.
pub fn geometric_discord<T: Real>(rho: &DensityMatrix4<T>, measured: Atom) -> Result<T> {
    let p = rho.in_basis(BasisTag::Product);
    let p = match measured {
        Atom::First => p,
        Atom::Second => reorder_qubits(&p)?,
    };
    let b = bloch_decompose(&p)?;
    let k = CMatrix::from_fn(3, 3, |i, j| {
        let tt: T = (0..3).map(|m| b.t[i][m] * b.t[j][m]).sum();
        crate::scalar::re(b.x[i] * b.x[j] + tt)
    });
    let kmax = hermitian_eigenvalues(&k)?[0];
    let x2: T = b.x.iter().map(|v| *v * *v).sum();
    let t2: T = b.t.iter().flatten().map(|v| *v * *v).sum();
    Ok((T::lit(0.25) * (x2 + t2 - kmax)).max(T::zero()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport<T = f64> {
    pub concurrence: T,
    pub qmi: T,
    pub entropy_a: T,
    pub entropy_b: T,
    pub entropy_ab: T,
    /// Classical correlation measuring atom 1.
    pub ccl_1: T,
    /// Classical correlation measuring atom 2.
    pub ccl_2: T,
    pub discord_1: T,
    pub discord_2: T,
    pub geo_discord_1: T,
    pub geo_discord_2: T,
    pub linear_entropy: T,
    pub argmin_1: ProjectorParams<T>,
    pub argmin_2: ProjectorParams<T>,
    pub optimizer_evals: usize,
}

pub fn full_report<T: Real>(rho: &DensityMatrix4<T>) -> Result<CorrelationReport<T>> {
    let e = Entropies::of(rho)?;
    let qmi = e.a + e.b - e.ab;
    let c1 = classical_correlation(rho, Atom::First)?;
    let c2 = classical_correlation(rho, Atom::Second)?;
    Ok(CorrelationReport {
        concurrence: concurrence(rho)?,
        qmi,
        entropy_a: e.a,
        entropy_b: e.b,
        entropy_ab: e.ab,
        ccl_1: c1.value,
        ccl_2: c2.value,
        discord_1: discord::discord_from_parts(qmi, c1.value),
        discord_2: discord::discord_from_parts(qmi, c2.value),
        geo_discord_1: geometric_discord(rho, Atom::First)?,
        geo_discord_2: geometric_discord(rho, Atom::Second)?,
        linear_entropy: linear_entropy(rho),
        argmin_1: c1.argmin,
        argmin_2: c2.argmin,
        optimizer_evals: c1.evals + c2.evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{asymptotic_scalars_g2zero, limit_xstate_g2zero, steady_equal_g, steady_g2zero};
    use crate::master::ModelParams;
    use crate::random::{
        local_unitary_conjugate, random_classical_quantum, random_density_matrix, random_mixed_state,
        random_pure_state, random_unitary,
    };
    use crate::scalar::c;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell() -> DensityMatrix4<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix4::from_ket(&[c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)], BasisTag::Product).unwrap()
    }

    fn mixed() -> DensityMatrix4<f64> {
        DensityMatrix4::maximally_mixed(BasisTag::Product)
    }

    #[test]
    fn entropies() {
        assert!(von_neumann_entropy(bell().matrix()).unwrap().abs() < 1e-12);
        assert!((von_neumann_entropy(mixed().matrix()).unwrap() - 2.0).abs() < 1e-14);
        let half = CMatrix::<f64>::real_diag(&[0.5, 0.5, 0.0, 0.0]);
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-15);
        assert!(von_neumann_entropy(&CMatrix::<f64>::real_diag(&[0.5, 0.6])).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        assert!((mutual_information(&bell()).unwrap() - 2.0).abs() < 1e-12);
        let prod = DensityMatrix4::product(&CMatrix::<f64>::real_diag(&[0.3, 0.7]), &CMatrix::real_diag(&[0.6, 0.4])).unwrap();
        assert!(mutual_information(&prod).unwrap().abs() < 1e-14);
        for f in [2.0 / 3.0, 0.3, -0.2] {
            let closed = asymptotic_scalars_g2zero::<f64>(f).qmi;
            assert!((mutual_information(&limit_xstate_g2zero::<f64>(f)).unwrap() - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&bell()).unwrap() - 1.0).abs() < 1e-7);
        assert_eq!(concurrence(&mixed()).unwrap(), 0.0);
        let p = 0.8;
        let werner = &bell().matrix().scale_real(p) + &CMatrix::identity(4).scale_real((1.0 - p) / 4.0);
        let w = DensityMatrix4::new(werner, BasisTag::Product).unwrap();
        assert!((concurrence(&w).unwrap() - 0.7).abs() < 1e-10);
        // basis tag is honoured
        let ts = w.in_basis(BasisTag::TripletSinglet);
        assert!((concurrence(&ts).unwrap() - 0.7).abs() < 1e-10);
    }

    #[test]
    fn geometric_discord_examples() {
        for side in [Atom::First, Atom::Second] {
            assert!((geometric_discord(&bell(), side).unwrap() - 0.5).abs() < 1e-12);
            let prod = DensityMatrix4::product(&CMatrix::<f64>::real_diag(&[0.3, 0.7]), &CMatrix::real_diag(&[0.9, 0.1])).unwrap();
            assert!(geometric_discord(&prod, side).unwrap() < 1e-15);
        }
        let x = limit_xstate_g2zero::<f64>(2.0 / 3.0);
        assert!((geometric_discord(&x, Atom::Second).unwrap() - 0.04).abs() < 1e-12);
        assert!(geometric_discord(&x, Atom::First).unwrap() < 1e-12);
    }

    #[test]
    fn linear_entropy_examples() {
        assert!(linear_entropy(&bell()).abs() < 1e-15);
        assert!((linear_entropy(&mixed()) - 0.75).abs() < 1e-15);
        assert!((linear_entropy(&limit_xstate_g2zero::<f64>(2.0 / 3.0)) - 0.55).abs() < 1e-15);
    }

    #[test]
    fn reports() {
        let r = full_report(&mixed()).unwrap();
        for v in [r.concurrence, r.qmi, r.ccl_1, r.ccl_2, r.discord_1, r.discord_2, r.geo_discord_1, r.geo_discord_2] {
            assert!(v.abs() < 1e-12);
        }
        assert!((r.linear_entropy - 0.75).abs() < 1e-15);

        let b = full_report(&bell()).unwrap();
        assert!((b.concurrence - 1.0).abs() < 1e-7);
        assert!((b.qmi - 2.0).abs() < 1e-12);
        assert!((b.discord_1 - 1.0).abs() < 1e-9 && (b.discord_2 - 1.0).abs() < 1e-9);
        assert!((b.ccl_1 - 1.0).abs() < 1e-9);

        let p = ModelParams::new(0.5, 0.0, std::f64::consts::FRAC_PI_2, 1.0).unwrap();
        let s = full_report(&steady_g2zero(&p).unwrap()).unwrap();
        assert!((s.discord_1 - s.discord_2).abs() > 1e-4);
    }

    #[test]
    fn equivalent_positions_give_symmetric_discord() {
        for (g, x) in [(0.3, 0.5), (1.0, 2.0), (0.1, 4.2)] {
            let p = ModelParams::<f64>::new(g, g, x, 1.0).unwrap();
            let r = full_report(&steady_equal_g(&p, None).unwrap()).unwrap();
            assert!((r.discord_1 - r.discord_2).abs() < 1e-8, "{r:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn discord_nonnegative_and_bounded_by_qmi(seed in any::<u64>()) {
            let rho = random_mixed_state::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed));
            let r = full_report(&rho).unwrap();
            prop_assert!(r.discord_1 >= -1e-9 && r.discord_2 >= -1e-9);
            prop_assert!(r.qmi >= r.ccl_1 - 1e-9 && r.qmi >= r.ccl_2 - 1e-9);
            prop_assert!((-1e-12..=0.75 + 1e-12).contains(&r.linear_entropy));
            prop_assert!((0.0..=1.0).contains(&r.concurrence));
        }

        #[test]
        fn local_unitary_invariance(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_density_matrix::<f64, _>(&mut rng);
            let u1 = random_unitary::<f64, _>(&mut rng, 2);
            let u2 = random_unitary::<f64, _>(&mut rng, 2);
            let moved = local_unitary_conjugate(&rho, &u1, &u2);
            let (a, b) = (full_report(&rho).unwrap(), full_report(&moved).unwrap());
            for (x, y) in [(a.concurrence, b.concurrence), (a.qmi, b.qmi), (a.discord_1, b.discord_1),
                           (a.discord_2, b.discord_2), (a.linear_entropy, b.linear_entropy)] {
                prop_assert!((x - y).abs() < 1e-8, "{} vs {}", x, y);
            }
        }

        #[test]
        fn pure_state_discord_is_entanglement_entropy(seed in any::<u64>()) {
            let rho = random_pure_state::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed));
            let s = marginal_entropy(&rho, Atom::First).unwrap();
            for side in [Atom::First, Atom::Second] {
                let d = quantum_discord(&rho, side).unwrap();
                prop_assert!((d - s).abs() < 1e-7, "side {:?}: {} vs {}", side, d, s);
            }
        }

        #[test]
        fn classical_quantum_states_have_no_discord(seed in any::<u64>(), first in any::<bool>()) {
            let rho = random_classical_quantum::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed), first);
            let side = if first { Atom::First } else { Atom::Second };
            prop_assert!(quantum_discord(&rho, side).unwrap() <= 1e-7);
            prop_assert!(geometric_discord(&rho, side).unwrap() <= 1e-12);
        }
    }
}
