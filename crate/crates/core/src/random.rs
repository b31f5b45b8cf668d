//! Random states and unitaries for property tests and the verify command.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::CMatrix;
use crate::qubit::{tensor_product, BasisTag, DensityMatrix4};
use crate::scalar::{c, Real, C};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    c(T::lit(a), T::lit(b))
}

fn ginibre<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    CMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Mixed state drawn from the Hilbert–Schmidt measure (G·G†/Tr).
pub fn random_density_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4<T> {
    let g = ginibre::<T, R>(rng, 4);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix4::new(m.scale_real(T::one() / tr).hermitian_part(), BasisTag::Product)
        .expect("Ginibre product is a state")
}

/// Mixed state of random rank (1 to 4), which exercises rank-deficient inputs.
pub fn random_mixed_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4<T> {
    let rank = rng.random_range(1..=4);
    let g = CMatrix::from_fn(4, rank, |_, _| gaussian::<T, R>(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix4::new(m.scale_real(T::one() / tr).hermitian_part(), BasisTag::Product)
        .expect("Gram matrix is a state")
}

pub fn random_ket<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C<T>> {
    let v: Vec<C<T>> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    v.into_iter().map(|z| z.unscale(norm)).collect()
}

pub fn random_pure_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4<T> {
    let v = random_ket::<T, R>(rng, 4);
    DensityMatrix4::from_ket(&[v[0], v[1], v[2], v[3]], BasisTag::Product).expect("unit ket")
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    let g = ginibre::<T, R>(rng, n);
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for q in &cols {
            let dot: C<T> = q.iter().zip(&v).map(|(a, b)| a.conj() * *b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= dot * *qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        cols.push(v.into_iter().map(|z| z.unscale(norm)).collect());
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// U₁⊗U₂ ρ (U₁⊗U₂)†
pub fn local_unitary_conjugate<T: Real>(
    rho: &DensityMatrix4<T>,
    u1: &CMatrix<T>,
    u2: &CMatrix<T>,
) -> DensityMatrix4<T> {
    let u = tensor_product(u1, u2).expect("2x2 unitaries");
    let m = &(&u * rho.matrix()) * &u.adjoint();
    DensityMatrix4::new_unchecked(m.hermitian_part(), BasisTag::Product)
}

/// Σ p_k |e_k⟩⟨e_k| ⊗ σ_k with {e_k} a random orthonormal basis of the
/// measured atom; such states have zero discord when that atom is measured.
pub fn random_classical_quantum<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    measured_first: bool,
) -> DensityMatrix4<T> {
    let u = random_unitary::<T, R>(rng, 2);
    let p = T::lit(rng.random_range(0.0..1.0));
    let weights = [p, T::one() - p];
    let mut m = CMatrix::zeros(4, 4);
    for (k, &w) in weights.iter().enumerate() {
        let e = u.column(k);
        let proj = CMatrix::outer(&e, &e);
        let other = random_mixed_qubit::<T, R>(rng);
        let term = if measured_first {
            proj.kron(&other)
        } else {
            other.kron(&proj)
        };
        m = &m + &term.scale_real(w);
    }
    DensityMatrix4::new(m.hermitian_part(), BasisTag::Product).expect("convex mixture of states")
}

fn random_mixed_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> CMatrix<T> {
    let g = ginibre::<T, R>(rng, 2);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_real(T::one() / tr).hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_unitary::<f64, _>(&mut rng, 4);
        assert!((&u * &u.adjoint()).max_abs_diff(&CMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn pure_state_is_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_pure_state::<f64, _>(&mut rng);
        let e = rho.eigenvalues();
        assert!((e[0] - 1.0).abs() < 1e-13 && e[1].abs() < 1e-13);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_density_matrix::<f64, _>(&mut ChaCha8Rng::seed_from_u64(3));
        let b = random_density_matrix::<f64, _>(&mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }
}
