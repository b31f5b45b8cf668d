//! Two-qubit states: bases, tensor products, partial traces and the Bloch
//! (Pauli) expansion.
//!
//! Index 0 of a single qubit is the excited state |+⟩, index 1 the ground
//! state |−⟩. In the product basis atom 1 is the left Kronecker factor.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, CMatrix};
use crate::scalar::{c, re, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisTag {
    /// |++⟩, |+−⟩, |−+⟩, |−−⟩
    Product,
    /// |1,1⟩, |1,0⟩, |1,−1⟩, |0,0⟩
    TripletSinglet,
}

impl BasisTag {
    pub fn name(self) -> &'static str {
        match self {
            BasisTag::Product => "product",
            BasisTag::TripletSinglet => "triplet-singlet",
        }
    }

    pub fn labels(self) -> [&'static str; 4] {
        match self {
            BasisTag::Product => ["|++>", "|+->", "|-+>", "|-->"],
            BasisTag::TripletSinglet => ["|1,1>", "|1,0>", "|1,-1>", "|0,0>"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    First,
    Second,
}

impl Atom {
    pub fn other(self) -> Atom {
        match self {
            Atom::First => Atom::Second,
            Atom::Second => Atom::First,
        }
    }
}

/// Columns are the coupled kets written in product coordinates.
fn coupling_matrix<T: Real>() -> CMatrix<T> {
    let s = T::FRAC_1_SQRT_2();
    let (o, l) = (T::zero(), T::one());
    CMatrix::from_real_rows(&[&[l, o, o, o], &[o, s, o, s], &[o, s, o, -s], &[o, o, l, o]])
        .expect("4x4 literal")
}

/// Pauli matrix σ_k for k = 0 (x), 1 (y), 2 (z).
pub fn pauli<T: Real>(k: usize) -> CMatrix<T> {
    let (o, l) = (C::zero(), C::one());
    let i = c(T::zero(), T::one());
    let rows = match k {
        0 => [[o, l], [l, o]],
        1 => [[o, -i], [i, o]],
        2 => [[l, o], [o, -l]],
        _ => panic!("pauli index {k} out of range"),
    };
    CMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).expect("2x2 literal")
}

/// Lowering operator |−⟩⟨+|.
pub fn sigma_minus<T: Real>() -> CMatrix<T> {
    let mut m = CMatrix::zeros(2, 2);
    m[(1, 0)] = C::one();
    m
}

/// Raising operator |+⟩⟨−|.
pub fn sigma_plus<T: Real>() -> CMatrix<T> {
    sigma_minus().adjoint()
}

/// Kronecker product of two 2×2 operators.
pub fn tensor_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    a.require_shape(2, 2)?;
    b.require_shape(2, 2)?;
    Ok(a.kron(b))
}

/// A validated two-qubit density matrix together with the basis its entries
/// refer to.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix4<T = f64> {
    matrix: CMatrix<T>,
    basis: BasisTag,
}

impl<T: Real> DensityMatrix4<T> {
    /// Checks Hermiticity (1e−12), unit trace (1e−12) and eigenvalues ≥ −1e−10.
    pub fn new(matrix: CMatrix<T>, basis: BasisTag) -> Result<Self> {
        Self::with_tolerance(matrix, basis, T::tol(1e-10))
    }

    /// As [`DensityMatrix4::new`] with a caller-chosen floor on eigenvalues.
    pub fn with_tolerance(matrix: CMatrix<T>, basis: BasisTag, eig_floor: T) -> Result<Self> {
        matrix.require_shape(4, 4)?;
        let defect = matrix.hermitian_defect();
        if defect > T::tol(1e-12) {
            return Err(Error::Hermiticity {
                defect: defect.as_f64(),
            });
        }
        let tr = matrix.trace();
        if (tr - C::one()).norm() > T::tol(1e-12) {
            return Err(Error::NotPhysical(format!("trace {tr}")));
        }
        let lowest = hermitian_eigenvalues(&matrix)?[3];
        if lowest < -eig_floor {
            return Err(Error::NotPsd {
                eigenvalue: lowest.as_f64(),
            });
        }
        Ok(Self { matrix, basis })
    }

    /// Skips validation. Intended for intermediate results that are
    /// normalized or checked by the caller.
    pub fn new_unchecked(matrix: CMatrix<T>, basis: BasisTag) -> Self {
        debug_assert_eq!(matrix.shape(), (4, 4));
        Self { matrix, basis }
    }

    /// Pure state |ψ⟩⟨ψ| (the ket is normalized here).
    pub fn from_ket(ket: &[C<T>; 4], basis: BasisTag) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(Error::NotPhysical("zero ket".into()));
        }
        let v: Vec<C<T>> = ket.iter().map(|z| z.unscale(norm)).collect();
        Self::new(CMatrix::outer(&v, &v).hermitian_part(), basis)
    }

    /// Projector onto basis vector `k`.
    pub fn basis_projector(k: usize, basis: BasisTag) -> Self {
        let mut m = CMatrix::zeros(4, 4);
        m[(k, k)] = C::one();
        Self { matrix: m, basis }
    }

    pub fn maximally_mixed(basis: BasisTag) -> Self {
        Self {
            matrix: CMatrix::identity(4).scale_real(T::lit(0.25)),
            basis,
        }
    }

    /// ρ_A ⊗ ρ_B in the product basis.
    pub fn product(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Self> {
        Self::new(tensor_product(a, b)?, BasisTag::Product)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.matrix[(i, j)]
    }

    pub fn in_basis(&self, target: BasisTag) -> Self {
        change_basis(self, target)
    }

    pub fn require_product(&self) -> Result<()> {
        match self.basis {
            BasisTag::Product => Ok(()),
            other => Err(Error::Basis(other.name())),
        }
    }

    /// Diagonal in the triplet-singlet basis: P(|1,1⟩), P(|1,0⟩), P(|1,−1⟩), P(|0,0⟩).
    pub fn coupled_populations(&self) -> [T; 4] {
        let ts = self.in_basis(BasisTag::TripletSinglet);
        std::array::from_fn(|k| ts.matrix[(k, k)].re)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix).expect("validated Hermitian")
    }

    /// Largest entrywise deviation, after bringing `other` into this basis.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.in_basis(self.basis).matrix)
    }

    /// ½‖ρ − σ‖₁
    pub fn trace_distance(&self, other: &Self) -> T {
        let d = &self.matrix - &other.in_basis(self.basis).matrix;
        let half = T::lit(0.5);
        hermitian_eigenvalues(&d.hermitian_part())
            .expect("difference of Hermitian matrices")
            .into_iter()
            .map(|l| l.abs())
            .sum::<T>()
            * half
    }

    pub fn cast<U: Real>(&self) -> DensityMatrix4<U> {
        DensityMatrix4 {
            matrix: self.matrix.cast(),
            basis: self.basis,
        }
    }
}

impl<T: Real> fmt::Debug for DensityMatrix4<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DensityMatrix4 ({})", self.basis.name())?;
        fmt::Display::fmt(&self.matrix, f)
    }
}

impl<T: Real> fmt::Display for DensityMatrix4<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.basis.labels();
        let prec = f.precision().unwrap_or(6);
        for (i, label) in labels.iter().enumerate() {
            write!(f, "{label:>7} ")?;
            for j in 0..4 {
                let z = self.matrix[(i, j)] + C::new(T::zero(), T::zero());
                let sign = if z.im < T::zero() { '-' } else { '+' };
                write!(f, " {:>w$.*} {sign} {:<w$.*}i", prec, z.re, prec, z.im.abs(), w = prec + 3)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reduced state of the atom `keep`.
pub fn partial_trace<T: Real>(rho: &DensityMatrix4<T>, keep: Atom) -> Result<CMatrix<T>> {
    rho.require_product()?;
    let m = &rho.matrix;
    let mut out = CMatrix::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            out[(a, b)] = match keep {
                Atom::First => m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)],
                Atom::Second => m[(a, b)] + m[(a + 2, b + 2)],
            };
        }
    }
    Ok(out)
}

/// Re-expresses the state in `target` coordinates via the fixed orthogonal
/// coupling matrix O: ρ_TS = Oᵀ ρ_P O.
pub fn change_basis<T: Real>(rho: &DensityMatrix4<T>, target: BasisTag) -> DensityMatrix4<T> {
    if rho.basis == target {
        return rho.clone();
    }
    let o = coupling_matrix::<T>();
    let ot = o.transpose();
    let matrix = match target {
        BasisTag::TripletSinglet => &(&ot * &rho.matrix) * &o,
        BasisTag::Product => &(&o * &rho.matrix) * &ot,
    };
    DensityMatrix4 { matrix, basis: target }
}

/// Exchanges the roles of the two atoms (swaps |+−⟩ and |−+⟩).
pub fn reorder_qubits<T: Real>(rho: &DensityMatrix4<T>) -> Result<DensityMatrix4<T>> {
    rho.require_product()?;
    const PERM: [usize; 4] = [0, 2, 1, 3];
    let matrix = CMatrix::from_fn(4, 4, |i, j| rho.matrix[(PERM[i], PERM[j])]);
    Ok(DensityMatrix4 {
        matrix,
        basis: BasisTag::Product,
    })
}

/// Local Bloch vectors and correlation tensor:
/// ρ = ¼(I⊗I + Σ xᵢ σᵢ⊗I + Σ yⱼ I⊗σⱼ + Σ Tᵢⱼ σᵢ⊗σⱼ).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlochDecomposition<T = f64> {
    pub x: [T; 3],
    pub y: [T; 3],
    pub t: [[T; 3]; 3],
}

impl<T: Real> BlochDecomposition<T> {
    /// Swaps the atoms: x ↔ y, T → Tᵀ.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y,
            y: self.x,
            t: std::array::from_fn(|i| std::array::from_fn(|j| self.t[j][i])),
        }
    }
}

fn real_trace<T: Real>(rho: &CMatrix<T>, op: &CMatrix<T>) -> Result<T> {
    // Tr(ρ·op) without forming the product
    let mut acc = C::<T>::zero();
    for i in 0..4 {
        for k in 0..4 {
            acc += rho[(i, k)] * op[(k, i)];
        }
    }
    if acc.im.abs() > T::tol(1e-10) {
        return Err(Error::Hermiticity {
            defect: acc.im.abs().as_f64(),
        });
    }
    Ok(acc.re)
}

pub fn bloch_decompose<T: Real>(rho: &DensityMatrix4<T>) -> Result<BlochDecomposition<T>> {
    rho.require_product()?;
    let id = CMatrix::<T>::identity(2);
    let s: [CMatrix<T>; 3] = std::array::from_fn(pauli);
    let m = &rho.matrix;
    let mut b = BlochDecomposition {
        x: [T::zero(); 3],
        y: [T::zero(); 3],
        t: [[T::zero(); 3]; 3],
    };
    for i in 0..3 {
        b.x[i] = real_trace(m, &s[i].kron(&id))?;
        b.y[i] = real_trace(m, &id.kron(&s[i]))?;
        for j in 0..3 {
            b.t[i][j] = real_trace(m, &s[i].kron(&s[j]))?;
        }
    }
    Ok(b)
}

pub fn bloch_reconstruct<T: Real>(b: &BlochDecomposition<T>) -> Result<DensityMatrix4<T>> {
    let id = CMatrix::<T>::identity(2);
    let s: [CMatrix<T>; 3] = std::array::from_fn(pauli);
    let mut m = CMatrix::identity(4);
    for i in 0..3 {
        m = &m + &s[i].kron(&id).scale_real(b.x[i]);
        m = &m + &id.kron(&s[i]).scale_real(b.y[i]);
        for j in 0..3 {
            m = &m + &s[i].kron(&s[j]).scale_real(b.t[i][j]);
        }
    }
    let m = m.scale_real(T::lit(0.25));
    DensityMatrix4::new(m, BasisTag::Product)
        .map_err(|e| Error::NotPhysical(format!("Bloch coefficients do not give a state: {e}")))
}

/// Principal square root of a PSD Hermitian matrix. Eigenvalues in
/// [−1e−8, 0) are treated as zero.
pub fn psd_sqrt<T: Real>(h: &CMatrix<T>) -> Result<CMatrix<T>> {
    let e = hermitian_eigen(h)?;
    let lowest = *e.values.last().unwrap_or(&T::zero());
    if lowest < -T::tol(1e-8) {
        return Err(Error::NotPsd {
            eigenvalue: lowest.as_f64(),
        });
    }
    let n = h.rows();
    let roots: Vec<T> = e.values.iter().map(|&l| l.max(T::zero()).sqrt()).collect();
    let v = &e.vectors;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * re(roots[k])).sum()
    }))
}
