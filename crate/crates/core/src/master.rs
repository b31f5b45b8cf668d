//! Interaction-picture master equation of two driven atoms with collective
//! vacuum damping, in units where the single-atom decay rate is 1.
//!
//! States are vectorized by column stacking (`vec[i + 4j] = ρ[i][j]`), so a
//! left/right multiplication `AρB` becomes `(Bᵀ ⊗ A)·vec(ρ)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{expm, lu_solve, singular_values, CMatrix};
use crate::qubit::{sigma_minus, sigma_plus, BasisTag, DensityMatrix4};
use crate::scalar::{c, re, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams<T = f64> {
    /// Drive strength of atom 1 in units of the decay rate.
    pub g1bar: T,
    /// Drive strength of atom 2.
    pub g2bar: T,
    /// Scaled separation ω_A·r/c.
    pub x: T,
    /// Fraction of the squared dipole moment perpendicular to the separation.
    pub dperp_ratio: T,
    /// Laser detuning in units of the decay rate.
    pub delta_lbar: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(g1bar: T, g2bar: T, x: T, dperp_ratio: T) -> Result<Self> {
        let p = Self {
            g1bar,
            g2bar,
            x,
            dperp_ratio,
            delta_lbar: T::zero(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_detuning(mut self, delta_lbar: T) -> Result<Self> {
        self.delta_lbar = delta_lbar;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g1bar", self.g1bar),
            ("g2bar", self.g2bar),
            ("x", self.x),
            ("dperp_ratio", self.dperp_ratio),
            ("delta_lbar", self.delta_lbar),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
        }
        if self.x < T::zero() {
            return Err(Error::InvalidParams(format!("x = {} must be >= 0", self.x)));
        }
        if self.dperp_ratio < T::zero() || self.dperp_ratio > T::one() {
            return Err(Error::InvalidParams(format!(
                "dperp_ratio = {} must lie in [0, 1]",
                self.dperp_ratio
            )));
        }
        Ok(())
    }

    /// Collective coupling F(x, ratio).
    pub fn f12(&self) -> T {
        coupling_f(self.x, self.dperp_ratio)
    }

    fn require_resonance(&self) -> Result<()> {
        if self.delta_lbar != T::zero() {
            return Err(Error::UnsupportedDetuning(self.delta_lbar.as_f64()));
        }
        Ok(())
    }
}

const SERIES_CUTOFF: f64 = 0.05;
const SERIES_TERMS: usize = 9;

/// Collective decay function
/// F(x, r) = r·sin x / x + (3r − 2)(cos x − sin x / x)/x².
///
/// Below x = 0.05 the Maclaurin series is used, so F(0, r) = 2/3 exactly.
pub fn coupling_f<T: Real>(x: T, dperp_ratio: T) -> T {
    let r = dperp_ratio;
    let k = T::lit(3.0) * r - T::lit(2.0);
    if x < T::lit(SERIES_CUTOFF) {
        // c_m = (−1)^m [ r/(2m+1)! − (3r−2)(2m+2)/(2m+3)! ]
        let x2 = x * x;
        let mut sum = T::zero();
        let mut power = T::one();
        let mut fact = 1.0f64; // (2m+1)!
        for m in 0..SERIES_TERMS {
            let n = (2 * m) as f64;
            if m > 0 {
                fact *= n * (n + 1.0);
            }
            let fact3 = fact * (n + 2.0) * (n + 3.0);
            let cm = r / T::lit(fact) - k * T::lit((n + 2.0) / fact3);
            let signed = if m % 2 == 0 { cm } else { -cm };
            sum += signed * power;
            power *= x2;
        }
        return sum;
    }
    let (s, co) = x.sin_cos();
    let sinc = s / x;
    r * sinc + k * (co - sinc) / (x * x)
}

fn embed<T: Real>(op: &CMatrix<T>, atom: usize) -> CMatrix<T> {
    let id = CMatrix::identity(2);
    if atom == 0 {
        op.kron(&id)
    } else {
        id.kron(op)
    }
}

/// Superoperator of −i[H, ·].
fn commutator_superop<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    let id = CMatrix::identity(4);
    let mi = c(T::zero(), -T::one());
    (&id.kron(h) - &h.transpose().kron(&id)).scale(mi)
}

/// Superoperator of  rate·[ L_a ρ L_b† − ½{L_b† L_a, ρ} ].
fn dissipator_superop<T: Real>(rate: T, la: &CMatrix<T>, lb: &CMatrix<T>) -> CMatrix<T> {
    let id = CMatrix::identity(4);
    let half = T::lit(0.5);
    let ba = &lb.adjoint() * la;
    let jump = lb.conj().kron(la);
    let anti = &id.kron(&ba) + &ba.transpose().kron(&id);
    (&jump - &anti.scale_real(half)).scale_real(rate)
}

/// Cross-damping between the atoms at unit rate. The physical generator
/// contains it multiplied by (3/2)·F.
pub fn collective_template<T: Real>() -> CMatrix<T> {
    let s1 = embed(&sigma_minus(), 0);
    let s2 = embed(&sigma_minus(), 1);
    &dissipator_superop(T::one(), &s1, &s2) + &dissipator_superop(T::one(), &s2, &s1)
}

fn local_damping<T: Real>() -> CMatrix<T> {
    let s1 = embed(&sigma_minus(), 0);
    let s2 = embed(&sigma_minus(), 1);
    &dissipator_superop(T::one(), &s1, &s1) + &dissipator_superop(T::one(), &s2, &s2)
}

/// Generator split by its time dependence:
/// A(t) = A_damp + e^{−iδt}·A_raise + e^{iδt}·A_lower.
#[derive(Clone, Debug)]
struct DrivenGenerator<T: Real> {
    damping: CMatrix<T>,
    raise: CMatrix<T>,
    lower: CMatrix<T>,
    delta: T,
}

impl<T: Real> DrivenGenerator<T> {
    fn new(g1: T, g2: T, f12: T, delta: T) -> Self {
        let sp1 = embed(&sigma_plus(), 0);
        let sp2 = embed(&sigma_plus(), 1);
        let sm1 = embed(&sigma_minus(), 0);
        let sm2 = embed(&sigma_minus(), 1);
        let raise_h = (&sp1.scale_real(g1) + &sp2.scale_real(g2)).scale_real(-T::one());
        let lower_h = (&sm1.scale_real(g1) + &sm2.scale_real(g2)).scale_real(-T::one());
        let damping = &local_damping() + &collective_template().scale_real(T::lit(1.5) * f12);
        Self {
            damping,
            raise: commutator_superop(&raise_h),
            lower: commutator_superop(&lower_h),
            delta,
        }
    }

    fn resonant(&self) -> CMatrix<T> {
        &(&self.damping + &self.raise) + &self.lower
    }

    fn phases(&self, t: T) -> (C<T>, C<T>) {
        let (s, co) = (self.delta * t).sin_cos();
        (c(co, -s), c(co, s))
    }

    fn apply(&self, t: T, v: &[C<T>]) -> Vec<C<T>> {
        let (em, ep) = self.phases(t);
        let d = self.damping.matvec(v);
        let r = self.raise.matvec(v);
        let l = self.lower.matvec(v);
        (0..v.len()).map(|k| d[k] + em * r[k] + ep * l[k]).collect()
    }
}

/// The 16×16 generator acting on column-stacked product-basis states.
#[derive(Clone, Debug)]
pub struct Liouvillian<T: Real = f64> {
    pub matrix: CMatrix<T>,
    pub g1bar: T,
    pub g2bar: T,
    pub f12: T,
}

impl<T: Real> Liouvillian<T> {
    /// Generator for an arbitrary collective coupling value `f12`.
    pub fn from_coupling(g1bar: T, g2bar: T, f12: T) -> Self {
        let matrix = DrivenGenerator::new(g1bar, g2bar, f12, T::zero()).resonant();
        Self {
            matrix,
            g1bar,
            g2bar,
            f12,
        }
    }

    pub fn apply(&self, rho: &DensityMatrix4<T>) -> Result<CMatrix<T>> {
        rho.require_product()?;
        CMatrix::unvectorize(&self.matrix.matvec(&rho.matrix().vectorize()), 4)
    }

    /// ‖trace functional · A‖∞
    pub fn trace_defect(&self) -> T {
        (0..16)
            .map(|j| (0..4).map(|i| self.matrix[(5 * i, j)]).sum::<C<T>>().norm())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

pub fn build_liouvillian<T: Real>(p: &ModelParams<T>) -> Result<Liouvillian<T>> {
    p.validate()?;
    p.require_resonance()?;
    Ok(Liouvillian::from_coupling(p.g1bar, p.g2bar, p.f12()))
}

/// dρ/dt at time `t`, computed directly from the commutator and dissipators.
pub fn apply_generator<T: Real>(p: &ModelParams<T>, rho: &DensityMatrix4<T>, t: T) -> Result<CMatrix<T>> {
    rho.require_product()?;
    let m = rho.matrix();
    let (s, co) = (p.delta_lbar * t).sin_cos();
    let (em, ep) = (c(co, -s), c(co, s));
    let lowering = [embed(&sigma_minus::<T>(), 0), embed(&sigma_minus::<T>(), 1)];
    let drives = [p.g1bar, p.g2bar];
    let mut h = CMatrix::zeros(4, 4);
    for (l, &g) in lowering.iter().zip(&drives) {
        let term = &l.adjoint().scale(em) + &l.scale(ep);
        h = &h - &term.scale_real(g);
    }
    let mut out = (&(&h * m) - &(m * &h)).scale(c(T::zero(), -T::one()));
    let half = T::lit(0.5);
    let mut lindblad = |rate: T, la: &CMatrix<T>, lb: &CMatrix<T>| {
        let ba = &lb.adjoint() * la;
        let jump = &(la * m) * &lb.adjoint();
        let anti = &(&ba * m) + &(m * &ba);
        out = &out + &(&jump - &anti.scale_real(half)).scale_real(rate);
    };
    lindblad(T::one(), &lowering[0], &lowering[0]);
    lindblad(T::one(), &lowering[1], &lowering[1]);
    let collective = T::lit(1.5) * p.f12();
    lindblad(collective, &lowering[0], &lowering[1]);
    lindblad(collective, &lowering[1], &lowering[0]);
    Ok(out)
}

pub type Trajectory<T> = Vec<(T, DensityMatrix4<T>)>;

/// Fixed-step RK4 integration from `rho0` to `t_final`. Every `stride`-th
/// state is stored, together with the initial and the final one.
pub fn time_evolve<T: Real>(
    p: &ModelParams<T>,
    rho0: &DensityMatrix4<T>,
    t_final: T,
    dt: T,
    stride: usize,
) -> Result<Trajectory<T>> {
    p.validate()?;
    rho0.require_product()?;
    if !(dt > T::zero()) || !(t_final >= T::zero()) || !t_final.is_finite() {
        return Err(Error::InvalidParams(format!(
            "time step {dt} and final time {t_final} must be positive"
        )));
    }
    let stride = stride.max(1);
    let generator = DrivenGenerator::new(p.g1bar, p.g2bar, p.f12(), p.delta_lbar);
    let steps = (t_final / dt).ceil().to_usize().unwrap_or(0).max(1);
    let h = t_final / T::lit(steps as f64);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);

    let mut v = rho0.matrix().vectorize();
    let mut out = vec![(T::zero(), rho0.clone())];
    for n in 0..steps {
        let t = T::lit(n as f64) * h;
        let k1 = generator.apply(t, &v);
        let stage = |k: &[C<T>], w: T| -> Vec<C<T>> {
            v.iter().zip(k).map(|(a, b)| *a + b.scale(w)).collect()
        };
        let k2 = generator.apply(t + half * h, &stage(&k1, half * h));
        let k3 = generator.apply(t + half * h, &stage(&k2, half * h));
        let k4 = generator.apply(t + h, &stage(&k3, h));
        for i in 0..16 {
            v[i] += (k1[i] + (k2[i] + k3[i]).scale(T::lit(2.0)) + k4[i]).scale(h * sixth);
        }
        let t_next = t + h;
        let rho = renormalize(&v)?;
        check_positive(&rho, t_next)?;
        v = rho.vectorize();
        if (n + 1) % stride == 0 || n + 1 == steps {
            out.push((t_next, DensityMatrix4::new_unchecked(rho, BasisTag::Product)));
        }
    }
    Ok(out)
}

fn renormalize<T: Real>(v: &[C<T>]) -> Result<CMatrix<T>> {
    let m = CMatrix::unvectorize(v, 4)?.hermitian_part();
    let tr = m.trace().re;
    if !tr.is_finite() || tr <= T::zero() {
        return Err(Error::SolverFailure(format!("trace became {tr} during integration")));
    }
    Ok(m.scale_real(T::one() / tr))
}

/// Fails with a step-size error if ρ has an eigenvalue below −1e−6,
/// detected by a Cholesky factorization of ρ + 1e−6·I.
fn check_positive<T: Real>(rho: &CMatrix<T>, t: T) -> Result<()> {
    let shift = T::tol(1e-6);
    let n = rho.rows();
    let mut l = CMatrix::<T>::zeros(n, n);
    for j in 0..n {
        let mut d = rho[(j, j)].re + shift;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > T::zero()) {
            let lowest = crate::linalg::hermitian_eigenvalues(rho)?[n - 1];
            return Err(Error::StepSize {
                t: t.as_f64(),
                eigenvalue: lowest.as_f64(),
            });
        }
        let d = d.sqrt();
        l[(j, j)] = re(d);
        for i in j + 1..n {
            let mut s = rho[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s.unscale(d);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct SteadyStateSolution<T: Real = f64> {
    #[serde(skip)]
    pub rho: DensityMatrix4<T>,
    /// Number of singular values of the generator below 1e−10.
    pub zero_multiplicity: usize,
    /// ‖A·vec(ρ)‖∞
    pub residual: T,
    /// Smallest nonzero |Re λ| of the generator.
    pub spectral_gap: T,
}

/// Steady state of the resonant master equation.
///
/// With a two-dimensional nullspace (coincident atoms, equal drives) the
/// answer depends on the conserved singlet population, which must be passed
/// as `p00`.
pub fn steady_state<T: Real>(p: &ModelParams<T>, p00: Option<T>) -> Result<SteadyStateSolution<T>> {
    let a = build_liouvillian(p)?;
    steady_state_of(&a, p00)
}

/// As [`steady_state`] for a prebuilt generator.
pub fn steady_state_of<T: Real>(a: &Liouvillian<T>, p00: Option<T>) -> Result<SteadyStateSolution<T>> {
    let svd = singular_values(&a.matrix);
    let zero_tol = T::tol(1e-10);
    let multiplicity = svd.values.iter().filter(|&&s| s < zero_tol).count();

    let v = match multiplicity {
        0 | 1 => {
            let mut m = a.matrix.clone();
            for j in 0..16 {
                m[(0, j)] = if j % 5 == 0 { re(T::one()) } else { re(T::zero()) };
            }
            let mut b = vec![re(T::zero()); 16];
            b[0] = re(T::one());
            lu_solve(&m, &b)?
        }
        2 => {
            let p00 = p00.ok_or(Error::MissingInitialPopulation)?;
            if !(T::zero()..=T::one()).contains(&p00) {
                return Err(Error::InvalidParams(format!("p00 = {p00} must lie in [0, 1]")));
            }
            let n1 = svd.right_vectors.column(14);
            let n2 = svd.right_vectors.column(15);
            let trace = |v: &[C<T>]| (0..4).map(|i| v[5 * i]).sum::<C<T>>();
            let singlet = |v: &[C<T>]| (v[5] - v[6] - v[9] + v[10]).scale(T::lit(0.5));
            let m = CMatrix::from_rows(&[vec![trace(&n1), trace(&n2)], vec![singlet(&n1), singlet(&n2)]])?;
            let coef = lu_solve(&m, &[re(T::one()), re(p00)])?;
            (0..16).map(|k| n1[k] * coef[0] + n2[k] * coef[1]).collect()
        }
        k => {
            return Err(Error::SolverFailure(format!(
                "nullspace of dimension {k} is not supported"
            )))
        }
    };

    let rho = renormalize(&v)?;
    let residual = a
        .matrix
        .matvec(&rho.vectorize())
        .iter()
        .map(|z| z.norm())
        .fold(T::zero(), |x, y| x.max(y));
    if !(residual <= zero_tol) {
        return Err(Error::SolverFailure(format!("residual {residual:e} exceeds 1e-10")));
    }
    let rho = DensityMatrix4::with_tolerance(rho, BasisTag::Product, T::tol(1e-10))
        .map_err(|e| Error::SolverFailure(format!("steady state is not a state: {e}")))?;
    Ok(SteadyStateSolution {
        rho,
        zero_multiplicity: multiplicity.max(1),
        residual,
        spectral_gap: gap_of(&a.matrix),
    })
}

/// Zero-eigenvalue multiplicity and spectral gap of the resonant generator.
pub fn spectral_gap<T: Real>(p: &ModelParams<T>) -> Result<(usize, T)> {
    let a = build_liouvillian(p)?;
    let svd = singular_values(&a.matrix);
    let multiplicity = svd.values.iter().filter(|&&s| s < T::tol(1e-10)).count();
    Ok((multiplicity, gap_of(&a.matrix)))
}

/// Smallest nonzero |Re λ| of `a`.
///
/// B = e^A has eigenvalues e^λ. Its limit power Π projects on the
/// stationary subspace; the spectral radius of D = B − Π is then
/// e^{−gap}, obtained from Gelfand's formula ρ(D) = lim ‖Dⁿ‖^{1/n}
/// with normalized repeated squaring.
fn gap_of<T: Real>(a: &CMatrix<T>) -> T {
    let b = expm(a);
    // squaring amplifies rounding in the unit eigenvalues, so once the
    // change is down at rounding level stop as soon as it stops shrinking
    let mut pi = b.clone();
    let mut last_change = T::infinity();
    for _ in 0..64 {
        let next = &pi * &pi;
        let change = next.max_abs_diff(&pi);
        if !change.is_finite() || (change < T::tol(1e-8) && change >= last_change) {
            break;
        }
        pi = next;
        last_change = change;
        if change <= T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    let d = &b - &pi;
    let norm0 = d.row_sum_norm();
    if norm0 == T::zero() {
        return T::infinity();
    }
    let mut m = d.scale_real(T::one() / norm0);
    let mut log_norm = norm0.ln();
    let mut power = T::one();
    let mut estimate = -log_norm;
    for _ in 0..60 {
        m = &m * &m;
        let s = m.row_sum_norm();
        if s == T::zero() {
            break;
        }
        m = m.scale_real(T::one() / s);
        log_norm = log_norm + log_norm + s.ln();
        power = power + power;
        let next = -log_norm / power;
        let settled = (next - estimate).abs() <= T::tol(1e-12) * next.abs().max(T::one());
        estimate = next;
        if settled {
            break;
        }
    }
    estimate
}
