//! Closed-form steady states and limiting expressions.
//!
//! Matrices are returned in the triplet-singlet basis unless stated
//! otherwise. Entry `(a, b)` is ⟨a|ρ|b⟩ with the index order
//! |1,1⟩, |1,0⟩, |1,−1⟩, |0,0⟩. The detuning is zero throughout.
//!
//! Functions taking `f12` accept any coupling value; values outside the
//! physical range [−0.2237, 2/3] are allowed for exploration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::master::ModelParams;
use crate::qubit::{BasisTag, DensityMatrix4};
use crate::scalar::{c, re, Real, C};

fn l<T: Real>(v: f64) -> T {
    T::lit(v)
}

/// Horner evaluation, coefficients from the constant term up.
fn poly<T: Real>(coeffs: &[T], z: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &k| acc * z + k)
}

fn hermitian_from_upper<T: Real>(diag: [T; 4], upper: &[((usize, usize), C<T>)]) -> CMatrix<T> {
    let mut m = CMatrix::real_diag(&diag);
    for &((i, j), v) in upper {
        m[(i, j)] = v;
        m[(j, i)] = v.conj();
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct G2ZeroCoefficients<T = f64> {
    pub kappa: T,
    pub mu_plus: T,
    pub mu_minus: T,
    pub nu_plus: T,
    pub nu_minus: T,
    pub eta_plus: T,
    pub eta_minus: T,
}

impl<T: Real> G2ZeroCoefficients<T> {
    pub fn new(g1bar: T, f12: T) -> Self {
        let g2 = g1bar * g1bar;
        let f = f12;
        let f2 = f * f;
        let f4 = f2 * f2;
        let k0 = l::<T>(9.0 / 8.0)
            * (l::<T>(2.0) + l::<T>(3.0) * f).powi(2)
            * (l::<T>(2.0) - l::<T>(3.0) * f).powi(2)
            * (l::<T>(4.0) - f2);
        let k1 = l::<T>(864.0) + l::<T>(144.0) * f2 + l::<T>(486.0) * f4;
        let k2 = l::<T>(2560.0) + l::<T>(5184.0) * f2 - l::<T>(1296.0) * f4;
        let k3 = l::<T>(2048.0) + l::<T>(1152.0) * f2;
        let mu = |s: T| l::<T>(32.0) * (l::<T>(16.0) + s * l::<T>(12.0) * f + l::<T>(9.0) * f2);
        let nu = |s: T| {
            l::<T>(18.0) * (l::<T>(32.0) + s * l::<T>(48.0) * f + l::<T>(68.0) * f2 - l::<T>(9.0) * f4)
        };
        let eta = |s: T| l::<T>(9.0) * (l::<T>(2.0) + s * l::<T>(3.0) * f).powi(2) * (l::<T>(4.0) - f2);
        let (p, m) = (T::one(), -T::one());
        Self {
            kappa: poly(&[k0, k1, k2, k3], g2),
            mu_plus: mu(p),
            mu_minus: mu(m),
            nu_plus: nu(p),
            nu_minus: nu(m),
            eta_plus: eta(p),
            eta_minus: eta(m),
        }
    }
}

/// Steady state with only atom 1 driven, for drive `g1bar` and coupling `f12`.
pub fn g2zero_state<T: Real>(g1bar: T, f12: T) -> CMatrix<T> {
    let k = G2ZeroCoefficients::new(g1bar, f12);
    let g = g1bar;
    let g2 = g * g;
    let g3 = g2 * g;
    let f = f12;
    let f2 = f * f;
    let f3 = f2 * f;
    let f4 = f2 * f2;
    let kap = k.kappa;
    let sqrt2 = T::SQRT_2();
    let (two, three, four) = (l::<T>(2.0), l::<T>(3.0), l::<T>(4.0));
    let four_m_f2 = four - f2;

    let p11 = l::<T>(18.0) / kap * poly(&[T::zero(), T::zero(), l::<T>(9.0) * four_m_f2 * f2, l::<T>(16.0) * f2], g2);
    let p10 = poly(&[T::zero(), k.eta_minus, k.nu_minus, k.mu_minus], g2) / kap;
    let p00 = poly(&[T::zero(), k.eta_plus, k.nu_plus, k.mu_plus], g2) / kap;
    let p1m1 = T::one() - p11 - p10 - p00;

    let c0011 = l::<T>(9.0) * sqrt2 / kap
        * g3
        * f
        * (three * (two + three * f) * four_m_f2 + l::<T>(8.0) * (four + two * f - three * f2) * g2);
    let c1011 = l::<T>(9.0) * sqrt2 / kap
        * g3
        * f
        * (three * (two - three * f) * four_m_f2 + l::<T>(8.0) * (four - two * f - three * f2) * g2);
    let pre = -sqrt2 / (four * kap) * g;
    let cm10 = pre
        * poly(
            &[
                l::<T>(9.0) * (two - three * f).powi(2) * (two + three * f) * four_m_f2,
                l::<T>(36.0)
                    * (l::<T>(32.0) - l::<T>(24.0) * f - four * f2 + l::<T>(54.0) * f3 - l::<T>(9.0) * f4),
                l::<T>(32.0) * (l::<T>(32.0) - l::<T>(12.0) * f - l::<T>(18.0) * f2 + l::<T>(27.0) * f3),
            ],
            g2,
        );
    let cm00 = pre
        * poly(
            &[
                l::<T>(9.0) * (two + three * f).powi(2) * (two - three * f) * four_m_f2,
                l::<T>(36.0)
                    * (l::<T>(32.0) + l::<T>(24.0) * f - four * f2 - l::<T>(54.0) * f3 - l::<T>(9.0) * f4),
                l::<T>(32.0) * (l::<T>(32.0) + l::<T>(12.0) * f - l::<T>(18.0) * f2 - l::<T>(27.0) * f3),
            ],
            g2,
        );
    let quartic = l::<T>(16.0) - l::<T>(40.0) * f2 + l::<T>(9.0) * f4;
    let cm11 = three / (two * kap)
        * f
        * g2
        * poly(&[l::<T>(9.0) * quartic, -l::<T>(576.0) * f2, -l::<T>(256.0)], g2);
    let c0010 = g2 / kap
        * poly(
            &[
                l::<T>(9.0) * quartic,
                l::<T>(36.0) * (l::<T>(16.0) + l::<T>(16.0) * f2 - l::<T>(9.0) * f4),
                l::<T>(512.0),
            ],
            g2,
        );

    // lower-triangle entries ⟨a|ρ|b⟩ with a > b are the closed forms
    let z = T::zero();
    hermitian_from_upper(
        [p11, p10, p1m1, p00],
        &[
            ((0, 3), c(z, c0011).conj()),
            ((0, 1), c(z, c1011).conj()),
            ((1, 2), c(z, cm10).conj()),
            ((3, 2), c(z, cm00).conj()),
            ((0, 2), re(cm11)),
            ((1, 3), re(c0010)),
        ],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EqualGCoefficients<T = f64> {
    pub kappa2: T,
    pub kappa3: T,
    pub p00: T,
}

impl<T: Real> EqualGCoefficients<T> {
    pub fn new(gbar: T, f12: T, p00: T) -> Self {
        let g2 = gbar * gbar;
        let a = T::one() + l::<T>(1.5) * f12;
        Self {
            kappa2: poly(&[a * a * l::<T>(0.25), l::<T>(4.0), l::<T>(16.0)], g2),
            kappa3: poly(&[T::one(), l::<T>(4.0), l::<T>(12.0)], g2),
            p00,
        }
    }
}

/// Numerator of the equal-drive state; `a` = 1 + (3/2)F, `singlet` the
/// (3,3) entry.
fn equal_drive_numerator<T: Real>(gbar: T, a: T, singlet: T) -> CMatrix<T> {
    let g = gbar;
    let g2 = g * g;
    let g4 = g2 * g2;
    let sqrt2 = T::SQRT_2();
    let four = l::<T>(4.0);
    let z = T::zero();
    hermitian_from_upper(
        [
            four * g4,
            four * g4 + l::<T>(2.0) * g2,
            four * g4 + l::<T>(2.0) * g2 + a * a * l::<T>(0.25),
            singlet,
        ],
        &[
            ((0, 1), c(z, l::<T>(2.0) * sqrt2 * g2 * g)),
            ((0, 2), re(-a * g2)),
            ((1, 2), c(z, sqrt2 * l::<T>(0.5) * g * (a + four * g2))),
        ],
    )
}

/// Steady state with equal drives at separated positions.
pub fn equal_drive_state<T: Real>(gbar: T, f12: T) -> CMatrix<T> {
    let a = T::one() + l::<T>(1.5) * f12;
    let k = EqualGCoefficients::new(gbar, f12, T::zero());
    equal_drive_numerator(gbar, a, l::<T>(4.0) * gbar.powi(4)).scale_real(T::one() / k.kappa2)
}

/// Steady state with equal drives at coincident positions, where the
/// singlet population `p00` of the initial state is conserved.
pub fn coincident_equal_drive_state<T: Real>(gbar: T, p00: T) -> CMatrix<T> {
    let k = EqualGCoefficients::new(gbar, l::<T>(2.0 / 3.0), p00);
    let triplet = equal_drive_numerator(gbar, l::<T>(2.0), T::zero()).scale_real((T::one() - p00) / k.kappa3);
    let mut m = triplet;
    m[(3, 3)] = re(p00);
    m
}

fn from_ts<T: Real>(m: CMatrix<T>) -> DensityMatrix4<T> {
    DensityMatrix4::new_unchecked(m, BasisTag::TripletSinglet)
}

/// Closed-form steady state for Ḡ₂ = 0.
pub fn steady_g2zero<T: Real>(p: &ModelParams<T>) -> Result<DensityMatrix4<T>> {
    p.validate()?;
    if p.g2bar != T::zero() {
        return Err(Error::WrongConfiguration(format!(
            "requires g2bar = 0, got {}",
            p.g2bar
        )));
    }
    if p.delta_lbar != T::zero() {
        return Err(Error::UnsupportedDetuning(p.delta_lbar.as_f64()));
    }
    let f12 = p.f12();
    if G2ZeroCoefficients::new(p.g1bar, f12).kappa == T::zero() {
        return Err(Error::WrongConfiguration(
            "undriven coincident atoms keep their initial singlet population".into(),
        ));
    }
    Ok(from_ts(g2zero_state(p.g1bar, f12)))
}

/// Closed-form steady state for Ḡ₁ = Ḡ₂. `p00` is needed only at x = 0.
pub fn steady_equal_g<T: Real>(p: &ModelParams<T>, p00: Option<T>) -> Result<DensityMatrix4<T>> {
    p.validate()?;
    if p.g1bar != p.g2bar {
        return Err(Error::WrongConfiguration(format!(
            "requires g1bar = g2bar, got {} and {}",
            p.g1bar, p.g2bar
        )));
    }
    if p.delta_lbar != T::zero() {
        return Err(Error::UnsupportedDetuning(p.delta_lbar.as_f64()));
    }
    if p.x == T::zero() {
        let p00 = p00.ok_or(Error::MissingInitialPopulation)?;
        if !(T::zero()..=T::one()).contains(&p00) {
            return Err(Error::InvalidParams(format!("p00 = {p00} must lie in [0, 1]")));
        }
        return Ok(from_ts(coincident_equal_drive_state(p.g1bar, p00)));
    }
    Ok(from_ts(equal_drive_state(p.g1bar, p.f12())))
}

/// Strong-drive limit of the Ḡ₂ = 0 state, an X-state in the product basis.
pub fn limit_xstate_g2zero<T: Real>(f12: T) -> DensityMatrix4<T> {
    let y = l::<T>(16.0) + l::<T>(9.0) * f12 * f12;
    let pop = l::<T>(2.25) * f12 * f12 / y;
    let coh = -l::<T>(3.0) * f12 / y;
    let half = l::<T>(0.5);
    let m = hermitian_from_upper(
        [pop, half - pop, pop, half - pop],
        &[((0, 3), re(coh)), ((1, 2), re(coh))],
    );
    DensityMatrix4::new_unchecked(m, BasisTag::Product)
}

/// Ḡ₂ = 0 state for atoms so far apart that F vanishes (product basis).
pub fn limit_far_apart_g2zero<T: Real>(g1bar: T) -> DensityMatrix4<T> {
    let g2 = g1bar * g1bar;
    let d = T::one() + l::<T>(8.0) * g2;
    let four = l::<T>(4.0);
    let m = hermitian_from_upper(
        [T::zero(), four * g2 / d, T::zero(), (T::one() + four * g2) / d],
        &[((1, 3), c(T::zero(), l::<T>(2.0) * g1bar / d))],
    );
    DensityMatrix4::new_unchecked(m, BasisTag::Product)
}

/// Largest Ḡ₁² for which the Ḡ₂ = 0 weak-field form keeps
/// ⟨1,0|ρ|1,0⟩ + ⟨0,0|ρ|0,0⟩ ≤ 1.
pub fn weak_field_bound_g2zero<T: Real>(f12: T) -> T {
    let a = l::<T>(1.5) * f12;
    l::<T>(0.25) * (T::one() - a).powi(2) * (T::one() + a).powi(2) / (T::one() + a * a)
}

/// Largest Ḡ₁² for which the equal-drive weak-field form keeps ⟨1,0|ρ|1,0⟩ ≤ 1.
pub fn weak_field_bound_equal_g<T: Real>(f12: T) -> T {
    (l::<T>(2.0) + l::<T>(3.0) * f12).powi(2) / l::<T>(32.0)
}

/// Second-order expansion in Ḡ₁ of the Ḡ₂ = 0 state, with a flag telling
/// whether Ḡ₁ is inside the validity bound. The truncated matrix is
/// Hermitian with unit trace but is not positive to all orders.
pub fn weak_field_g2zero<T: Real>(g1bar: T, f12: T) -> (DensityMatrix4<T>, bool) {
    let g = g1bar;
    let g2 = g * g;
    let a = l::<T>(1.5) * f12;
    let one = T::one();
    let sqrt2 = T::SQRT_2();
    let two = l::<T>(2.0);
    let p10 = two * g2 / (one + a).powi(2);
    let p00 = two * g2 / (one - a).powi(2);
    let z = T::zero();
    let m = hermitian_from_upper(
        [z, p10, one - p10 - p00, p00],
        &[
            ((0, 2), re(l::<T>(3.0) * f12 * g2 / (one - a * a))),
            ((1, 2), c(z, sqrt2 * g / (one + a))),
            ((1, 3), re(two * g2 / (one - a * a))),
            ((2, 3), c(z, -sqrt2 * g / (one - a))),
        ],
    );
    (from_ts(m), g2 <= weak_field_bound_g2zero(f12))
}

/// Second-order expansion in Ḡ₁ of the equal-drive state.
pub fn weak_field_equal_g<T: Real>(g1bar: T, f12: T) -> (DensityMatrix4<T>, bool) {
    let g = g1bar;
    let g2 = g * g;
    let d = l::<T>(2.0) + l::<T>(3.0) * f12;
    let p10 = l::<T>(32.0) * g2 / (d * d);
    let z = T::zero();
    let m = hermitian_from_upper(
        [z, p10, T::one() - p10, z],
        &[
            ((0, 2), re(-l::<T>(8.0) * g2 / d)),
            ((1, 2), c(z, l::<T>(4.0) * T::SQRT_2() * g / d)),
        ],
    );
    (from_ts(m), g2 <= weak_field_bound_equal_g(f12))
}

/// Weak-field concurrence of the Ḡ₂ = 0 state:
/// (3/2)|F|·(⟨0,0|ρ|0,0⟩ + ⟨1,0|ρ|1,0⟩) with second-order populations.
pub fn weak_concurrence_g2zero<T: Real>(g1bar: T, f12: T) -> T {
    let (rho, _) = weak_field_g2zero(g1bar, f12);
    l::<T>(1.5) * f12.abs() * (rho.get(1, 1).re + rho.get(3, 3).re)
}

/// Weak-field concurrence of the equal-drive state:
/// max{0, −(3/2)F·⟨1,0|ρ|1,0⟩}.
pub fn weak_concurrence_equal_g<T: Real>(g1bar: T, f12: T) -> T {
    let (rho, _) = weak_field_equal_g(g1bar, f12);
    (-l::<T>(1.5) * f12 * rho.get(1, 1).re).max(T::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticScalars<T = f64> {
    pub qmi: T,
    pub geo_discord_2: T,
    pub linear_entropy: T,
    pub weak_concurrence_coeff: T,
}

/// `coef·log₂(arg)`, zero when `coef` is zero.
fn weighted_log2<T: Real>(coef: T, arg: T) -> T {
    if coef == T::zero() {
        T::zero()
    } else {
        coef * arg.log2()
    }
}

/// Correlation measures of the strong-drive X-state, in closed form.
pub fn asymptotic_scalars_g2zero<T: Real>(f12: T) -> AsymptoticScalars<T> {
    let f2 = f12 * f12;
    let y = l::<T>(16.0) + l::<T>(9.0) * f2;
    let sy = y.sqrt();
    let four = l::<T>(4.0);
    let b = l::<T>(4.5) * f2;
    let two_sy = l::<T>(2.0) * sy;
    let qmi = weighted_log2((sy - four) / two_sy, sy - four) - weighted_log2(b / y, b)
        + l::<T>(0.5) * y.log2()
        - weighted_log2((l::<T>(16.0) + b) / y, l::<T>(16.0) + b)
        + weighted_log2((four + sy) / two_sy, four + sy)
        - T::one();
    AsymptoticScalars {
        qmi,
        geo_discord_2: l::<T>(36.0) * f2 / (y * y),
        linear_entropy: l::<T>(0.75) - four / y,
        weak_concurrence_coeff: l::<T>(1.5) * f12.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::{coupling_f, steady_state};
    use crate::qubit::change_basis;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(g1: f64, g2: f64, x: f64, r: f64) -> ModelParams<f64> {
        ModelParams::new(g1, g2, x, r).unwrap()
    }

    fn ground_ts() -> DensityMatrix4<f64> {
        DensityMatrix4::basis_projector(2, BasisTag::TripletSinglet)
    }

    #[test]
    fn g2zero_matches_numeric_solver() {
        for (g, x, r) in [(0.5, FRAC_PI_2, 1.0), (1.3, 3.0, 0.0), (0.2, 0.7, 1.0), (4.9, 0.1, 0.0)] {
            let p = params(g, 0.0, x, r);
            let exact = steady_g2zero(&p).unwrap();
            let num = steady_state(&p, None).unwrap().rho;
            assert!(exact.max_abs_diff(&num) < 1e-10, "({g}, {x}, {r})");
        }
    }

    #[test]
    fn equal_drive_matches_numeric_solver() {
        for (g, x, r) in [(0.7, 1.0, 1.0), (2.5, 0.3, 0.0), (0.05, 9.0, 1.0)] {
            let p = params(g, g, x, r);
            let exact = steady_equal_g(&p, None).unwrap();
            let num = steady_state(&p, None).unwrap().rho;
            assert!(exact.max_abs_diff(&num) < 1e-10, "({g}, {x}, {r})");
        }
        let p = params(1.0, 1.0, 0.0, 1.0);
        let exact = steady_equal_g(&p, Some(0.3)).unwrap();
        let num = steady_state(&p, Some(0.3)).unwrap().rho;
        assert!(exact.max_abs_diff(&num) < 1e-10);
    }

    #[test]
    fn closed_forms_are_states() {
        for g in [0.0, 0.01, 0.3, 1.0, 10.0, 1e3] {
            for f in [-0.2237, 0.0, 0.3, 2.0 / 3.0] {
                if g == 0.0 && f == 2.0 / 3.0 {
                    assert_eq!(G2ZeroCoefficients::new(g, f).kappa, 0.0);
                    continue;
                }
                let a = DensityMatrix4::new(g2zero_state::<f64>(g, f), BasisTag::TripletSinglet);
                let b = DensityMatrix4::new(equal_drive_state::<f64>(g, f), BasisTag::TripletSinglet);
                assert!(a.is_ok() && b.is_ok(), "g={g} f={f}");
                let k = G2ZeroCoefficients::new(g, f);
                assert!(k.kappa > 0.0);
                let pops: f64 = (0..4).map(|i| g2zero_state::<f64>(g, f)[(i, i)].re).sum();
                assert!((pops - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn weak_drive_leaves_atoms_in_ground_state() {
        let g2 = steady_g2zero(&params(1e-9, 0.0, 1.0, 1.0)).unwrap();
        assert!(g2.max_abs_diff(&ground_ts()) < 1e-8);
        let eq = steady_equal_g(&params(1e-9, 1e-9, 1.0, 1.0), None).unwrap();
        assert!(eq.max_abs_diff(&ground_ts()) < 1e-8);
        assert!(weak_field_g2zero::<f64>(0.0, 0.3).0.max_abs_diff(&ground_ts()) == 0.0);
        assert!(weak_field_equal_g::<f64>(0.0, 0.3).0.max_abs_diff(&ground_ts()) == 0.0);
    }

    #[test]
    fn strong_equal_drive_is_nearly_maximally_mixed() {
        let rho = steady_equal_g(&params(1e4, 1e4, 1.0, 1.0), None).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix4::maximally_mixed(BasisTag::TripletSinglet)) < 1e-4);
    }

    #[test]
    fn excited_population_saturates_at_one_twentieth() {
        let rho = steady_g2zero(&params(1e3, 0.0, 0.0, 1.0)).unwrap();
        assert!((rho.get(0, 0).re - 0.05).abs() < 1e-4);
    }

    #[test]
    fn xstate_limit() {
        let x = limit_xstate_g2zero::<f64>(2.0 / 3.0);
        let pops = x.coupled_populations();
        assert!((pops[0] - 0.05).abs() < 1e-15);
        assert!((pops[3] - 0.35).abs() < 1e-15);
        let zero = limit_xstate_g2zero::<f64>(0.0);
        assert_eq!(zero.matrix(), &CMatrix::real_diag(&[0.0, 0.5, 0.0, 0.5]));
        let exact = change_basis(&steady_g2zero(&params(1e6, 0.0, 0.0, 1.0)).unwrap(), BasisTag::Product);
        // coherences vanish only as 1/G
        assert!(exact.max_abs_diff(&x) < 1e-6);
    }

    #[test]
    fn xstate_populations_are_monotone() {
        let fs: Vec<f64> = (0..100).map(|i| -0.2237 + (2.0 / 3.0 + 0.2237) * i as f64 / 99.0).collect();
        let pops_of = |fs: &[f64]| -> Vec<[f64; 4]> {
            fs.iter().map(|&f| limit_xstate_g2zero::<f64>(f).coupled_populations()).collect()
        };
        // |1,1⟩ rises and |1,−1⟩ falls with F²
        let mut by_square = fs.clone();
        by_square.sort_by(|a, b| (a * a).partial_cmp(&(b * b)).unwrap());
        for w in pops_of(&by_square).windows(2) {
            assert!(w[1][0] >= w[0][0] - 1e-15 && w[1][0] <= 0.05 + 1e-15);
            assert!(w[1][2] <= w[0][2] + 1e-15);
        }
        // |0,0⟩ rises and |1,0⟩ falls with F
        for w in pops_of(&fs).windows(2) {
            assert!(w[1][3] >= w[0][3] - 1e-15 && w[1][3] <= 0.35 + 1e-15);
            assert!(w[1][1] <= w[0][1] + 1e-15);
        }
    }

    #[test]
    fn far_apart_limit() {
        assert!(limit_far_apart_g2zero::<f64>(0.0).max_abs_diff(&DensityMatrix4::basis_projector(3, BasisTag::Product)) == 0.0);
        let one = limit_far_apart_g2zero::<f64>(1.0);
        assert!((one.get(1, 1).re - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(one.get(0, 0).re, 0.0);
        let strong = limit_far_apart_g2zero::<f64>(1e8);
        assert!(strong.max_abs_diff(&DensityMatrix4::new_unchecked(
            CMatrix::real_diag(&[0.0, 0.5, 0.0, 0.5]),
            BasisTag::Product
        )) < 1e-8);
        let exact = change_basis(&DensityMatrix4::new_unchecked(g2zero_state::<f64>(0.7, 0.0), BasisTag::TripletSinglet), BasisTag::Product);
        assert!(exact.max_abs_diff(&limit_far_apart_g2zero::<f64>(0.7)) < 1e-15);
    }

    #[test]
    fn weak_field_bound_saturation_fills_singlet() {
        let f = coupling_f::<f64>(1e-4, 1.0);
        let g = weak_field_bound_g2zero::<f64>(f).sqrt();
        let (rho, valid) = weak_field_g2zero::<f64>(g, f);
        assert!(valid);
        assert!(rho.get(3, 3).re > 0.999);
        assert!(rho.get(1, 1).re < 1e-3);
    }

    #[test]
    fn weak_field_equal_g_populates_symmetric_state_only() {
        let (rho, valid) = weak_field_equal_g::<f64>(0.05, 0.3);
        assert!(valid);
        assert!(rho.get(1, 1).re > 0.0);
        assert_eq!(rho.get(3, 3).re, 0.0);
        assert!(!weak_field_equal_g::<f64>(1.0, 0.3).1);
    }

    // The truncation error divided by Ḡ₁³ stays bounded as Ḡ₁ → 0.
    #[test]
    fn weak_field_forms_are_second_order() {
        let f = 0.3;
        for g in [0.04, 0.02, 0.01, 0.005, 0.001] {
            let e1 = weak_field_g2zero::<f64>(g, f).0.matrix().max_abs_diff(&g2zero_state::<f64>(g, f)) / g.powi(3);
            let e2 = weak_field_equal_g::<f64>(g, f).0.matrix().max_abs_diff(&equal_drive_state::<f64>(g, f)) / g.powi(3);
            assert!(e1 < 45.0 && e2 < 12.0, "g={g}: {e1} {e2}");
        }
    }

    #[test]
    fn weak_concurrence_signs() {
        assert_eq!(weak_concurrence_equal_g::<f64>(0.05, 0.3), 0.0);
        assert!(weak_concurrence_equal_g::<f64>(0.05, -0.2) > 0.0);
        assert_eq!(weak_concurrence_equal_g::<f64>(0.0, -0.2), 0.0);
        assert_eq!(weak_concurrence_g2zero::<f64>(0.0, 0.3), 0.0);
    }

    #[test]
    fn asymptotic_scalars() {
        let s = asymptotic_scalars_g2zero::<f64>(2.0 / 3.0);
        assert!((s.linear_entropy - 0.55).abs() < 1e-15);
        assert!((s.geo_discord_2 - 0.04).abs() < 1e-15);
        assert!((s.weak_concurrence_coeff - 1.0).abs() < 1e-15);
        let z = asymptotic_scalars_g2zero::<f64>(0.0);
        assert_eq!(z.geo_discord_2, 0.0);
        assert!((z.linear_entropy - 0.5).abs() < 1e-15);
        assert!(z.qmi.abs() < 1e-15);
    }

    #[test]
    fn wrong_configuration() {
        assert!(matches!(steady_g2zero(&params(1.0, 0.5, 1.0, 1.0)), Err(Error::WrongConfiguration(_))));
        assert!(matches!(steady_equal_g(&params(1.0, 0.5, 1.0, 1.0), None), Err(Error::WrongConfiguration(_))));
        assert!(matches!(
            steady_equal_g(&params(1.0, 1.0, 0.0, 1.0), None),
            Err(Error::MissingInitialPopulation)
        ));
    }

    #[test]
    fn single_precision_closed_form() {
        let p = ModelParams::<f32>::new(0.5, 0.0, PI as f32 / 2.0, 1.0).unwrap();
        let a = steady_g2zero(&p).unwrap();
        let b = steady_g2zero(&params(0.5, 0.0, FRAC_PI_2, 1.0)).unwrap();
        assert!(a.cast::<f64>().max_abs_diff(&b) < 1e-6);
    }
}
