//! Acceptance criteria as a registry of checks, shared by the `verify`
//! subcommand and the acceptance test target.

use std::f64::consts::PI;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlations::{
    classical_correlation, concurrence, full_report, geometric_discord, linear_entropy, marginal_entropy,
    mutual_information, quantum_discord,
};
use crate::error::Result;
use crate::master::{apply_generator, coupling_f, steady_state, steady_state_of, time_evolve, Liouvillian, ModelParams};
use crate::oracles::{
    equal_drive_state, g2zero_state, limit_xstate_g2zero, steady_equal_g, steady_g2zero, weak_concurrence_equal_g,
    weak_concurrence_g2zero, weak_field_equal_g, weak_field_g2zero,
};
use crate::qubit::{bloch_decompose, bloch_reconstruct, Atom, BasisTag, DensityMatrix4};
use crate::random::{local_unitary_conjugate, random_density_matrix, random_mixed_state, random_pure_state, random_unitary};
use crate::sweep::{distance_to_x, evaluate_grid, figure, parse_csv, csv_string, run_sweep, Mode, Output, RangeSpec, Row, Spacing, SweepConfig, ValueSpec, CAPTION_DISTANCES};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Points per axis of the oracle-equivalence grid.
    pub grid_size: usize,
    /// Random instances per property suite.
    pub instances: usize,
    /// Random initial states per parameter point in the dynamics check.
    pub trajectories: usize,
    /// Test hook: perturb the coupling function on the numeric side.
    pub corrupt_coupling: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid_size: 7,
            instances: 100,
            trajectories: 20,
            corrupt_coupling: false,
        }
    }
}

impl VerifyOptions {
    /// Smaller instance counts for a quick run; `grid_size` still sets the
    /// oracle grid.
    pub fn smoke(grid_size: usize) -> Self {
        Self {
            grid_size,
            instances: 10,
            trajectories: 2,
            corrupt_coupling: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("{status} [{}] {}: {}", self.id, self.name, self.detail)
    }
}

struct Check {
    passed: bool,
    detail: String,
}

impl Check {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    run: fn(&VerifyOptions) -> Result<Check>,
}

impl Criterion {
    pub fn run(&self, opts: &VerifyOptions) -> Outcome {
        let (passed, detail) = match (self.run)(opts) {
            Ok(c) => (c.passed, c.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        Outcome {
            id: self.id,
            name: self.name,
            passed,
            detail,
        }
    }
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, name: "oracle equivalence", run: oracle_equivalence },
    Criterion { id: 2, name: "coupling extremes", run: coupling_extremes },
    Criterion { id: 3, name: "strong-drive X-state values", run: xstate_values },
    Criterion { id: 4, name: "equal-drive strong-field limit", run: equal_drive_strong_limit },
    Criterion { id: 5, name: "sudden death", run: sudden_death },
    Criterion { id: 6, name: "weak-field consistency", run: weak_field_consistency },
    Criterion { id: 7, name: "convergence of dynamics", run: dynamics_convergence },
    Criterion { id: 8, name: "discord zeros follow coupling zeros", run: discord_zero_coincidence },
    Criterion { id: 9, name: "property suites", run: property_suites },
    Criterion { id: 10, name: "figure curve properties", run: figure_curves },
];

pub fn criterion(id: u8) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

pub fn run_all(opts: &VerifyOptions) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| c.run(opts)).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    RangeSpec { start: a, stop: b, count: n, spacing: Spacing::Linear }
        .values()
        .expect("valid range")
}

fn fmax(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn oracle_equivalence(o: &VerifyOptions) -> Result<Check> {
    let start = Instant::now();
    let n = o.grid_size.max(1);
    let g1s = linspace(0.05, 5.0, n);
    let xs = linspace(0.1, 10.0, n);
    let mut points = Vec::new();
    for &g in &g1s {
        for &x in &xs {
            for r in [0.0, 1.0] {
                points.push((g, x, r));
            }
        }
    }
    let scale = if o.corrupt_coupling { 1.01 } else { 1.0 };
    let devs: Vec<[f64; 2]> = points
        .par_iter()
        .map(|&(g, x, r)| {
            let f = coupling_f(x, r) * scale;
            let mut out = [0.0; 2];
            for (k, mode) in [Mode::G2zero, Mode::Equalg].into_iter().enumerate() {
                let g2 = if mode == Mode::G2zero { 0.0 } else { g };
                let p = ModelParams::new(g, g2, x, r)?;
                let exact = match mode {
                    Mode::G2zero => steady_g2zero(&p)?,
                    Mode::Equalg => steady_equal_g(&p, None)?,
                };
                let numeric = steady_state_of(&Liouvillian::from_coupling(g, g2, f), None)?.rho;
                out[k] = exact.max_abs_diff(&numeric);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let g2zero = fmax(devs.iter().map(|d| d[0]));
    let equal = fmax(devs.iter().map(|d| d[1]));
    let secs = start.elapsed().as_secs_f64();
    Ok(Check::new(
        g2zero <= 1e-10 && equal <= 1e-10 && secs < 30.0,
        format!(
            "{n}x{n}x2 grid, max deviation {g2zero:.2e} (g2 = 0) and {equal:.2e} (g1 = g2), limit 1e-10, {secs:.2} s of 30 s"
        ),
    ))
}

/// Golden-section minimum of a unimodal function on [a, b].
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    while b - a > 1e-12 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - ratio * (b - a);
        d = a + ratio * (b - a);
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn coupling_extremes(_: &VerifyOptions) -> Result<Check> {
    let mut limit_err: f64 = 0.0;
    for r in [0.0, 0.5, 1.0] {
        for x in [0.0f64, 1e-9, 1e-7] {
            limit_err = limit_err.max((coupling_f(x, r) - 2.0 / 3.0).abs());
        }
    }
    let grid = linspace(3.0, 6.0, 3001);
    let coarse = grid
        .iter()
        .copied()
        .min_by(|a, b| coupling_f(*a, 1.0).total_cmp(&coupling_f(*b, 1.0)))
        .expect("non-empty grid");
    let (x_min, f_min) = golden_min(|x| coupling_f(x, 1.0), coarse - 1e-3, coarse + 1e-3);
    let passed = limit_err <= 1e-12 && (f_min + 0.2237).abs() <= 5e-4 && (x_min - 4.233).abs() <= 5e-3;
    Ok(Check::new(
        passed,
        format!("|F(x->0) - 2/3| = {limit_err:.1e}; min F = {f_min:.6} at x = {x_min:.5}"),
    ))
}

fn xstate_values(_: &VerifyOptions) -> Result<Check> {
    let x = limit_xstate_g2zero(2.0f64 / 3.0);
    let pops = x.coupled_populations();
    let le = linear_entropy(&x);
    let gd2 = geometric_discord(&x, Atom::Second)?;
    let d1 = quantum_discord(&x, Atom::First)?;
    let ccl1 = classical_correlation(&x, Atom::First)?.value;
    let qmi = mutual_information(&x)?;
    let errs = [
        (pops[0] - 0.05).abs(),
        (pops[3] - 0.35).abs(),
        (le - 0.55).abs(),
        (gd2 - 0.04).abs(),
    ];
    let passed = errs.iter().all(|&e| e <= 1e-12) && d1 <= 1e-6 && (ccl1 - qmi).abs() <= 1e-6;
    Ok(Check::new(
        passed,
        format!(
            "pop_11 {:.15}, pop_00 {:.15}, linear entropy {le:.15}, geo discord 2 {gd2:.15}, discord 1 {d1:.1e}, |ccl_1 - qmi| {:.1e}",
            pops[0],
            pops[3],
            (ccl1 - qmi).abs()
        ),
    ))
}

fn equal_drive_strong_limit(_: &VerifyOptions) -> Result<Check> {
    let p = ModelParams::new(1e4f64, 1e4, 1.0, 1.0)?;
    let rho = steady_equal_g(&p, None)?;
    let td = rho.trace_distance(&DensityMatrix4::maximally_mixed(BasisTag::TripletSinglet));
    let r = full_report(&rho)?;
    let corr = fmax([r.concurrence, r.qmi, r.discord_1, r.discord_2, r.geo_discord_1, r.geo_discord_2]);
    let le_err = (r.linear_entropy - 0.75).abs();
    Ok(Check::new(
        td <= 1e-6 && corr <= 1e-6 && le_err <= 1e-6,
        format!(
            "trace distance to I/4 {td:.3e} (limit 1e-6), largest correlation {corr:.2e}, |S_L - 3/4| {le_err:.2e}"
        ),
    ))
}

/// Index of the first point of the trailing run of exact zeros, if any.
fn death_index(c: &[f64]) -> Option<usize> {
    let k = c.iter().rposition(|&v| v != 0.0).map_or(0, |i| i + 1);
    (k < c.len()).then_some(k)
}

fn sudden_death(_: &VerifyOptions) -> Result<Check> {
    let g1 = RangeSpec { start: 0.01, stop: 10.0, count: 200, spacing: Spacing::Log }.values()?;
    let x = distance_to_x(0.01);
    let mut passed = true;
    let mut detail = Vec::new();
    for mode in [Mode::G2zero, Mode::Equalg] {
        let rows = evaluate_grid(mode, &g1, &[x], 1.0, None, &[Output::Concurrence], false)?;
        let c: Vec<f64> = rows.iter().map(|r| r.get("concurrence").unwrap_or(f64::NAN)).collect();
        let (peak_at, peak) = c.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, v)| {
            if v > acc.1 {
                (i, v)
            } else {
                acc
            }
        });
        let death = death_index(&c);
        let ok = peak > 0.0 && c[0] < peak && death.is_some_and(|d| d > peak_at);
        passed &= ok;
        detail.push(match death {
            Some(d) => format!(
                "{}: peak {peak:.4} at g1 = {:.4}, zero from g1 = {:.4}",
                mode.name(),
                g1[peak_at],
                g1[d]
            ),
            None => format!("{}: peak {peak:.4}, no sudden death", mode.name()),
        });
    }
    Ok(Check::new(passed, detail.join("; ")))
}

fn weak_field_consistency(_: &VerifyOptions) -> Result<Check> {
    let (g, f) = (0.05f64, 0.3);
    let bound = 3.0 * g * g * g;
    let exact_a = DensityMatrix4::new(g2zero_state(g, f), BasisTag::TripletSinglet)?;
    let exact_b = DensityMatrix4::new(equal_drive_state(g, f), BasisTag::TripletSinglet)?;
    let dev_a = weak_field_g2zero(g, f).0.max_abs_diff(&exact_a);
    let dev_b = weak_field_equal_g(g, f).0.max_abs_diff(&exact_b);
    let conc_a = (weak_concurrence_g2zero(g, f) - concurrence(&exact_a)?).abs();
    let conc_b = (weak_concurrence_equal_g(g, f) - concurrence(&exact_b)?).abs();
    let worst = fmax([dev_a, dev_b, conc_a, conc_b]);
    Ok(Check::new(
        worst <= bound,
        format!(
            "entrywise {dev_a:.2e} (g2 = 0) and {dev_b:.2e} (g1 = g2); concurrence {conc_a:.2e} and {conc_b:.2e}; bound {bound:.2e}"
        ),
    ))
}

fn dynamics_convergence(o: &VerifyOptions) -> Result<Check> {
    let points = [
        (0.6, 0.0, PI / 3.0, 1.0),
        (1.5, 0.0, 2.0, 0.0),
        (0.4, 0.4, 1.0, 1.0),
        (1.2, 1.2, 0.5, 0.0),
    ];
    let n = o.trajectories.max(1);
    let runs: Vec<(usize, u64)> = (0..points.len()).flat_map(|i| (0..n as u64).map(move |s| (i, s))).collect();
    let worst = runs
        .par_iter()
        .map(|&(i, seed)| {
            let (g1, g2, x, r) = points[i];
            let p = ModelParams::new(g1, g2, x, r)?;
            let sol = steady_state(&p, None)?;
            let start = random_density_matrix::<f64, _>(&mut ChaCha8Rng::seed_from_u64(1000 * i as u64 + seed));
            let traj = time_evolve(&p, &start, 50.0 / sol.spectral_gap, 1e-2, usize::MAX)?;
            Ok(traj.last().expect("non-empty").1.trace_distance(&sol.rho))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = fmax(worst);

    let p = ModelParams::new(0.8, 0.8, 0.0, 1.0)?;
    let coincident = (0..n as u64)
        .into_par_iter()
        .map(|seed| {
            let start = random_density_matrix::<f64, _>(&mut ChaCha8Rng::seed_from_u64(5000 + seed));
            let p00 = start.coupled_populations()[3];
            let sol = steady_state(&p, Some(p00))?;
            let traj = time_evolve(&p, &start, 50.0 / sol.spectral_gap, 1e-2, usize::MAX)?;
            let last = &traj.last().expect("non-empty").1;
            Ok(((last.coupled_populations()[3] - p00).abs(), last.trace_distance(&sol.rho)))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let p00_err = fmax(coincident.iter().map(|c| c.0));
    let coincident_td = fmax(coincident.iter().map(|c| c.1));
    Ok(Check::new(
        worst <= 1e-6 && coincident_td <= 1e-6 && p00_err <= 1e-8,
        format!(
            "{} trajectories, worst trace distance {worst:.2e}; coincident atoms: trace distance {coincident_td:.2e}, singlet drift {p00_err:.2e}",
            runs.len() + n
        ),
    ))
}

/// Roots of F(·, r) in [a, b] by bisection from sign changes on a grid.
fn coupling_zeros(r: f64, a: f64, b: f64) -> Vec<f64> {
    let grid = linspace(a, b, 4000);
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (coupling_f(lo, r), coupling_f(hi, r));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if coupling_f(mid, r).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

fn discord_zero_coincidence(_: &VerifyOptions) -> Result<Check> {
    let mut at_zeros: f64 = 0.0;
    let mut away = f64::INFINITY;
    let mut count = 0;
    for r in [1.0, 0.0] {
        for x in coupling_zeros(r, 0.1, 12.0) {
            let rho = limit_xstate_g2zero(coupling_f(x, r));
            at_zeros = at_zeros.max(quantum_discord(&rho, Atom::Second)?).max(geometric_discord(&rho, Atom::Second)?);
            count += 1;
        }
        for x in linspace(0.1, 12.0, 120) {
            let f = coupling_f(x, r);
            if f.abs() > 0.02 {
                let rho = limit_xstate_g2zero(f);
                away = away.min(quantum_discord(&rho, Atom::Second)?).min(geometric_discord(&rho, Atom::Second)?);
            }
        }
    }
    Ok(Check::new(
        count > 0 && at_zeros <= 1e-6 && away > 1e-6,
        format!("{count} zeros of F; largest discord there {at_zeros:.1e}; smallest discord where |F| > 0.02 is {away:.2e}"),
    ))
}

fn property_suites(o: &VerifyOptions) -> Result<Check> {
    let n = o.instances.max(1) as u64;
    let results = (0..n)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_mixed_state::<f64, _>(&mut rng);
            let rep = full_report(&rho)?;
            let negative = rep.discord_1.min(rep.discord_2).min(0.0).abs();
            let ccl_excess = (rep.ccl_1.max(rep.ccl_2) - rep.qmi).max(0.0);

            let u1 = random_unitary::<f64, _>(&mut rng, 2);
            let u2 = random_unitary::<f64, _>(&mut rng, 2);
            let moved = full_report(&local_unitary_conjugate(&rho, &u1, &u2))?;
            let lu = fmax(
                [
                    (rep.concurrence, moved.concurrence),
                    (rep.qmi, moved.qmi),
                    (rep.discord_1, moved.discord_1),
                    (rep.discord_2, moved.discord_2),
                    (rep.geo_discord_1, moved.geo_discord_1),
                    (rep.geo_discord_2, moved.geo_discord_2),
                    (rep.linear_entropy, moved.linear_entropy),
                ]
                .iter()
                .map(|(a, b)| (a - b).abs()),
            );

            let pure = random_pure_state::<f64, _>(&mut rng);
            let s = marginal_entropy(&pure, Atom::First)?;
            let pure_err = fmax(
                [Atom::First, Atom::Second]
                    .into_iter()
                    .map(|side| quantum_discord(&pure, side).map(|d| (d - s).abs()))
                    .collect::<Result<Vec<_>>>()?,
            );

            let round = bloch_reconstruct(&bloch_decompose(&rho)?)?.max_abs_diff(&rho);

            let p = ModelParams::new(
                rng_uniform(&mut rng, -3.0, 3.0),
                rng_uniform(&mut rng, -3.0, 3.0),
                rng_uniform(&mut rng, 0.0, 15.0),
                rng_uniform(&mut rng, 0.0, 1.0),
            )?
            .with_detuning(rng_uniform(&mut rng, -2.0, 2.0))?;
            let trace = apply_generator(&p, &rho, rng_uniform(&mut rng, 0.0, 10.0))?.trace().norm();
            Ok([negative, ccl_excess, lu, pure_err, round, trace])
        })
        .collect::<Result<Vec<[f64; 6]>>>()?;
    let worst: Vec<f64> = (0..6).map(|k| fmax(results.iter().map(|r| r[k]))).collect();
    let limits = [0.0, 1e-9, 1e-8, 1e-7, 1e-13, 1e-12];
    let passed = worst.iter().zip(limits).all(|(w, l)| *w <= l);
    Ok(Check::new(
        passed,
        format!(
            "{n} instances each: discord below zero {:.1e}, ccl above qmi {:.1e}, local-unitary drift {:.1e}, pure-state discord error {:.1e}, Bloch round trip {:.1e}, generator trace {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5]
        ),
    ))
}

fn rng_uniform(rng: &mut ChaCha8Rng, a: f64, b: f64) -> f64 {
    use rand::Rng;
    rng.random_range(a..b)
}

fn column_where(rows: &[Row], column: &str, keep: impl Fn(&Row) -> bool) -> Vec<f64> {
    rows.iter().filter(|r| keep(r)).filter_map(|r| r.get(column)).collect()
}

fn figure_curves(_: &VerifyOptions) -> Result<Check> {
    let fam = figure("conc_vs_g1")?;
    let rows = parse_csv(&fam.csv()?)?;
    let mut peaks_ok = true;
    let mut detail = Vec::new();
    for ratio in [1.0, 0.0] {
        let peaks: Vec<f64> = CAPTION_DISTANCES
            .iter()
            .map(|&d| {
                let x = distance_to_x(d);
                fmax(column_where(&rows, "concurrence", |r| {
                    r.get("g2bar") == Some(0.0) && r.get("dperp_ratio") == Some(ratio) && r.get("x") == Some(x)
                }))
            })
            .collect();
        peaks_ok &= peaks.windows(2).all(|w| w[1] < w[0]);
        detail.push(format!(
            "ratio {ratio}: peaks {:.4} > {:.4} > {:.4}",
            peaks[0], peaks[1], peaks[2]
        ));
    }

    let amplitude = |ratio: f64| -> Result<f64> {
        let cfg = SweepConfig {
            mode: Mode::G2zero,
            g1_values: ValueSpec::Single(0.2),
            x_values: ValueSpec::Range(RangeSpec { start: 2.0, stop: 12.0, count: 501, spacing: Spacing::Linear }),
            dperp_ratio: ratio,
            p00: None,
            outputs: vec![Output::Concurrence],
            numeric_check: false,
        };
        let rows = parse_csv(&csv_string(None, &run_sweep(&cfg)?))?;
        let c = column_where(&rows, "concurrence", |_| true);
        Ok(fmax(c.iter().copied()) - c.iter().copied().fold(f64::INFINITY, f64::min))
    };
    let (amp_parallel, amp_perp) = (amplitude(1.0)?, amplitude(0.0)?);
    let amp_ok = amp_parallel > amp_perp;
    detail.push(format!(
        "concurrence range over x in [2, 12] at g1 = 0.2: {amp_parallel:.4} (ratio 1) vs {amp_perp:.4} (ratio 0)"
    ));
    Ok(Check::new(peaks_ok && amp_ok, detail.join("; ")))
}
