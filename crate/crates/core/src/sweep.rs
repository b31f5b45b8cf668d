//! Parameter sweeps over (Ḡ₁, x) and the figure families built from them.
//!
//! Every point is evaluated from the closed-form steady state of its mode;
//! the nullspace solver runs only when `numeric_check` is set. Rows come
//! out g1-major, then x, whatever order the worker threads finish in.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{
    classical_correlation, concurrence, geometric_discord, linear_entropy, mutual_information,
};
use crate::error::{Error, Result};
use crate::master::{coupling_f, steady_state, ModelParams};
use crate::oracles::{limit_xstate_g2zero, steady_equal_g, steady_g2zero};
use crate::qubit::{Atom, BasisTag, DensityMatrix4};

pub const COLUMNS: [&str; 18] = [
    "g1bar",
    "g2bar",
    "x",
    "dperp_ratio",
    "pop_11",
    "pop_10",
    "pop_1m1",
    "pop_00",
    "concurrence",
    "qmi",
    "ccl_1",
    "ccl_2",
    "discord_1",
    "discord_2",
    "geo_discord_1",
    "geo_discord_2",
    "linear_entropy",
    "numeric_deviation",
];

pub fn header() -> String {
    COLUMNS.join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Only atom 1 driven.
    G2zero,
    /// Both atoms driven with equal strength.
    Equalg,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::G2zero => "g2zero",
            Mode::Equalg => "equalg",
        }
    }

    fn g2(self, g1: f64) -> f64 {
        match self {
            Mode::G2zero => 0.0,
            Mode::Equalg => g1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl RangeSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let (a, b, n) = (self.start, self.stop, self.count);
        if n == 0 {
            return Err(Error::Config("range count must be at least 1".into()));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Config(format!("range endpoints {a} and {b} must be finite")));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let frac = |i: usize| i as f64 / (n - 1) as f64;
        let mut v: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..n).map(|i| a + (b - a) * frac(i)).collect(),
            Spacing::Log => {
                if !(a > 0.0 && b > 0.0) {
                    return Err(Error::Config(format!(
                        "log spacing needs positive endpoints, got {a} and {b}"
                    )));
                }
                let (la, lb) = (a.ln(), b.ln());
                (0..n).map(|i| (la + (lb - la) * frac(i)).exp()).collect()
            }
        };
        v[0] = a;
        v[n - 1] = b;
        Ok(v)
    }
}

/// Either explicit values, a single value, or a range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    Single(f64),
    List(Vec<f64>),
    Range(RangeSpec),
}

impl ValueSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            ValueSpec::Single(v) => vec![*v],
            ValueSpec::List(v) => v.clone(),
            ValueSpec::Range(r) => r.values()?,
        };
        if v.is_empty() {
            return Err(Error::Config("value list is empty".into()));
        }
        Ok(v)
    }
}

/// Correlation columns that can be switched on and off. Populations are
/// always written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Output {
    #[serde(rename = "concurrence")]
    Concurrence,
    #[serde(rename = "qmi")]
    Qmi,
    #[serde(rename = "ccl_1")]
    Ccl1,
    #[serde(rename = "ccl_2")]
    Ccl2,
    #[serde(rename = "discord_1")]
    Discord1,
    #[serde(rename = "discord_2")]
    Discord2,
    #[serde(rename = "geo_discord_1")]
    GeoDiscord1,
    #[serde(rename = "geo_discord_2")]
    GeoDiscord2,
    #[serde(rename = "linear_entropy")]
    LinearEntropy,
}

impl Output {
    pub const ALL: [Output; 9] = [
        Output::Concurrence,
        Output::Qmi,
        Output::Ccl1,
        Output::Ccl2,
        Output::Discord1,
        Output::Discord2,
        Output::GeoDiscord1,
        Output::GeoDiscord2,
        Output::LinearEntropy,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Output::Concurrence => "concurrence",
            Output::Qmi => "qmi",
            Output::Ccl1 => "ccl_1",
            Output::Ccl2 => "ccl_2",
            Output::Discord1 => "discord_1",
            Output::Discord2 => "discord_2",
            Output::GeoDiscord1 => "geo_discord_1",
            Output::GeoDiscord2 => "geo_discord_2",
            Output::LinearEntropy => "linear_entropy",
        }
    }
}

fn all_outputs() -> Vec<Output> {
    Output::ALL.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub mode: Mode,
    pub g1_values: ValueSpec,
    pub x_values: ValueSpec,
    pub dperp_ratio: f64,
    /// Initial singlet population, needed for equal drives at x = 0.
    #[serde(default)]
    pub p00: Option<f64>,
    #[serde(default = "all_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default)]
    pub numeric_check: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.grid()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Validated (g1 values, x values).
    pub fn grid(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let g1 = self.g1_values.values()?;
        let x = self.x_values.values()?;
        if let Some(bad) = g1.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("g1 value {bad} is not finite")));
        }
        if let Some(bad) = x.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Config(format!("x value {bad} must be finite and non-negative")));
        }
        if !(0.0..=1.0).contains(&self.dperp_ratio) {
            return Err(Error::Config(format!("dperp_ratio {} must lie in [0, 1]", self.dperp_ratio)));
        }
        if let Some(p) = self.p00 {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("p00 {p} must lie in [0, 1]")));
            }
        }
        Ok((g1, x))
    }
}

/// One CSV line; `None` is written as an empty field.
#[derive(Clone, Debug, PartialEq)]
pub struct Row(pub [Option<f64>; 18]);

impl Row {
    pub fn get(&self, column: &str) -> Option<f64> {
        COLUMNS.iter().position(|c| *c == column).and_then(|i| self.0[i])
    }

    pub fn to_csv(&self) -> String {
        let mut line = String::new();
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            if let Some(v) = v {
                line.push_str(&format_number(*v));
            }
        }
        line
    }
}

/// Shortest decimal that round-trips, which never needs more than 17
/// significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:?}")
    }
}

/// Steady state at one point; an infinite `g1` selects the strong-drive
/// limit.
fn point_state(mode: Mode, g1: f64, x: f64, ratio: f64, p00: Option<f64>) -> Result<DensityMatrix4> {
    if g1.is_infinite() {
        return Ok(match mode {
            Mode::G2zero => limit_xstate_g2zero(coupling_f(x, ratio)),
            Mode::Equalg => DensityMatrix4::maximally_mixed(BasisTag::Product),
        });
    }
    let p = ModelParams::new(g1, mode.g2(g1), x, ratio)?;
    match mode {
        Mode::G2zero => steady_g2zero(&p),
        Mode::Equalg => steady_equal_g(&p, p00),
    }
}

pub fn evaluate_point(
    mode: Mode,
    g1: f64,
    x: f64,
    ratio: f64,
    p00: Option<f64>,
    outputs: &[Output],
    numeric_check: bool,
) -> Result<Row> {
    let rho = point_state(mode, g1, x, ratio, p00)?;
    let wants = |o: Output| outputs.contains(&o);
    let mut v = [None; 18];
    v[0] = Some(g1);
    v[1] = Some(mode.g2(g1));
    v[2] = Some(x);
    v[3] = Some(ratio);
    let pops = rho.coupled_populations();
    for k in 0..4 {
        v[4 + k] = Some(pops[k]);
    }
    if wants(Output::Concurrence) {
        v[8] = Some(concurrence(&rho)?);
    }
    let need_qmi = [Output::Qmi, Output::Discord1, Output::Discord2].iter().any(|&o| wants(o));
    let qmi = if need_qmi { Some(mutual_information(&rho)?) } else { None };
    if wants(Output::Qmi) {
        v[9] = qmi;
    }
    for (atom, ccl_col, discord_col, ccl_out, discord_out) in [
        (Atom::First, 10, 12, Output::Ccl1, Output::Discord1),
        (Atom::Second, 11, 13, Output::Ccl2, Output::Discord2),
    ] {
        if wants(ccl_out) || wants(discord_out) {
            let ccl = classical_correlation(&rho, atom)?.value;
            if wants(ccl_out) {
                v[ccl_col] = Some(ccl);
            }
            if wants(discord_out) {
                let qmi = qmi.expect("computed above");
                v[discord_col] = Some(crate::correlations::discord_from_parts(qmi, ccl));
            }
        }
    }
    if wants(Output::GeoDiscord1) {
        v[14] = Some(geometric_discord(&rho, Atom::First)?);
    }
    if wants(Output::GeoDiscord2) {
        v[15] = Some(geometric_discord(&rho, Atom::Second)?);
    }
    if wants(Output::LinearEntropy) {
        v[16] = Some(linear_entropy(&rho));
    }
    if numeric_check && g1.is_finite() {
        let p = ModelParams::new(g1, mode.g2(g1), x, ratio)?;
        let numeric = steady_state(&p, p00)?.rho;
        v[17] = Some(rho.max_abs_diff(&numeric));
    }
    Ok(Row(v))
}

/// Rows for every (g1, x) pair, g1-major.
pub fn evaluate_grid(
    mode: Mode,
    g1: &[f64],
    x: &[f64],
    ratio: f64,
    p00: Option<f64>,
    outputs: &[Output],
    numeric_check: bool,
) -> Result<Vec<Row>> {
    let points: Vec<(f64, f64)> = g1.iter().flat_map(|&g| x.iter().map(move |&x| (g, x))).collect();
    points
        .par_iter()
        .map(|&(g, x)| evaluate_point(mode, g, x, ratio, p00, outputs, numeric_check))
        .collect()
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<Row>> {
    let (g1, x) = cfg.grid()?;
    evaluate_grid(cfg.mode, &g1, &x, cfg.dperp_ratio, cfg.p00, &cfg.outputs, cfg.numeric_check)
}

/// Header, optional `#` comment lines first, then one line per row.
pub fn write_csv<W: Write>(mut w: W, comment: Option<&str>, rows: &[Row]) -> std::io::Result<()> {
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    writeln!(w, "{}", header())?;
    for row in rows {
        writeln!(w, "{}", row.to_csv())?;
    }
    w.flush()
}

pub fn csv_string(comment: Option<&str>, rows: &[Row]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, comment, rows).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Writes the file, removing it again if writing fails part way.
pub fn write_csv_file(path: &Path, comment: Option<&str>, rows: &[Row]) -> Result<()> {
    let result = File::create(path).and_then(|f| write_csv(BufWriter::new(f), comment, rows));
    if let Err(e) = result {
        let _ = std::fs::remove_file(path);
        return Err(Error::Io(e));
    }
    Ok(())
}

/// Runs the sweep and writes it to `path`; nothing is left behind on failure.
pub fn sweep_to_file(cfg: &SweepConfig, path: &Path) -> Result<usize> {
    let rows = run_sweep(cfg)?;
    write_csv_file(path, None, &rows)?;
    Ok(rows.len())
}

/// Separation x = ωr/c for a distance given in transition wavelengths.
pub fn distance_to_x(wavelengths: f64) -> f64 {
    2.0 * std::f64::consts::PI * wavelengths
}

/// λ/100, λ/4 and λ, the distances the figure captions use.
pub const CAPTION_DISTANCES: [f64; 3] = [0.01, 0.25, 1.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    /// Distances in wavelengths, converted with [`distance_to_x`].
    Distances(&'static [f64]),
    Range { start: f64, stop: f64, count: usize, spacing: Spacing },
    /// Ḡ₁ → ∞.
    StrongLimit,
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>> {
        match *self {
            Axis::Distances(d) => Ok(d.iter().map(|&w| distance_to_x(w)).collect()),
            Axis::Range { start, stop, count, spacing } => RangeSpec { start, stop, count, spacing }.values(),
            Axis::StrongLimit => Ok(vec![f64::INFINITY]),
        }
    }

    fn describe(&self) -> String {
        match *self {
            Axis::Distances(d) => {
                let xs: Vec<String> = d.iter().map(|&w| format_number(distance_to_x(w))).collect();
                xs.join("|")
            }
            Axis::Range { start, stop, count, spacing } => {
                let kind = match spacing {
                    Spacing::Linear => "linear",
                    Spacing::Log => "log",
                };
                format!("{kind}:{}:{}:{count}", format_number(start), format_number(stop))
            }
            Axis::StrongLimit => "inf".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureFamily {
    pub id: &'static str,
    pub modes: &'static [Mode],
    pub ratios: &'static [f64],
    pub g1: Axis,
    pub x: Axis,
    pub outputs: &'static [Output],
}

const BOTH_MODES: &[Mode] = &[Mode::G2zero, Mode::Equalg];
const BOTH_RATIOS: &[f64] = &[1.0, 0.0];
const G1_LOG: Axis = Axis::Range { start: 0.01, stop: 10.0, count: 200, spacing: Spacing::Log };
const G1_CONTOUR: Axis = Axis::Range { start: 0.01, stop: 3.0, count: 100, spacing: Spacing::Linear };
const X_CONTOUR: Axis = Axis::Range { start: 0.05, stop: 4.0 * std::f64::consts::PI, count: 120, spacing: Spacing::Linear };
const X_CAPTION: Axis = Axis::Distances(&CAPTION_DISTANCES);

pub const FIGURES: [FigureFamily; 8] = [
    FigureFamily {
        id: "conc_vs_g1",
        modes: BOTH_MODES,
        ratios: BOTH_RATIOS,
        g1: G1_LOG,
        x: X_CAPTION,
        outputs: &[Output::Concurrence],
    },
    FigureFamily {
        id: "conc_vs_pop00",
        modes: BOTH_MODES,
        ratios: BOTH_RATIOS,
        g1: G1_LOG,
        x: X_CAPTION,
        outputs: &[Output::Concurrence],
    },
    FigureFamily {
        id: "conc_contour",
        modes: BOTH_MODES,
        ratios: BOTH_RATIOS,
        g1: G1_CONTOUR,
        x: X_CONTOUR,
        outputs: &[Output::Concurrence],
    },
    FigureFamily {
        id: "discord_limits",
        modes: &[Mode::G2zero],
        ratios: BOTH_RATIOS,
        g1: Axis::StrongLimit,
        x: Axis::Range { start: 0.1, stop: 12.0, count: 300, spacing: Spacing::Linear },
        outputs: &[Output::Qmi, Output::Ccl2, Output::Discord2, Output::GeoDiscord2],
    },
    FigureFamily {
        id: "geo_discord_vs_g1",
        modes: BOTH_MODES,
        ratios: BOTH_RATIOS,
        g1: G1_LOG,
        x: X_CAPTION,
        outputs: &[Output::GeoDiscord1, Output::GeoDiscord2],
    },
    FigureFamily {
        id: "geo_discord_contour",
        modes: BOTH_MODES,
        ratios: BOTH_RATIOS,
        g1: G1_CONTOUR,
        x: X_CONTOUR,
        outputs: &[Output::GeoDiscord1, Output::GeoDiscord2],
    },
    FigureFamily {
        id: "linear_entropy_vs_g1",
        modes: BOTH_MODES,
        ratios: BOTH_RATIOS,
        g1: G1_LOG,
        x: X_CAPTION,
        outputs: &[Output::LinearEntropy],
    },
    FigureFamily {
        id: "conc_vs_linear_entropy",
        modes: BOTH_MODES,
        ratios: &[1.0],
        g1: G1_LOG,
        x: X_CAPTION,
        outputs: &[Output::Concurrence, Output::LinearEntropy],
    },
];

pub fn figure_ids() -> Vec<&'static str> {
    FIGURES.iter().map(|f| f.id).collect()
}

pub fn figure(id: &str) -> Result<&'static FigureFamily> {
    FIGURES.iter().find(|f| f.id == id).ok_or_else(|| {
        Error::Config(format!("unknown figure id {id:?}; valid ids: {}", figure_ids().join(", ")))
    })
}

impl FigureFamily {
    /// The `params=` part of the provenance line.
    pub fn params(&self) -> String {
        let mut s = String::new();
        let modes: Vec<&str> = self.modes.iter().map(|m| m.name()).collect();
        let ratios: Vec<String> = self.ratios.iter().map(|&r| format_number(r)).collect();
        let outputs: Vec<&str> = self.outputs.iter().map(|o| o.column()).collect();
        write!(
            s,
            "modes={};dperp_ratio={};g1={};x={};outputs={}",
            modes.join("|"),
            ratios.join("|"),
            self.g1.describe(),
            self.x.describe(),
            outputs.join("|")
        )
        .expect("string write");
        s
    }

    pub fn comment(&self) -> String {
        format!("figure={} params={}", self.id, self.params())
    }

    /// Rows grouped by mode, then ratio, each group g1-major.
    pub fn rows(&self) -> Result<Vec<Row>> {
        let g1 = self.g1.values()?;
        let x = self.x.values()?;
        let mut rows = Vec::new();
        for &mode in self.modes {
            for &ratio in self.ratios {
                rows.extend(evaluate_grid(mode, &g1, &x, ratio, None, self.outputs, false)?);
            }
        }
        Ok(rows)
    }

    pub fn csv(&self) -> Result<String> {
        Ok(csv_string(Some(&self.comment()), &self.rows()?))
    }
}

/// Parses CSV written by [`write_csv`] back into rows, skipping comments.
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    match lines.next() {
        Some(h) if h == header() => {}
        other => return Err(Error::Config(format!("unexpected header {other:?}"))),
    }
    lines
        .map(|line| {
            let mut v = [None; 18];
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 18 {
                return Err(Error::Config(format!("expected 18 fields, got {}", fields.len())));
            }
            for (slot, f) in v.iter_mut().zip(fields) {
                if !f.is_empty() {
                    *slot = Some(f.parse::<f64>().map_err(|e| Error::Config(format!("{f:?}: {e}")))?);
                }
            }
            Ok(Row(v))
        })
        .collect()
}
