use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use steadycorr::oracles::{steady_equal_g, steady_g2zero};
use steadycorr::sweep::{figure, run_sweep, write_csv_file, csv_string, SweepConfig};
use steadycorr::verify::{run_all, VerifyOptions};
use steadycorr::{full_report, steady_state, BasisTag, Error, ModelParams};

/// Steady states and correlations of two driven atoms with collective damping.
#[derive(Parser)]
#[command(name = "steadycorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one parameter point and print the state with its correlations.
    Steady {
        /// Rabi frequency of atom 1 in units of the decay rate.
        #[arg(long, allow_hyphen_values = true)]
        g1: f64,
        /// Rabi frequency of atom 2 in units of the decay rate.
        #[arg(long, allow_hyphen_values = true)]
        g2: f64,
        /// Interatomic separation x = 2πr/λ.
        #[arg(long)]
        x: f64,
        /// Ratio d⊥²/|d₀₁|² of the dipole geometry, in [0, 1].
        #[arg(long)]
        dperp: f64,
        /// Initial population of the singlet; required when x = 0 and g1 = g2.
        #[arg(long)]
        p00: Option<f64>,
        /// Basis in which the density matrices are printed.
        #[arg(long, value_enum, default_value_t = Basis::Product)]
        basis: Basis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep described by a JSON config and emit CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the sweep behind one figure family as CSV.
    Figure {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance checks; exits 1 if any fails.
    Verify {
        /// Points per axis of the oracle grid; selects the quick subset.
        #[arg(long)]
        grid_size: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_coupling: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Product,
    Coupled,
}

impl Basis {
    fn tag(self) -> BasisTag {
        match self {
            Basis::Product => BasisTag::Product,
            Basis::Coupled => BasisTag::TripletSinglet,
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn steady(g1: f64, g2: f64, x: f64, dperp: f64, p00: Option<f64>, basis: Basis, out: Option<&Path>) -> Result<(), Error> {
    let p = ModelParams::new(g1, g2, x, dperp)?;
    let sol = steady_state(&p, p00)?;
    let tag = basis.tag();
    let mut text = String::new();
    let _ = writeln!(text, "g1bar = {g1}, g2bar = {g2}, x = {x}, dperp_ratio = {dperp}, F12 = {:.15}", p.f12());
    let _ = writeln!(
        text,
        "zero multiplicity {}, residual {:.3e}, spectral gap {:.6e}",
        sol.zero_multiplicity, sol.residual, sol.spectral_gap
    );
    let _ = writeln!(text, "\nsteady state ({}):\n{:.10}", tag.name(), sol.rho.in_basis(tag));

    let analytic = if g2 == 0.0 {
        Some(steady_g2zero(&p))
    } else if g1 == g2 {
        Some(steady_equal_g(&p, p00))
    } else {
        None
    };
    match analytic {
        Some(Ok(rho)) => {
            let _ = writeln!(text, "closed form ({}):\n{:.10}", tag.name(), rho.in_basis(tag));
            let _ = writeln!(text, "max deviation {:.3e}\n", sol.rho.max_abs_diff(&rho));
        }
        Some(Err(e)) => {
            let _ = writeln!(text, "closed form unavailable: {e}\n");
        }
        None => {
            let _ = writeln!(text, "no closed form for g1bar != g2bar with g2bar != 0\n");
        }
    }

    let report = full_report(&sol.rho)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Config(e.to_string()))?;
    let _ = writeln!(text, "correlations:\n{json}");
    emit(&text, out)
}

fn sweep(config: &Path, out: Option<&Path>) -> Result<(), Error> {
    let cfg = SweepConfig::load(config)?;
    let rows = run_sweep(&cfg)?;
    match out {
        Some(path) => write_csv_file(path, None, &rows),
        None => emit(&csv_string(None, &rows), None),
    }
}

fn figure_csv(id: &str, out: Option<&Path>) -> Result<(), Error> {
    let fig = figure(id)?;
    let rows = fig.rows()?;
    let comment = fig.comment();
    match out {
        Some(path) => write_csv_file(path, Some(&comment), &rows),
        None => emit(&csv_string(Some(&comment), &rows), None),
    }
}

fn verify(grid_size: Option<usize>, corrupt: bool, out: Option<&Path>) -> Result<bool, Error> {
    let mut opts = grid_size.map(VerifyOptions::smoke).unwrap_or_default();
    opts.corrupt_coupling = corrupt;
    let outcomes = run_all(&opts);
    let mut text = String::new();
    for o in &outcomes {
        let _ = writeln!(text, "{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(text, "{passed}/{} checks passed", outcomes.len());
    emit(&text, out)?;
    Ok(passed == outcomes.len())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Steady { g1, g2, x, dperp, p00, basis, out } => steady(g1, g2, x, dperp, p00, basis, out.as_deref()).map(|_| true),
        Command::Sweep { config, out } => sweep(&config, out.as_deref()).map(|_| true),
        Command::Figure { id, out } => figure_csv(&id, out.as_deref()).map(|_| true),
        Command::Verify { grid_size, out, corrupt_coupling } => verify(grid_size, corrupt_coupling, out.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
