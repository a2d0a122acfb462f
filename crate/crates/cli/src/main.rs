//! `compactnet`: moduli reports, ε-net certificates, weight diagnostics and
//! experiments for families in weighted Lebesgue spaces.
//!
//! Exit codes: 0 success, 1 failed validation or I/O error, 2 unreadable
//! input, 3 input that violates the model, 4 a compactness hypothesis that
//! could not be verified at the given resolution.

mod spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use compactnet_core::experiments::{
    blowup_fit, completeness_run, BlowupReport, CompletenessReport, IncrementMode,
};
use compactnet_core::report::to_json;
use compactnet_core::spaces::{
    a1_constant, ap_constant, dual_refinement_sweep, B5StarSweep, CubeFamily,
};
use compactnet_core::{
    bound_modulus, build_certificate, quasi_certificate, validate_certificate,
    verify_c_implies_cstar, CStarCheck, CellSet, Error, Grid, ModuliReport, NetCertificate,
    Primitive, Region, ValidationReport, Variant, WeightedSpace,
};
use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Model(Error),
    Hypothesis(Error),
    Validation(ValidationReport),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_hypothesis_failure() {
            CliError::Hypothesis(e)
        } else {
            CliError::Model(e)
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Model(_) => 3,
            CliError::Hypothesis(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) => format!("parse error: {m}"),
            CliError::Model(e) => format!("model violation: {e}"),
            CliError::Hypothesis(e) => format!("hypothesis failure: {e}"),
            CliError::Validation(r) => format!("validation failed:\n  {}", r.failures.join("\n  ")),
            CliError::Io(m) => format!("i/o error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "compactnet",
    version,
    about = "Compactness moduli and ε-net certificates in weighted L^p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionArg {
    Ball,
    Box,
}

impl From<RegionArg> for Region {
    fn from(r: RegionArg) -> Self {
        match r {
            RegionArg::Ball => Region::Ball,
            RegionArg::Box => Region::Box,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Banach,
    Vanishing,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Blowup,
    Completeness,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Zero,
    Geometric,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Bound, tail, translation and averaged moduli of a family.
    Moduli {
        #[arg(long)]
        spec: PathBuf,
        /// Translation and averaging radii (default h, 2h, 4h, 8h).
        #[arg(long, value_delimiter = ',')]
        r_list: Vec<f64>,
        /// Tail radii N (default 2^j for j from 0 up to the box level).
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<f64>,
        #[arg(long, value_enum, default_value = "ball")]
        tail_region: RegionArg,
        #[arg(long, value_enum, default_value = "ball")]
        stencil: RegionArg,
        /// Output directory for moduli.csv and moduli.json (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and validate an ε-net certificate.
    Net {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Read epsilon as a fraction of the family bound.
        #[arg(long)]
        relative: bool,
        /// Projector variant (default: banach for positive weights, vanishing otherwise).
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Split members into positive and negative parts (exponents below one).
        #[arg(long)]
        split: bool,
        /// Certificate path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a certificate against the family in a spec.
    Validate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        /// Report path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Muckenhoupt constants and the local integrability sweep of the weight.
    Weight {
        #[arg(long)]
        spec: PathBuf,
        /// Number of grid refinements in the dual-integral sweep.
        #[arg(long, default_value_t = 3)]
        refinements: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scripted experiments.
    Experiments {
        #[arg(value_enum)]
        name: ExperimentName,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        cell_exp: i32,
        /// Values of N for the blow-up table (powers of two).
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<u64>,
        /// Number of sequence terms for the completeness run.
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes `files` into `dir`, or prints them to stdout in order.
fn emit(out: Option<&Path>, files: &[(&str, String)]) -> Result<(), CliError> {
    match out {
        Some(dir) => files
            .iter()
            .try_for_each(|(name, text)| write_file(&dir.join(name), text)),
        None => {
            for (_, text) in files {
                print!("{text}");
            }
            Ok(())
        }
    }
}

fn emit_one(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ModuliSummary<'a> {
    report: &'a ModuliReport,
    monotone: bool,
    cstar: Vec<CStarCheck>,
}

fn cmd_moduli(
    spec_path: &Path,
    r_list: &[f64],
    n_list: &[f64],
    tail_region: Region,
    stencil: Region,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let loaded = spec::load(spec_path)?;
    let h = loaded.grid.cell_side();
    let radii = if r_list.is_empty() {
        vec![h, 2.0 * h, 4.0 * h, 8.0 * h]
    } else {
        r_list.to_vec()
    };
    let tails = if n_list.is_empty() {
        (0..=loaded.grid.box_level().max(0))
            .map(|j| 2f64.powi(j))
            .collect()
    } else {
        n_list.to_vec()
    };
    let report = ModuliReport::compute(
        &loaded.family,
        &loaded.space,
        &radii,
        &tails,
        tail_region,
        stencil,
    )?;
    let cstar = if loaded.space.is_banach() {
        report
            .translation
            .iter()
            .map(|&(r, _)| verify_c_implies_cstar(&loaded.family, &loaded.space, r))
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    let summary = ModuliSummary {
        monotone: report.is_monotone(),
        report: &report,
        cstar,
    };
    emit(
        out,
        &[
            ("moduli.csv", report.to_csv()),
            ("moduli.json", to_json(&summary)),
        ],
    )
}

fn cmd_net(
    spec_path: &Path,
    epsilon: f64,
    relative: bool,
    variant: Option<VariantArg>,
    split: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let loaded = spec::load(spec_path)?;
    let (family, space) = (&loaded.family, &loaded.space);
    let epsilon = if relative {
        epsilon * bound_modulus(family, space)?
    } else {
        epsilon
    };
    let variant = match variant {
        Some(VariantArg::Banach) => Variant::Banach,
        Some(VariantArg::Vanishing) => Variant::Vanishing,
        None if space.is_strict() => Variant::Banach,
        None => Variant::Vanishing,
    };
    let cert = if space.is_banach() {
        build_certificate(family, space, epsilon, variant)?
    } else {
        let negative = family.members().iter().any(|f| !f.is_nonnegative());
        quasi_certificate(family, space, epsilon, variant, split || negative)?
    };
    let report = validate_certificate(family, &cert, space);
    emit_one(out, &cert.to_json())?;
    if !report.passed {
        return Err(CliError::Validation(report));
    }
    eprintln!(
        "certificate: {} members, net size {}, max distance {:e} < epsilon {:e}{}",
        cert.members.len(),
        cert.net_size(),
        report.max_original_distance.unwrap_or(report.max_distance),
        epsilon,
        if cert.quasi.is_some() {
            " (power transfer)"
        } else {
            ""
        }
    );
    Ok(())
}

fn cmd_validate(spec_path: &Path, cert_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let loaded = spec::load(spec_path)?;
    let text = fs::read_to_string(cert_path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", cert_path.display())))?;
    let cert = NetCertificate::from_json(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    let report = validate_certificate(&loaded.family, &cert, &loaded.space);
    emit_one(out, &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Validation(report))
    }
}

#[derive(Serialize)]
struct WeightReport {
    p: f64,
    dim: usize,
    strict: bool,
    null_cells: usize,
    /// Dyadic A_p estimate; absent for p <= 1.
    ap: Option<f64>,
    a1: f64,
    /// Dual integral of the weight over B(0, 1) across refinements; absent for p < 1.
    dual_sweep: Option<B5StarSweep>,
    b5_star: Option<&'static str>,
}

fn cmd_weight(spec_path: &Path, refinements: u32, out: Option<&Path>) -> Result<(), CliError> {
    let loaded = spec::load(spec_path)?;
    let (grid, space) = (loaded.grid, &loaded.space);
    let weight = space.weight();
    let p = space.p();
    let family = CubeFamily::all(&grid);
    let ap = if p > 1.0 {
        Some(ap_constant(weight, p, family)?)
    } else {
        None
    };
    let a1 = a1_constant(weight, family)?;
    let radius = grid.half_side().min(1.0);
    let dual_sweep = if p >= 1.0 {
        Some(dual_refinement_sweep(
            &loaded.weight,
            p,
            &grid,
            refinements,
            |g| CellSet::ball(*g, radius),
        )?)
    } else {
        None
    };
    let report = WeightReport {
        p,
        dim: grid.dim(),
        strict: space.is_strict(),
        null_cells: weight.values().iter().filter(|&&w| w == 0.0).count(),
        ap,
        a1,
        b5_star: dual_sweep.as_ref().map(|s| s.verdict().as_str()),
        dual_sweep,
    };
    emit_one(out, &to_json(&report))
}

#[derive(Serialize)]
struct BlowupSummary<'a> {
    experiment: &'static str,
    predicted_slope: f64,
    report: &'a BlowupReport,
}

#[derive(Serialize)]
struct CompletenessSummary<'a> {
    experiment: &'static str,
    holds: bool,
    report: &'a CompletenessReport,
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiments(
    name: ExperimentName,
    p: f64,
    dim: usize,
    cell_exp: i32,
    n_list: &[u64],
    k: usize,
    mode: ModeArg,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match name {
        ExperimentName::Blowup => {
            let grid = Grid::new(dim, 0, cell_exp)?;
            let list: Vec<u64> = if n_list.is_empty() {
                (3..=(-cell_exp - 1).max(3)).map(|j| 1u64 << j).collect()
            } else {
                n_list.to_vec()
            };
            let report = blowup_fit(p, &list, &grid)?;
            let summary = BlowupSummary {
                experiment: "blowup",
                predicted_slope: 1.0 / p,
                report: &report,
            };
            emit(
                out,
                &[
                    ("blowup.csv", report.to_csv()),
                    ("blowup.json", to_json(&summary)),
                ],
            )
        }
        ExperimentName::Completeness => {
            let grid = Grid::new(dim, 1, cell_exp)?;
            let space = WeightedSpace::lebesgue(p, grid)?;
            let center = vec![0.0; dim];
            let f = compactnet_core::sample(
                &Primitive::Gaussian {
                    center,
                    sigma: 0.5,
                    amplitude: 1.0,
                },
                &grid,
            )?;
            let mode = match mode {
                ModeArg::Zero => IncrementMode::Zero,
                ModeArg::Geometric => IncrementMode::Geometric,
                ModeArg::Random => IncrementMode::Random { seed },
            };
            let report = completeness_run(&space, &f, k, mode)?;
            let summary = CompletenessSummary {
                experiment: "completeness",
                holds: report.holds(1e-12),
                report: &report,
            };
            emit(
                out,
                &[
                    ("completeness.csv", report.to_csv()),
                    ("completeness.json", to_json(&summary)),
                ],
            )
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Moduli {
            spec,
            r_list,
            n_list,
            tail_region,
            stencil,
            out,
        } => cmd_moduli(
            &spec,
            &r_list,
            &n_list,
            tail_region.into(),
            stencil.into(),
            out.as_deref(),
        ),
        Command::Net {
            spec,
            epsilon,
            relative,
            variant,
            split,
            out,
        } => cmd_net(&spec, epsilon, relative, variant, split, out.as_deref()),
        Command::Validate {
            spec,
            certificate,
            out,
        } => cmd_validate(&spec, &certificate, out.as_deref()),
        Command::Weight {
            spec,
            refinements,
            out,
        } => cmd_weight(&spec, refinements, out.as_deref()),
        Command::Experiments {
            name,
            p,
            dim,
            cell_exp,
            n_list,
            k,
            mode,
            seed,
            out,
        } => cmd_experiments(
            name,
            p,
            dim,
            cell_exp,
            &n_list,
            k,
            mode,
            seed,
            out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("compactnet: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
