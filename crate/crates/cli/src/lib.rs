//! Command-line front end: sector tables, entanglement analysis of declared
//! states, and Fisher-information scenarios with parameter sweeps.

pub mod error;
pub mod json;
pub mod report;
pub mod spec;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use fermient::bipartition::{block_dimensions, ModeBipartition, ModeRelabeling};
use fermient::entanglement::{
    block_decompose, classify, negativity, odd_odd_witness, robustness,
};
use fermient::fock::{binomial, DensityMatrix, DEFAULT_DIM_CAP};
use fermient::metrology::{scenario_bogolubov, scenario_fock, scenario_noon, QfiReport};
use fermient::operators::Dispersion;

pub use error::CliError;
use report::{AnalysisReport, BasisReport, BipartitionAnalysis, BlockRow, QfiOutput, WitnessReport};
use spec::{Builder, StateSpec};

pub const DIM_CAP_ENV: &str = "FERMIENT_DIM_CAP";

#[derive(Debug, Parser)]
#[command(name = "fermient", version, about = "Mode entanglement and Fisher information for fixed-N fermions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the sectors (k, D_k, D'_{N-k}) of an (m, M-m) bipartition.
    Basis(BasisArgs),
    /// Classify a declared state and report negativity, robustness and witnesses.
    Analyze(AnalyzeArgs),
    /// Quantum Fisher information of an interferometric scenario.
    Qfi {
        #[command(subcommand)]
        scenario: QfiScenario,
    },
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(short = 'N')]
    pub n: usize,
    #[arg(short = 'M')]
    pub modes: usize,
    #[arg(short = 'm')]
    pub m: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// State specification (JSON).
    pub spec: PathBuf,
    /// First-partition sizes; repeat or separate with commas.
    #[arg(short = 'm', value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Explicit first-partition mode lists such as `2,4`; may be repeated.
    #[arg(long = "first")]
    pub first: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub witness_degree: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub from: usize,
    pub to: usize,
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let range = s
        .strip_prefix("N=")
        .ok_or_else(|| format!("expected N=a..b, got {s:?}"))?;
    let (a, b) = range
        .split_once("..")
        .ok_or_else(|| format!("expected N=a..b, got {s:?}"))?;
    let from = a.parse().map_err(|e| format!("{a:?}: {e}"))?;
    let to = b.parse().map_err(|e| format!("{b:?}: {e}"))?;
    if from > to {
        return Err(format!("empty sweep {from}..{to}"));
    }
    Ok(Sweep { from, to })
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Inclusive particle-number range, `N=a..b`.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Option<Sweep>,
    /// Emit a CSV table instead of JSON.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct FockArgs {
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Number of modes; defaults to 2N.
    #[arg(short = 'M')]
    pub modes: Option<usize>,
    /// Spectral exponent, ω_k = k^p.
    #[arg(short = 'p', default_value_t = 1)]
    pub p: u32,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Args)]
pub struct NoonArgs {
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Modes per partition; defaults to N.
    #[arg(short = 'm')]
    pub m: Option<usize>,
    /// Ω_k = k (the default when --omega is absent).
    #[arg(long, conflicts_with = "omega")]
    pub linear: bool,
    /// Explicit single-mode energies Ω_1..Ω_{2m}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub omega: Vec<f64>,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Subcommand)]
pub enum QfiScenario {
    /// Fock input with J_x^{(1)}.
    Fock(FockArgs),
    /// Fock input in the original and pairwise-rotated mode bases.
    Bogolubov(FockArgs),
    /// (|N;0⟩ + |0;N⟩)/√2 under a quadratic Hamiltonian.
    Noon(NoonArgs),
}

pub fn dim_cap() -> Result<usize, CliError> {
    match std::env::var(DIM_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| CliError::User(format!("{DIM_CAP_ENV}={v:?}: {e}"))),
        Err(_) => Ok(DEFAULT_DIM_CAP),
    }
}

fn check_cap(n: usize, modes: usize, cap: usize) -> Result<(), CliError> {
    let dim = binomial(modes, n);
    if dim > cap as u128 {
        return Err(CliError::Cap(format!(
            "Hilbert space dimension {dim} exceeds the configured cap {cap}"
        )));
    }
    Ok(())
}

/// Runs one parsed invocation, writing primary output to `out` and warnings
/// to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Basis(args) => basis(&args, out),
        Command::Analyze(args) => analyze(&args, out, err),
        Command::Qfi { scenario } => qfi(&scenario, out),
    }
}

pub fn basis(args: &BasisArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bp = ModeBipartition::new(args.m, args.modes)?;
    let sectors = block_dimensions(&bp, args.n)?;
    let report = BasisReport {
        n: args.n,
        modes: args.modes,
        m: args.m,
        total: sectors.iter().map(|s| s.size() as u128).sum(),
        sectors,
    };
    if args.json {
        write!(out, "{}", json::to_string(&report).map_err(json_error)?)?;
    } else {
        writeln!(out, "k\tD_k\tD'_N-k\tsize")?;
        for s in &report.sectors {
            writeln!(out, "{}\t{}\t{}\t{}", s.k, s.first_dim, s.second_dim, s.size())?;
        }
        writeln!(out, "total\t{}", report.total)?;
    }
    Ok(())
}

fn json_error(e: serde_json::Error) -> CliError {
    CliError::User(format!("JSON: {e}"))
}

fn parse_first(list: &str, modes: usize) -> Result<(ModeBipartition, ModeRelabeling), CliError> {
    let first = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::User(format!("--first {list:?}: {e}")))?;
    Ok(ModeBipartition::from_modes(&first, modes)?)
}

pub fn analyze_state(
    rho: &DensityMatrix,
    bp: &ModeBipartition,
    first_modes: Vec<usize>,
    witness_degree: usize,
) -> Result<BipartitionAnalysis, CliError> {
    let dec = block_decompose(rho, bp)?;
    let witness = odd_odd_witness(rho, bp, witness_degree)?.map(|w| WitnessReport {
        max_degree: witness_degree,
        operator: w.operator().to_string(),
        value: w.value,
    });
    Ok(BipartitionAnalysis {
        m: bp.m(),
        first_modes,
        verdict: classify(rho, bp)?,
        negativity: negativity(rho, bp)?,
        robustness: robustness(rho, bp)?,
        witness,
        eta_norm: dec.eta_norm(),
        blocks: dec
            .blocks()
            .iter()
            .map(|b| BlockRow {
                k: b.dims.k,
                weight: b.weight,
                first_dim: b.dims.first_dim,
                second_dim: b.dims.second_dim,
            })
            .collect(),
    })
}

pub fn analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::User(format!("{}: {e}", args.spec.display())))?;
    let spec: StateSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::User(format!("{}: {e}", args.spec.display())))?;
    if args.m.is_empty() && args.first.is_empty() {
        return Err(CliError::User("give at least one -m or --first".into()));
    }
    let base = args.spec.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut builder = Builder::new(dim_cap()?, base);
    let rho = builder.build(&spec)?;
    for w in &builder.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let modes = rho.space().modes();
    let mut analyses = Vec::new();
    for &m in &args.m {
        let bp = ModeBipartition::new(m, modes)?;
        analyses.push(analyze_state(&rho, &bp, (1..=m).collect(), args.witness_degree)?);
    }
    for list in &args.first {
        let (bp, relabel) = parse_first(list, modes)?;
        let mut first: Vec<usize> = (1..=modes).filter(|&i| relabel.target(i) <= bp.m()).collect();
        first.sort_unstable();
        let moved = relabel.apply_density(&rho)?;
        analyses.push(analyze_state(&moved, &bp, first, args.witness_degree)?);
    }
    let report = AnalysisReport {
        input: serde_json::to_value(&spec).map_err(json_error)?,
        n: rho.space().particles(),
        modes,
        analyses,
        timing_seconds: args.timing.then(|| start.elapsed().as_secs_f64()),
    };
    let rendered = if args.json {
        json::to_string(&report).map_err(json_error)?
    } else {
        render_analysis(&report)
    };
    match &args.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::User(format!("{}: {e}", path.display())))?,
        None => write!(out, "{rendered}")?,
    }
    Ok(())
}

fn render_analysis(report: &AnalysisReport) -> String {
    let mut s = format!("N={} M={}\n", report.n, report.modes);
    for a in &report.analyses {
        let evidence = serde_json::to_string(&a.verdict.evidence).unwrap_or_default();
        s += &format!(
            "first modes {:?}: {:?}\n  evidence   {evidence}\n  negativity {:.12}\n  robustness {}\n  eta_norm   {:.3e}\n",
            a.first_modes,
            a.verdict.status,
            a.negativity,
            match a.robustness {
                fermient::entanglement::Robustness::Exact(v) => format!("{v:.12}"),
                fermient::entanglement::Robustness::Infinite => "infinite".into(),
                fermient::entanglement::Robustness::LowerBound(v) => format!(">= {v:.12}"),
            },
            a.eta_norm
        );
        match &a.witness {
            Some(w) => s += &format!("  witness    {} = {:.12}{:+.12}i\n", w.operator, w.value.re, w.value.im),
            None => s += "  witness    none\n",
        }
        s += "  k\tp_k\tD_k\tD'\n";
        for b in &a.blocks {
            s += &format!("  {}\t{:.6}\t{}\t{}\n", b.k, b.weight, b.first_dim, b.second_dim);
        }
    }
    if let Some(t) = report.timing_seconds {
        s += &format!("time {t:.3}s\n");
    }
    s
}

fn sweep_points(n: Option<usize>, sweep: Option<Sweep>) -> Result<Vec<usize>, CliError> {
    match (n, sweep) {
        (_, Some(s)) => Ok((s.from..=s.to).collect()),
        (Some(n), None) => Ok(vec![n]),
        (None, None) => Err(CliError::User("give -N or --sweep N=a..b".into())),
    }
}

pub fn qfi(scenario: &QfiScenario, out: &mut dyn Write) -> Result<(), CliError> {
    let cap = dim_cap()?;
    let (sweep, reports) = match scenario {
        QfiScenario::Fock(a) | QfiScenario::Bogolubov(a) => {
            let bogolubov = matches!(scenario, QfiScenario::Bogolubov(_));
            let points = sweep_points(a.n, a.sweep.sweep)?;
            for &n in &points {
                check_cap(n, a.modes.unwrap_or(2 * n), cap)?;
            }
            let reports = points
                .par_iter()
                .map(|&n| {
                    let modes = a.modes.unwrap_or(2 * n);
                    if bogolubov {
                        scenario_bogolubov(n, modes, a.p)
                    } else {
                        scenario_fock(n, modes, a.p)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            (&a.sweep, reports)
        }
        QfiScenario::Noon(a) => {
            let points = sweep_points(a.n, a.sweep.sweep)?;
            for &n in &points {
                check_cap(n, 2 * a.m.unwrap_or(n), cap)?;
            }
            let reports = points
                .par_iter()
                .map(|&n| {
                    let m = a.m.unwrap_or(n);
                    let dispersion = if a.omega.is_empty() {
                        Dispersion::linear(2 * m)
                    } else {
                        Dispersion::new(a.omega.clone())?
                    };
                    scenario_noon(n, m, &dispersion)
                })
                .collect::<Result<Vec<_>, _>>()?;
            (&a.sweep, reports)
        }
    };
    if sweep.csv {
        write!(out, "{}", csv_table(&reports))?;
    } else {
        let output = if sweep.sweep.is_some() {
            QfiOutput::Sweep(reports)
        } else {
            QfiOutput::Single(reports.into_iter().next().expect("one point"))
        };
        write!(out, "{}", json::to_string(&output).map_err(json_error)?)?;
    }
    Ok(())
}

pub fn csv_table(reports: &[QfiReport]) -> String {
    let mut s = String::from("N,F,delta_theta,shot_noise_ref,heisenberg_ref\n");
    for r in reports {
        let delta = r
            .delta_theta
            .map_or_else(|| "inf".to_string(), |d| format!("{d:.16e}"));
        s += &format!(
            "{},{:.16e},{delta},{:.16e},{:.16e}\n",
            r.shot_noise_ref as usize, r.qfi, r.shot_noise_ref, r.heisenberg_ref
        );
    }
    s
}
