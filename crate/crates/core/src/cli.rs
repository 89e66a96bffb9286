//! The `dgft` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 usage error,
//! 3 numerical or validation failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::analysis::{run_mbcg_experiment, LocalizationSummary, STRUCTURE_TOL};
use crate::basis::{BasisKind, GftBasis};
use crate::error::{Error, Result};
use crate::graph::{
    gen_directed_cycle, gen_directed_path, gen_directed_torus, gen_mblock_cyclic, gen_random,
    random_signal, Digraph, GraphSignal, MBlockSpec, SignalDistribution,
};
use crate::gst::gst_build;
use crate::io;
use crate::linalg::{lower_mass, orthogonality_defect, sym_eig, unitarity_defect, RMatrix};
use crate::polar::{common_inlink_basis, common_outlink_basis, inflow_basis, polar_decompose};
use crate::symmetrize::{bibliographic_coupling, bibliometric, co_citation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dgft", version, about = "Graph Fourier transforms for directed graphs")]
pub struct Cli {
    /// Seed for generated weights and random signals
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory that receives output files
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    /// Numerical tolerances; `strict` halves every bound
    #[arg(long, global = true, value_enum, default_value_t = ToleranceProfile::Default)]
    pub tolerance_profile: ToleranceProfile,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ToleranceProfile {
    Strict,
    Default,
}

/// Bounds checked by the subcommands before they report success.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `‖PQ − A‖_F/‖A‖_F` and `‖QF − A‖_F/‖A‖_F`
    pub reconstruction: f64,
    /// `‖QᵀQ − I‖_max`, `‖UᴴU − I‖_max`
    pub orthogonality: f64,
    /// Below-diagonal mass of the Schur factor relative to `max(1, ‖A‖_F)`
    pub triangular: f64,
    /// `|‖x̂‖ − ‖x‖|` relative to `max(1, ‖x‖)`
    pub parseval: f64,
    /// Off-pattern mass of the M-block polar factors
    pub structure: f64,
}

impl Tolerances {
    pub fn for_profile(profile: ToleranceProfile) -> Self {
        let base = Tolerances {
            reconstruction: 1e-9,
            orthogonality: 1e-10,
            triangular: 1e-9,
            parseval: 1e-10,
            structure: STRUCTURE_TOL,
        };
        match profile {
            ToleranceProfile::Default => base,
            ToleranceProfile::Strict => Tolerances {
                reconstruction: base.reconstruction / 2.0,
                orthogonality: base.orthogonality / 2.0,
                triangular: base.triangular / 2.0,
                parseval: base.parseval / 2.0,
                structure: base.structure / 2.0,
            },
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it as Matrix Market
    Gen(GenArgs),
    /// Factor a graph: polar factors, Schur form or symmetrizations
    Decompose(DecomposeArgs),
    /// Transform a signal into one of the graph Fourier bases
    Gft(GftArgs),
    /// Run the M-block cyclic diffusion experiment over several seeds
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Cycle,
    Path,
    Torus,
    Mbcg,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Graph family
    #[arg(long, value_enum)]
    pub family: Family,
    /// Node count (cycle, path, random)
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Torus rows
    #[arg(long, default_value_t = 10)]
    pub rows: usize,
    /// Torus columns
    #[arg(long, default_value_t = 10)]
    pub cols: usize,
    /// Number of blocks (mbcg)
    #[arg(long, default_value_t = 4)]
    pub blocks: usize,
    /// Nodes per block (mbcg)
    #[arg(long, default_value_t = 25)]
    pub per_block: usize,
    /// Edge probability (random)
    #[arg(long, default_value_t = 0.2)]
    pub edge_prob: f64,
    /// Keep raw mbcg weights instead of normalizing rows to sum 1
    #[arg(long, default_value_t = false)]
    pub no_normalize: bool,
    /// Output file, relative to --out-dir
    #[arg(long, default_value = "graph.mtx")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Decomposition {
    Polar,
    Schur,
    Symmetrize,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Input graph (Matrix Market)
    #[arg(long)]
    pub input: PathBuf,
    /// Which factorization to write
    #[arg(long, value_enum, default_value_t = Decomposition::Polar)]
    pub what: Decomposition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    /// Eigenvectors of P (common in-links)
    P,
    /// Eigenvectors of F (common out-links)
    F,
    /// Eigenvectors of Q (in-flow)
    Q,
    /// Graph Schur transform
    Schur,
}

#[derive(Debug, Args)]
pub struct GftArgs {
    /// Input graph (Matrix Market)
    #[arg(long)]
    pub input: PathBuf,
    /// Fourier basis
    #[arg(long, value_enum, default_value_t = BasisChoice::Schur)]
    pub basis: BasisChoice,
    /// Signal CSV (`node_id,value`); without it a standard normal signal
    /// is drawn from --seed
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Spectrum CSV, relative to --out-dir
    #[arg(long, default_value = "spectrum.csv")]
    pub out: PathBuf,
    /// Also write `basis.csv` and `basis.mtx` to --out-dir
    #[arg(long, default_value_t = false)]
    pub save_basis: bool,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Number of blocks
    #[arg(long, default_value_t = 4)]
    pub blocks: usize,
    /// Nodes per block
    #[arg(long, default_value_t = 25)]
    pub per_block: usize,
    /// Seed for the edge weights
    #[arg(long, default_value_t = 7)]
    pub weight_seed: u64,
    /// Diffuse with raw weights instead of the row-normalized operator
    #[arg(long, default_value_t = false)]
    pub no_normalize: bool,
    /// Number of signal seeds, starting at --seed
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    /// Diffusion steps, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0,1,5,20,100")]
    pub ks: Vec<usize>,
}

/// Parses `args` (program name first) and runs the command, writing
/// summaries to `out` and diagnostics to standard error. Returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Parse { .. } => EXIT_IO,
        Error::Value(_) => EXIT_USAGE,
        Error::Dimension(_) | Error::Validation(_) | Error::Numerical { .. } => EXIT_NUMERICAL,
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let tol = Tolerances::for_profile(cli.tolerance_profile);
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a, out),
        Command::Decompose(a) => cmd_decompose(cli, a, &tol, out),
        Command::Gft(a) => cmd_gft(cli, a, &tol, out),
        Command::Experiment(a) => cmd_experiment(cli, a, &tol, out),
    }
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments) -> Result<()> {
    writeln!(out, "{line}").map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Out-of-range generator parameters are usage errors, not numerical ones.
fn as_usage(e: Error) -> Error {
    match e {
        Error::Validation(m) => Error::Value(m),
        e => e,
    }
}

fn cmd_gen(cli: &Cli, a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let g = generate(cli, a).map_err(as_usage)?;
    create_dir(&cli.out_dir)?;
    let path = cli.out_dir.join(&a.out);
    io::write_matrix_market(&g, &path)?;
    say(
        out,
        format_args!("n={} nnz={} normal={} file={}", g.n(), g.nnz(), g.is_normal(), path.display()),
    )?;
    Ok(EXIT_OK)
}

fn generate(cli: &Cli, a: &GenArgs) -> Result<Digraph> {
    match a.family {
        Family::Cycle => gen_directed_cycle(a.n),
        Family::Path => gen_directed_path(a.n),
        Family::Torus => gen_directed_torus(a.rows, a.cols),
        Family::Mbcg => gen_mblock_cyclic(&MBlockSpec {
            blocks: a.blocks,
            nodes_per_block: a.per_block,
            weight_seed: cli.seed,
            normalize: !a.no_normalize,
        }),
        Family::Random => gen_random(a.n, a.edge_prob, cli.seed),
    }
}

fn values_csv(values: &[f64]) -> String {
    let mut s = String::from("rank,value\n");
    for (k, v) in values.iter().enumerate() {
        s.push_str(&format!("{k},{v:e}\n"));
    }
    s
}

fn write_csv(path: PathBuf, text: &str) -> Result<()> {
    std::fs::write(&path, text).map_err(|source| Error::Io { path, source })
}

fn relative(residual: &RMatrix, reference: &RMatrix) -> f64 {
    residual.norm() / reference.norm().max(f64::MIN_POSITIVE)
}

fn cmd_decompose(cli: &Cli, a: &DecomposeArgs, tol: &Tolerances, out: &mut dyn Write) -> Result<i32> {
    let g = io::read_matrix_market(&a.input)?;
    let adj = g.adjacency();
    let dir = &cli.out_dir;
    create_dir(dir)?;
    match a.what {
        Decomposition::Polar => {
            let pf = polar_decompose(&g)?;
            let left = relative(&(&pf.p * &pf.q - adj), adj);
            let right = relative(&(&pf.q * &pf.f - adj), adj);
            let orth = orthogonality_defect(&pf.q);
            say(out, format_args!("polar: |PQ-A|/|A|={left:.3e} |QF-A|/|A|={right:.3e} |QtQ-I|={orth:.3e}"))?;
            if adj.norm() > 0.0 && left.max(right) > tol.reconstruction {
                return Err(Error::numerical("polar reconstruction above tolerance", left.max(right)));
            }
            if orth > tol.orthogonality {
                return Err(Error::numerical("Q is not orthogonal to tolerance", orth));
            }
            io::write_real_matrix(&pf.p, dir.join("P.mtx"))?;
            io::write_real_matrix(&pf.q, dir.join("Q.mtx"))?;
            io::write_real_matrix(&pf.f, dir.join("F.mtx"))?;
            write_csv(dir.join("singular_values.csv"), &values_csv(&pf.svd.singular_values))?;
        }
        Decomposition::Schur => {
            let t = gst_build(&g)?;
            let unit = unitarity_defect(&t.factors.unitary);
            let lower = lower_mass(&t.factors.triangular) / adj.norm().max(1.0);
            say(out, format_args!("schur: |UhU-I|={unit:.3e} lower mass={lower:.3e} rho={:.6e}", t.spectral_radius))?;
            if unit > tol.orthogonality {
                return Err(Error::numerical("U is not unitary to tolerance", unit));
            }
            if lower > tol.triangular {
                return Err(Error::numerical("T is not triangular to tolerance", lower));
            }
            io::write_complex_matrix(&t.factors.unitary, dir.join("U.mtx"))?;
            io::write_complex_matrix(&t.factors.triangular, dir.join("T.mtx"))?;
            write_csv(dir.join("eigenvalues.csv"), &io::format_basis_csv(&t.basis))?;
        }
        Decomposition::Symmetrize => {
            for (name, s) in [
                ("B_in", bibliographic_coupling(&g)),
                ("C_out", co_citation(&g)),
                ("bibliometric", bibliometric(&g)),
            ] {
                let eig = sym_eig(&s.matrix)?;
                io::write_real_matrix(&s.matrix, dir.join(format!("{name}.mtx")))?;
                write_csv(dir.join(format!("{name}_eigenvalues.csv")), &values_csv(&eig.values))?;
                say(
                    out,
                    format_args!("{name}: components={} top eigenvalue={:.6e}", count_components(&s.components()), eig.values[0]),
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn count_components(labels: &[usize]) -> usize {
    let mut seen: Vec<usize> = labels.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn build_basis(g: &Digraph, choice: BasisChoice) -> Result<GftBasis> {
    Ok(match choice {
        BasisChoice::P => common_inlink_basis(&polar_decompose(g)?),
        BasisChoice::F => common_outlink_basis(&polar_decompose(g)?),
        BasisChoice::Q => inflow_basis(&polar_decompose(g)?)?,
        BasisChoice::Schur => gst_build(g)?.basis,
    })
}

fn spectrum_norm(s: &[Complex64]) -> f64 {
    s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn cmd_gft(cli: &Cli, a: &GftArgs, tol: &Tolerances, out: &mut dyn Write) -> Result<i32> {
    let g = io::read_matrix_market(&a.input)?;
    let x: GraphSignal = match &a.signal {
        Some(p) => io::read_signal_csv(p, g.n())?,
        None => random_signal(g.n(), cli.seed, SignalDistribution::StandardNormal),
    };
    let basis = build_basis(&g, a.basis)?;
    let spectrum = basis.forward(&x)?;
    let (nx, ns) = (x.norm(), spectrum_norm(&spectrum));
    let err = (nx - ns).abs() / nx.max(1.0);
    let ok = err <= tol.parseval;
    say(
        out,
        format_args!(
            "{}: parseval |x|={nx:.12e} |x_hat|={ns:.12e} rel err={err:.3e} {}",
            basis.kind,
            if ok { "ok" } else { "FAIL" }
        ),
    )?;
    if !ok {
        return Err(Error::numerical("Parseval check failed", err));
    }
    create_dir(&cli.out_dir)?;
    io::write_spectrum_csv(&spectrum, &basis, cli.out_dir.join(&a.out))?;
    if a.save_basis {
        io::write_basis(&basis, cli.out_dir.join("basis.csv"), cli.out_dir.join("basis.mtx"))?;
    }
    Ok(EXIT_OK)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_experiment(cli: &Cli, a: &ExperimentArgs, tol: &Tolerances, out: &mut dyn Write) -> Result<i32> {
    if a.seeds == 0 {
        return Err(Error::Value("--seeds must be at least 1".into()));
    }
    if a.ks.is_empty() {
        return Err(Error::Value("--ks needs at least one step".into()));
    }
    let spec = MBlockSpec {
        blocks: a.blocks,
        nodes_per_block: a.per_block,
        weight_seed: a.weight_seed,
        normalize: !a.no_normalize,
    };
    spec.validate().map_err(as_usage)?;
    create_dir(&cli.out_dir)?;

    let mut reports = Vec::with_capacity(a.seeds as usize);
    for seed in cli.seed..cli.seed + a.seeds {
        let r = run_mbcg_experiment(&spec, seed, &a.ks)?;
        r.write_to(cli.out_dir.join(format!("seed_{seed}")))?;
        reports.push(r);
    }

    let worst = reports
        .iter()
        .map(|r| r.structure.q_residual.max(r.structure.p_residual).max(r.structure.f_residual))
        .fold(0.0, f64::max);
    let structure_ok = worst <= tol.structure;
    say(
        out,
        format_args!("structure: max off-pattern residual {worst:.3e} (tol {:.1e}) {}", tol.structure, verdict(structure_ok)),
    )?;

    let summary = LocalizationSummary::from_reports(&reports)?;
    if summary.first_step == summary.last_step {
        say(out, format_args!("localization: single step k={}, nothing to compare", summary.first_step))?;
    } else {
        report_localization(&summary, out)?;
    }
    if !structure_ok {
        return Err(Error::numerical("M-block structure check failed", worst));
    }
    Ok(EXIT_OK)
}

/// Prints the seed-averaged localization checks. The printed verdicts are
/// informational; they do not change the exit code.
fn report_localization(s: &LocalizationSummary, out: &mut dyn Write) -> Result<()> {
    let (k0, k1) = (s.first_step, s.last_step);
    for (tag, b) in [("a", BasisKind::CommonInLink), ("b", BasisKind::InFlow)] {
        let drop = s.relative_drop(b);
        say(
            out,
            format_args!("({tag}) {b} entropy k={k0}->{k1} relative drop {:.1}% (need >= 15%) {}", 100.0 * drop, verdict(drop >= 0.15)),
        )?;
    }
    let lo = s.n / 10;
    let hi = s.n - s.n / 10;
    let peak = s.inflow_mean_peak_rank;
    let per_seed = s.inflow_peak_ranks.iter().filter(|r| s.is_mid_rank(**r)).count();
    say(
        out,
        format_args!(
            "(c) in_flow peak rank of mean energy at k={k1}: {peak} (middle band {lo}..{hi}; {per_seed}/{} runs in band) {}",
            s.inflow_peak_ranks.len(),
            verdict(s.is_mid_rank(peak))
        ),
    )?;
    let gst = s.absolute_drop(BasisKind::Schur);
    let inflow = s.absolute_drop(BasisKind::InFlow);
    say(
        out,
        format_args!("(d) schur entropy drop {gst:.4} vs in_flow {inflow:.4} (need smaller) {}", verdict(gst < inflow)),
    )?;
    Ok(())
}
