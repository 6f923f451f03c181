//! Command-line front end.
//!
//! Subcommands: `estimate-eig`, `estimate-svd`, `extremes`, `verify`,
//! `gershgorin`, `spectrum-plot`. Matrices come from a Matrix Market file
//! (`--matrix`) or a generator spec (`--gen`), with the grammar
//! `lap1d:n | lap2d:AxB | lap3d:AxBxC | sky:AxBxC[:seed] | rand:n |
//! rand:mxn[:seed]`.
//!
//! Exit codes: 0 success, 1 input/usage error, 2 empty estimate or
//! interlacing violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::aggregation::{bfs_graph_partition, random_partition, strong_coupling_aggregation};
use crate::coarsen::build_interpolation;
use crate::dense_eig::{dense_singular_values, sym_eigenvalues};
use crate::error::{Error, Result};
use crate::generators::{
    gen_laplacian, gen_random_sparse, gen_random_symmetric, CoefficientField,
};
use crate::market::load_matrix_market;
use crate::matrix::SparseMatrix;
use crate::pipeline::{
    estimate_eigenvalues_detailed, estimate_singular_values_detailed, extreme_eigenvalues,
    extreme_singular_values, verify_interlacing, verify_interlacing_svd, Partitioner,
    SampleConfig, ShiftTarget,
};
use crate::report::{
    discs_to_csv, estimate_to_csv, estimate_to_json, gershgorin_svg, interlace_table_csv,
    spectrum_svg, RunManifest,
};
use crate::rng::derive_seed;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT_ERROR: u8 = 1;
pub const EXIT_EMPTY_OR_VIOLATION: u8 = 2;

/// Dense oracles get expensive past this order; `--oracle` is refused above.
const ORACLE_SIZE_CAP: usize = 1500;

#[derive(Parser, Debug)]
#[command(
    name = "specoarse",
    version,
    about = "Eigenvalue and singular value estimates from randomized coarse grids"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate eigenvalues of a symmetric matrix.
    EstimateEig(EstimateArgs),
    /// Estimate singular values (any rectangular matrix).
    EstimateSvd(EstimateArgs),
    /// Extreme eigenvalues or singular values from coarse samples only.
    Extremes(ExtremesArgs),
    /// Verify interlacing of coarse spectra over random trials.
    Verify(VerifyArgs),
    /// Gershgorin discs as CSV and an SVG plot.
    Gershgorin(GershgorinArgs),
    /// SVG spectrum diagram: fine spectrum, per-sample coarse spectra,
    /// and shift-to-value arrows.
    SpectrumPlot(PlotArgs),
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Matrix Market file with the fine-grid matrix.
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
    /// Generator spec: lap1d:n | lap2d:AxB | lap3d:AxBxC | sky:AxBxC[:seed]
    /// | rand:n | rand:mxn[:seed]
    #[arg(long, value_name = "SPEC", conflicts_with = "matrix")]
    gen: Option<String>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of coarse-grid samples J.
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Values refined per sample k (default: the whole coarse spectrum).
    #[arg(long = "per-sample")]
    per_sample: Option<usize>,
    /// Coarse dimension N_c (default: ceil(N/10)).
    #[arg(long)]
    coarse: Option<usize>,
    /// strong[:beta] | bfs | random
    #[arg(long, default_value = "random")]
    partitioner: String,
    /// Master seed (default: SPECOARSE_SEED or 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Refinement tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Refinement iteration cap per shift.
    #[arg(long = "max-iters", default_value_t = 200)]
    max_iters: usize,
    /// Which coarse values become shifts: smallest | largest | near:<x>
    #[arg(long, default_value = "smallest")]
    target: String,
    /// Output directory.
    #[arg(long, default_value = "specoarse-out")]
    out: PathBuf,
    /// Worker threads for the sample loop (default: rayon's choice).
    #[arg(long)]
    threads: Option<usize>,
    /// Unit-entry interpolation, exactly as the aggregate-sum formula
    /// reads. Disables normalization and with it the interlacing
    /// guarantees.
    #[arg(long = "paper-literal")]
    paper_literal: bool,
}

#[derive(Args, Debug)]
struct ExtremesArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 8)]
    samples: usize,
    #[arg(long)]
    coarse: Option<usize>,
    #[arg(long, default_value = "random")]
    partitioner: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Estimate singular value extremes instead of eigenvalue extremes.
    #[arg(long)]
    svd: bool,
    /// Polish both extremes on the fine grid.
    #[arg(long)]
    refine: bool,
    /// Also compute the dense-oracle extremes and print the slack.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of random (partition, seed) trials.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long)]
    coarse: Option<usize>,
    #[arg(long, default_value = "random")]
    partitioner: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Check the singular value separation instead.
    #[arg(long)]
    svd: bool,
    #[arg(long, default_value = "specoarse-out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GershgorinArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Overlay dense-oracle eigenvalues (symmetric matrices only).
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value = "specoarse-out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long = "per-sample")]
    per_sample: Option<usize>,
    #[arg(long)]
    coarse: Option<usize>,
    #[arg(long, default_value = "random")]
    partitioner: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Plot singular values instead of eigenvalues.
    #[arg(long)]
    svd: bool,
    #[arg(long, default_value = "specoarse-out")]
    out: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

/// Parse argv and run. Returns the process exit code.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::EmptyEstimate => EXIT_EMPTY_OR_VIOLATION,
                _ => EXIT_INPUT_ERROR,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::EstimateEig(args) => cmd_estimate(args, EstimateKind::Eigen),
        Command::EstimateSvd(args) => cmd_estimate(args, EstimateKind::Singular),
        Command::Extremes(args) => cmd_extremes(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gershgorin(args) => cmd_gershgorin(args),
        Command::SpectrumPlot(args) => cmd_spectrum_plot(args),
    }
}

fn default_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed.unwrap_or_else(|| {
        std::env::var("SPECOARSE_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    })
}

fn parse_partitioner(spec: &str) -> Result<Partitioner> {
    let (name, param) = match spec.split_once(':') {
        Some((name, param)) => (name, Some(param)),
        None => (spec, None),
    };
    match name {
        "strong" => {
            let beta = match param {
                Some(p) => p.parse().map_err(|e| {
                    Error::InvalidArgument(format!("strong coupling beta `{p}`: {e}"))
                })?,
                None => 0.25,
            };
            Ok(Partitioner::StrongCoupling { beta })
        }
        "bfs" => Ok(Partitioner::Bfs),
        "random" => Ok(Partitioner::Random),
        other => Err(Error::InvalidArgument(format!(
            "unknown partitioner `{other}` (expected strong[:beta], bfs, or random)"
        ))),
    }
}

fn parse_target(spec: &str) -> Result<ShiftTarget> {
    match spec {
        "smallest" => Ok(ShiftTarget::Smallest),
        "largest" => Ok(ShiftTarget::Largest),
        other => match other.strip_prefix("near:") {
            Some(point) => point
                .parse()
                .map(|point| ShiftTarget::NearestTo { point })
                .map_err(|e| Error::InvalidArgument(format!("target point `{point}`: {e}"))),
            None => Err(Error::InvalidArgument(format!(
                "unknown target `{other}` (expected smallest, largest, or near:<x>)"
            ))),
        },
    }
}

fn parse_dims(text: &str, expect: usize, what: &str) -> Result<Vec<usize>> {
    let dims: Vec<usize> = text
        .split('x')
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidArgument(format!("{what}: bad grid size `{text}`: {e}")))?;
    if dims.len() != expect {
        return Err(Error::InvalidArgument(format!(
            "{what}: expected {expect} sizes, got `{text}`"
        )));
    }
    Ok(dims)
}

/// Resolved matrix plus the canonical description recorded in manifests.
struct MatrixSource {
    matrix: SparseMatrix,
    description: String,
}

/// Parse a generator spec. `symmetrize` controls what `rand:` means:
/// eigenvalue commands need a symmetric matrix, so square random input is
/// symmetrized as (R + R^T)/2.
fn generate(spec: &str, default_seed: u64, symmetrize: bool) -> Result<SparseMatrix> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |msg: String| Err(Error::InvalidArgument(msg));
    match parts.as_slice() {
        ["lap1d", n] => gen_laplacian(&parse_dims(n, 1, "lap1d")?, CoefficientField::Uniform),
        ["lap2d", d] => gen_laplacian(&parse_dims(d, 2, "lap2d")?, CoefficientField::Uniform),
        ["lap3d", d] => gen_laplacian(&parse_dims(d, 3, "lap3d")?, CoefficientField::Uniform),
        ["sky", d] => gen_laplacian(
            &parse_dims(d, 3, "sky")?,
            CoefficientField::Skyscraper { seed: default_seed },
        ),
        ["sky", d, seed] => {
            let seed: u64 = seed
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("sky seed `{seed}`: {e}")))?;
            gen_laplacian(&parse_dims(d, 3, "sky")?, CoefficientField::Skyscraper { seed })
        }
        ["rand", shape] => gen_rand(shape, default_seed, symmetrize),
        ["rand", shape, seed] => {
            let seed: u64 = seed
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("rand seed `{seed}`: {e}")))?;
            gen_rand(shape, seed, symmetrize)
        }
        _ => bad(format!(
            "unknown generator spec `{spec}` (expected lap1d:n, lap2d:AxB, lap3d:AxBxC, \
             sky:AxBxC[:seed], rand:n, or rand:mxn[:seed])"
        )),
    }
}

fn gen_rand(shape: &str, seed: u64, symmetrize: bool) -> Result<SparseMatrix> {
    if let Some((m, n)) = shape.split_once('x') {
        let m: usize = m
            .parse()
            .map_err(|e| Error::InvalidArgument(format!("rand rows `{m}`: {e}")))?;
        let n: usize = n
            .parse()
            .map_err(|e| Error::InvalidArgument(format!("rand cols `{n}`: {e}")))?;
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("rand sizes must be >= 1".into()));
        }
        if symmetrize && m != n {
            return Err(Error::InvalidArgument(format!(
                "this command needs a symmetric matrix; rand:{m}x{n} is not square"
            )));
        }
        if symmetrize {
            Ok(gen_random_symmetric(m, seed))
        } else {
            Ok(gen_random_sparse(m, n, seed))
        }
    } else {
        let n: usize = shape
            .parse()
            .map_err(|e| Error::InvalidArgument(format!("rand size `{shape}`: {e}")))?;
        if n == 0 {
            return Err(Error::InvalidArgument("rand size must be >= 1".into()));
        }
        if symmetrize {
            Ok(gen_random_symmetric(n, seed))
        } else {
            Ok(gen_random_sparse(n, n, seed))
        }
    }
}

fn resolve_matrix(source: &SourceArgs, seed: u64, symmetrize: bool) -> Result<MatrixSource> {
    match (&source.matrix, &source.gen) {
        (Some(path), None) => {
            let matrix = load_matrix_market(path)?;
            if symmetrize && !matrix.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
            Ok(MatrixSource {
                matrix,
                description: format!("file:{}", path.display()),
            })
        }
        (None, Some(spec)) => Ok(MatrixSource {
            matrix: generate(spec, seed, symmetrize)?,
            description: format!("gen:{spec}"),
        }),
        _ => Err(Error::InvalidArgument(
            "exactly one of --matrix and --gen is required".into(),
        )),
    }
}

/// Default coarse dimension: a 10:1 coarsening ratio.
fn default_coarse(n: usize) -> usize {
    n.div_ceil(10).max(1)
}

/// Run `body` inside a rayon pool of the requested width, or inline on the
/// global pool when no width was given.
fn with_threads<R: Send>(threads: Option<usize>, body: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(body()),
        Some(0) => Err(Error::InvalidArgument("--threads must be >= 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
            .map(|pool| pool.install(body)),
    }
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum EstimateKind {
    Eigen,
    Singular,
}

fn cmd_estimate(args: EstimateArgs, kind: EstimateKind) -> Result<u8> {
    let seed = default_seed(args.seed);
    let symmetrize = kind == EstimateKind::Eigen;
    let source = resolve_matrix(&args.source, seed, symmetrize)?;
    let a = &source.matrix;

    if kind == EstimateKind::Singular && args.paper_literal {
        return Err(Error::InvalidArgument(
            "--paper-literal is not available for singular values: the two-sided coarse \
             operator requires normalized U and V"
                .into(),
        ));
    }
    let partitioner = parse_partitioner(&args.partitioner)?;
    let limit = match kind {
        EstimateKind::Eigen => a.nrows(),
        EstimateKind::Singular => a.nrows().min(a.ncols()),
    };
    let n_aggregates = args.coarse.unwrap_or_else(|| default_coarse(limit));
    let per_sample = args.per_sample.unwrap_or(n_aggregates);
    let cfg = SampleConfig {
        samples: args.samples,
        per_sample,
        n_aggregates,
        partitioner,
        normalized: !args.paper_literal,
        seed,
        tol: args.tol,
        max_iters: args.max_iters,
        target: parse_target(&args.target)?,
    };
    cfg.validate(limit)?;

    let command = match kind {
        EstimateKind::Eigen => "estimate-eig",
        EstimateKind::Singular => "estimate-svd",
    };
    let mut manifest = RunManifest::new(command, &source.description, cfg);
    manifest.threads = args.threads;
    if args.paper_literal {
        eprintln!(
            "note: paper-literal mode (unit-entry interpolation); interlacing checks \
             do not apply and are skipped"
        );
    }

    let started = Instant::now();
    let outcome = with_threads(args.threads, || match kind {
        EstimateKind::Eigen => estimate_eigenvalues_detailed(a, &cfg),
        EstimateKind::Singular => estimate_singular_values_detailed(a, &cfg),
    })?;
    manifest.record_timing("estimate_seconds", started.elapsed().as_secs_f64());

    match outcome {
        Ok((estimate, _)) => {
            write_output(&args.out, "estimate.json", &estimate_to_json(&estimate, &cfg))?;
            write_output(&args.out, "estimate.csv", &estimate_to_csv(&estimate))?;
            write_output(&args.out, "manifest.json", &manifest.to_json())?;
            println!(
                "{} values ({} refinements rejected) -> {}",
                estimate.values.len(),
                estimate.rejected,
                args.out.display()
            );
            Ok(EXIT_OK)
        }
        Err(Error::EmptyEstimate) => {
            write_output(&args.out, "manifest.json", &manifest.to_json())?;
            eprintln!("error: {}", Error::EmptyEstimate);
            Ok(EXIT_EMPTY_OR_VIOLATION)
        }
        Err(e) => Err(e),
    }
}

fn cmd_extremes(args: ExtremesArgs) -> Result<u8> {
    let seed = default_seed(args.seed);
    let source = resolve_matrix(&args.source, seed, !args.svd)?;
    let a = &source.matrix;
    let limit = if args.svd {
        a.nrows().min(a.ncols())
    } else {
        a.nrows()
    };
    let n_aggregates = args.coarse.unwrap_or_else(|| default_coarse(limit));
    let partitioner = parse_partitioner(&args.partitioner)?;

    let (lo, hi) = with_threads(args.threads, || {
        if args.svd {
            extreme_singular_values(a, args.samples, n_aggregates, seed, args.refine)
        } else {
            extreme_eigenvalues(a, args.samples, n_aggregates, partitioner, seed, args.refine)
        }
    })??;

    let label = if args.svd { "sigma" } else { "lambda" };
    println!("estimated {label}_min: {lo}");
    println!("estimated {label}_max: {hi}");

    if args.oracle {
        if a.nrows().max(a.ncols()) > ORACLE_SIZE_CAP {
            return Err(Error::InvalidArgument(format!(
                "--oracle is limited to matrices of order <= {ORACLE_SIZE_CAP}"
            )));
        }
        let (true_lo, true_hi) = if args.svd {
            let s = dense_singular_values(&a.to_dense())?;
            (s.min().unwrap_or(0.0), s.max().unwrap_or(0.0))
        } else {
            let s = sym_eigenvalues(&a.to_dense())?;
            (s.min().unwrap_or(0.0), s.max().unwrap_or(0.0))
        };
        println!("oracle {label}_min: {true_lo}");
        println!("oracle {label}_max: {true_hi}");
        if args.svd {
            // only the max side is an inner bound: the singular value
            // separation gives sigma_i(B) <= sigma_i(A), while every lower
            // bound is vacuous once r = (m-p) + (n-q) reaches min(m, n)
            println!("inner-bound slack max: {}", true_hi - hi);
            println!("note: sigma_min has no interlacing bound; the coarse minimum may undershoot");
        } else {
            println!("inner-bound slack min: {}", lo - true_lo);
            println!("inner-bound slack max: {}", true_hi - hi);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    if args.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be >= 1".into()));
    }
    let seed = default_seed(args.seed);
    let source = resolve_matrix(&args.source, seed, !args.svd)?;
    let a = &source.matrix;
    if a.nrows().max(a.ncols()) > ORACLE_SIZE_CAP {
        return Err(Error::InvalidArgument(format!(
            "verification uses dense oracles and is limited to order <= {ORACLE_SIZE_CAP}"
        )));
    }
    let limit = if args.svd {
        a.nrows().min(a.ncols())
    } else {
        a.nrows()
    };
    let n_aggregates = args.coarse.unwrap_or_else(|| default_coarse(limit));
    let partitioner = parse_partitioner(&args.partitioner)?;

    let mut reports = Vec::with_capacity(args.trials);
    for trial in 0..args.trials {
        let trial_seed = derive_seed(seed, trial as u64);
        let report = if args.svd {
            let u = build_interpolation(
                &random_partition(a.nrows(), n_aggregates, derive_seed(trial_seed, 1))?,
                true,
            );
            let v = build_interpolation(
                &random_partition(a.ncols(), n_aggregates, derive_seed(trial_seed, 2))?,
                true,
            );
            verify_interlacing_svd(a, &u, &v)?
        } else {
            let partition = match partitioner {
                Partitioner::StrongCoupling { beta } => strong_coupling_aggregation(a, beta)?,
                Partitioner::Bfs => bfs_graph_partition(a, n_aggregates, trial_seed)?,
                Partitioner::Random => random_partition(a.nrows(), n_aggregates, trial_seed)?,
            };
            verify_interlacing(a, &build_interpolation(&partition, true))?
        };
        reports.push((trial, report));
    }

    write_output(&args.out, "interlace.csv", &interlace_table_csv(&reports))?;
    let violations: Vec<usize> = reports
        .iter()
        .filter(|(_, r)| !r.ok)
        .map(|(t, _)| *t)
        .collect();
    let worst = reports
        .iter()
        .map(|(_, r)| r.max_violation)
        .fold(0.0, f64::max);
    println!(
        "{} trials, {} violations, worst violation {:e} -> {}",
        args.trials,
        violations.len(),
        worst,
        args.out.display()
    );
    if violations.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprintln!("interlacing violated in trials {violations:?}");
        Ok(EXIT_EMPTY_OR_VIOLATION)
    }
}

fn cmd_gershgorin(args: GershgorinArgs) -> Result<u8> {
    let seed = default_seed(None);
    let source = resolve_matrix(&args.source, seed, false)?;
    let a = &source.matrix;
    let discs = a.gershgorin_discs()?;

    let oracle = if args.oracle {
        if !a.is_symmetric() {
            return Err(Error::InvalidArgument(
                "--oracle needs a symmetric matrix (the dense oracle is symmetric-only)".into(),
            ));
        }
        if a.nrows() > ORACLE_SIZE_CAP {
            return Err(Error::InvalidArgument(format!(
                "--oracle is limited to matrices of order <= {ORACLE_SIZE_CAP}"
            )));
        }
        Some(sym_eigenvalues(&a.to_dense())?.values().to_vec())
    } else {
        None
    };

    write_output(&args.out, "gershgorin.csv", &discs_to_csv(&discs))?;
    write_output(
        &args.out,
        "gershgorin.svg",
        &gershgorin_svg(&discs, oracle.as_deref()),
    )?;
    println!("{} discs -> {}", discs.len(), args.out.display());
    Ok(EXIT_OK)
}

fn cmd_spectrum_plot(args: PlotArgs) -> Result<u8> {
    let seed = default_seed(args.seed);
    let source = resolve_matrix(&args.source, seed, !args.svd)?;
    let a = &source.matrix;
    if a.nrows().max(a.ncols()) > ORACLE_SIZE_CAP {
        return Err(Error::InvalidArgument(format!(
            "the spectrum plot draws the dense-oracle spectrum and is limited to order <= \
             {ORACLE_SIZE_CAP}"
        )));
    }
    let limit = if args.svd {
        a.nrows().min(a.ncols())
    } else {
        a.nrows()
    };
    let n_aggregates = args.coarse.unwrap_or_else(|| default_coarse(limit));
    let per_sample = args.per_sample.unwrap_or(n_aggregates);
    let cfg = SampleConfig {
        samples: args.samples,
        per_sample,
        n_aggregates,
        partitioner: parse_partitioner(&args.partitioner)?,
        ..SampleConfig::new(args.samples, per_sample, n_aggregates, seed)
    };
    cfg.validate(limit)?;

    let details = with_threads(args.threads, || {
        if args.svd {
            estimate_singular_values_detailed(a, &cfg)
        } else {
            estimate_eigenvalues_detailed(a, &cfg)
        }
    })?;
    let details = match details {
        Ok((_, details)) => details,
        // still plot the coarse rows when nothing converged
        Err(Error::EmptyEstimate) => Vec::new(),
        Err(e) => return Err(e),
    };

    let fine = if args.svd {
        dense_singular_values(&a.to_dense())?.values().to_vec()
    } else {
        sym_eigenvalues(&a.to_dense())?.values().to_vec()
    };
    write_output(&args.out, "spectrum.svg", &spectrum_svg(&fine, &details))?;
    println!(
        "spectrum plot with {} samples -> {}",
        details.len(),
        args.out.display()
    );
    Ok(EXIT_OK)
}
