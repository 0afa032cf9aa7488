//! `ccspectra` command line: validate and inspect CC documents, export
//! Laplacians and HKS tables, generate datasets, compare pairs, and time the
//! pipeline phases.
//!
//! Exit codes: 0 success, 1 analysis failure (invalid complex content or an
//! undistinguished non-isomorphic pair), 2 input/usage error (missing files,
//! syntax errors, out-of-range requests).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use ccspectra::analysis::{
    distinguish, evaluate_corpus, LaplacianChoice, Verdict, DEFAULT_THRESHOLD,
};
use ccspectra::complex::CombinatorialComplex;
use ccspectra::datasets::{
    fig4_pair, gen_corpus, make_torus, parse_manifest, render_manifest, CorpusMode,
    CorpusPair, ManifestRow, PairInstance, TorusSpec,
};
use ccspectra::error::Error as CcError;
use ccspectra::io;
use ccspectra::operators::{cc_laplacian, hodge_laplacian, Convention, WeightScheme};
use ccspectra::spectral::{
    eigendecompose, hks_of_complex, TimeGrid, DEFAULT_TIME_COUNT, DEFAULT_T_MAX,
};

#[derive(Parser)]
#[command(name = "ccspectra", version, about = "Spectral toolkit for combinatorial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a CC document parses and validates.
    Validate { path: PathBuf },

    /// Export a Laplacian matrix as CSV with a labeled header row.
    Laplacian {
        path: PathBuf,
        /// Operator: `cc` or `hodge:K`.
        #[arg(long, default_value = "cc", value_parser = parse_laplacian)]
        laplacian: LaplacianChoice,
        #[arg(long, value_enum, default_value_t = ConventionArg::Signed)]
        convention: ConventionArg,
        /// Weight scheme for the `cc` operator.
        #[arg(long, default_value = "dyadic")]
        weights: String,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Export the per-vertex HKS table as CSV.
    Hks {
        path: PathBuf,
        /// Number of diffusion times.
        #[arg(long, default_value_t = DEFAULT_TIME_COUNT)]
        d: usize,
        /// Largest diffusion time.
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Signed)]
        convention: ConventionArg,
        #[arg(long, default_value = "dyadic")]
        weights: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Generate dataset files.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },

    /// Compare two CC documents, or every pair of a corpus manifest.
    Distinguish {
        /// Left document (single-pair mode).
        path_a: Option<PathBuf>,
        /// Right document (single-pair mode).
        path_b: Option<PathBuf>,
        /// Corpus manifest CSV (corpus mode).
        #[arg(long, conflicts_with_all = ["path_a", "path_b"])]
        manifest: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TIME_COUNT)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Signed)]
        convention: ConventionArg,
        #[arg(long, default_value = "cc", value_parser = parse_laplacian)]
        laplacian: LaplacianChoice,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Worker threads (falls back to CCSPECTRA_THREADS, then all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Time Laplacian assembly, eigendecomposition, and HKS evaluation on
    /// tori of the requested sizes.
    Bench {
        /// Approximate rank-0 cell counts, e.g. `--sizes 9,100,400`.
        #[arg(long, required = true, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Repetitions per size; the CSV reports medians.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
        #[arg(long, value_enum, default_value_t = ConventionArg::Signed)]
        convention: ConventionArg,
        #[arg(long, default_value_t = DEFAULT_TIME_COUNT)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// One torus document.
    Torus {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Augmentations `RANK:FACE_A,FACE_B` (repeatable), e.g. `4:0,4`.
        #[arg(long = "aug", value_parser = parse_augmentation)]
        augmentations: Vec<(usize, usize, usize)>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// A seeded corpus of blind-spot pairs plus manifest.
    BlindspotCorpus {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        grid_min: usize,
        #[arg(long, default_value_t = 6)]
        grid_max: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// The two-complex counterexample pair (A.cc, B.cc).
    Fig4 {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Signed,
    Dirichlet,
}

impl From<ConventionArg> for Convention {
    fn from(value: ConventionArg) -> Convention {
        match value {
            ConventionArg::Signed => Convention::SignedIncidence,
            ConventionArg::Dirichlet => Convention::Dirichlet,
        }
    }
}

fn parse_laplacian(s: &str) -> Result<LaplacianChoice, String> {
    if s == "cc" {
        return Ok(LaplacianChoice::Cc);
    }
    if let Some(k) = s.strip_prefix("hodge:") {
        return k
            .parse::<usize>()
            .map(LaplacianChoice::Hodge)
            .map_err(|_| format!("invalid hodge rank `{k}`"));
    }
    Err(format!("expected `cc` or `hodge:K`, got `{s}`"))
}

fn parse_augmentation(s: &str) -> Result<(usize, usize, usize), String> {
    let (rank, faces) = s
        .split_once(':')
        .ok_or_else(|| format!("expected RANK:FACE_A,FACE_B, got `{s}`"))?;
    let (a, b) = faces
        .split_once(',')
        .ok_or_else(|| format!("expected two faces after `:` in `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(rank)?, parse(a)?, parse(b)?))
}

/// Failures carry the exit code they map to.
enum CmdError {
    /// Unreadable or syntactically invalid input, or an invalid request.
    Input(String),
    /// The input was well-formed but the analysis failed.
    Analysis(String),
}

impl CmdError {
    fn exit_code(&self) -> u8 {
        match self {
            CmdError::Input(_) => 2,
            CmdError::Analysis(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Input(m) | CmdError::Analysis(m) => m,
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Input(e.to_string())
    }
}

impl From<CcError> for CmdError {
    fn from(e: CcError) -> Self {
        match e {
            // Malformed documents and invalid requests.
            CcError::Syntax { .. }
            | CcError::RankOutOfRange { .. }
            | CcError::UnknownScheme(_)
            | CcError::UnknownMode(_)
            | CcError::NonPositiveCount
            | CcError::InvalidTimeGrid(_)
            | CcError::GridTooSmall { .. }
            | CcError::InvalidFaceIndex { .. }
            | CcError::FacePairNotDistinct(_)
            | CcError::UnsupportedAugmentationRank(_)
            | CcError::TooLarge(_) => CmdError::Input(e.to_string()),
            // Well-formed input that fails validation or numerics.
            other => CmdError::Analysis(other.to_string()),
        }
    }
}

type CmdResult = Result<u8, CmdError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Laplacian {
            path,
            laplacian,
            convention,
            weights,
            out,
        } => cmd_laplacian(&path, laplacian, convention.into(), &weights, out.as_deref()),
        Command::Hks {
            path,
            d,
            t_max,
            convention,
            weights,
            out,
        } => cmd_hks(&path, d, t_max, convention.into(), &weights, out.as_deref()),
        Command::Gen { kind } => cmd_gen(kind),
        Command::Distinguish {
            path_a,
            path_b,
            manifest,
            d,
            t_max,
            convention,
            laplacian,
            threshold,
            threads,
            out,
        } => {
            configure_threads(threads);
            let grid = TimeGrid::uniform(d, t_max)?;
            match (path_a, path_b, manifest) {
                (Some(a), Some(b), None) => cmd_distinguish_pair(
                    &a,
                    &b,
                    &grid,
                    convention.into(),
                    laplacian,
                    threshold,
                    out.as_deref(),
                ),
                (None, None, Some(m)) => cmd_distinguish_corpus(
                    &m,
                    &grid,
                    convention.into(),
                    laplacian,
                    threshold,
                    out.as_deref(),
                ),
                _ => Err(CmdError::Input(
                    "provide either two document paths or --manifest".into(),
                )),
            }
        }
        Command::Bench {
            sizes,
            reps,
            convention,
            d,
            out,
        } => cmd_bench(&sizes, reps as usize, convention.into(), d, out.as_deref()),
    }
}

fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("CCSPECTRA_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        // Ignore failure: the global pool may already exist in tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn load_complex(path: &Path) -> Result<CombinatorialComplex, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
    Ok(io::parse(&text)?)
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CmdError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_validate(path: &Path) -> CmdResult {
    let cc = load_complex(path)?;
    println!(
        "ok: {} vertices, {} cells, max rank {}",
        cc.n_vertices(),
        cc.n_cells(),
        cc.max_rank()
    );
    Ok(0)
}

fn scheme(name: &str, max_rank: usize) -> Result<WeightScheme, CmdError> {
    Ok(WeightScheme::of_kind(name, max_rank)?)
}

fn matrix_csv(labels: &[String], matrix: &nalgebra::DMatrix<f64>) -> String {
    let mut out = labels.join(",");
    out.push('\n');
    for i in 0..matrix.nrows() {
        for j in 0..matrix.ncols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", matrix[(i, j)]);
        }
        out.push('\n');
    }
    out
}

fn cmd_laplacian(
    path: &Path,
    choice: LaplacianChoice,
    convention: Convention,
    weights: &str,
    out: Option<&Path>,
) -> CmdResult {
    let cc = load_complex(path)?;
    let (labels, matrix) = match choice {
        LaplacianChoice::Cc => {
            let w = scheme(weights, cc.max_rank())?;
            let l = cc_laplacian(&cc, &w, convention)?;
            let labels: Vec<String> = cc.vertices().iter().map(|v| v.to_string()).collect();
            (labels, l.matrix().clone())
        }
        LaplacianChoice::Hodge(k) => {
            let h = hodge_laplacian(&cc, k)?;
            let labels: Vec<String> = cc.cells_of_rank(k).iter().map(|c| c.label()).collect();
            (labels, h)
        }
    };
    emit(out, &matrix_csv(&labels, &matrix))?;
    Ok(0)
}

fn cmd_hks(
    path: &Path,
    d: usize,
    t_max: f64,
    convention: Convention,
    weights: &str,
    out: Option<&Path>,
) -> CmdResult {
    let cc = load_complex(path)?;
    let grid = TimeGrid::uniform(d, t_max)?;
    let w = scheme(weights, cc.max_rank())?;
    let l = cc_laplacian(&cc, &w, convention)?;
    let table = hks_of_complex(&cc, &l, &grid)?;
    emit(out, &table.to_csv())?;
    Ok(0)
}

fn write_document(dir: &Path, name: &str, cc: &CombinatorialComplex) -> Result<PathBuf, CmdError> {
    let path = dir.join(name);
    std::fs::write(&path, io::serialize(cc))?;
    Ok(path)
}

fn cmd_gen(kind: GenKind) -> CmdResult {
    match kind {
        GenKind::Torus {
            m,
            n,
            augmentations,
            out_dir,
        } => {
            std::fs::create_dir_all(&out_dir)?;
            let mut spec = TorusSpec::new(m, n)?;
            for (rank, a, b) in augmentations {
                spec = spec.with_augmentation(rank, (a, b))?;
            }
            let cc = make_torus(&spec)?;
            let path = write_document(&out_dir, &format!("torus_{m}x{n}.cc"), &cc)?;
            println!("{} ({} cells)", path.display(), cc.n_cells());
        }
        GenKind::Fig4 { out_dir } => {
            std::fs::create_dir_all(&out_dir)?;
            let pair = fig4_pair();
            let a = write_document(&out_dir, "A.cc", &pair.left)?;
            let b = write_document(&out_dir, "B.cc", &pair.right)?;
            println!("{}", a.display());
            println!("{}", b.display());
        }
        GenKind::BlindspotCorpus {
            count,
            seed,
            grid_min,
            grid_max,
            out_dir,
        } => {
            if grid_min < 3 || grid_min > grid_max {
                return Err(CmdError::Input(format!(
                    "grid range {grid_min}..={grid_max} invalid; sides must be >= 3"
                )));
            }
            std::fs::create_dir_all(&out_dir)?;
            let corpus = gen_corpus(count, grid_min..=grid_max, seed)?;
            let mut rows = Vec::with_capacity(corpus.len());
            for pair in &corpus {
                let left = format!("pair_{:03}_left.cc", pair.pair_id);
                let right = format!("pair_{:03}_right.cc", pair.pair_id);
                write_document(&out_dir, &left, &pair.instance.left)?;
                write_document(&out_dir, &right, &pair.instance.right)?;
                rows.push(ManifestRow {
                    pair_id: pair.pair_id,
                    left_file: left,
                    right_file: right,
                    mode: pair.mode.as_str().to_string(),
                    m: pair.m,
                    n: pair.n,
                    seed: pair.seed,
                });
            }
            let manifest = out_dir.join("manifest.csv");
            std::fs::write(&manifest, render_manifest(&rows))?;
            println!(
                "{}: {} pairs ({} files)",
                manifest.display(),
                corpus.len(),
                2 * corpus.len()
            );
        }
    }
    Ok(0)
}

fn single_pair_csv(report: &ccspectra::analysis::DistinguishReport, oracle: Option<bool>) -> String {
    let oracle = match oracle {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    };
    format!(
        "pair_id,spectral_distance,descriptor_distance,verdict,oracle_isomorphic\n0,{},{},{},{}\n",
        report.spectral_distance, report.descriptor_distance, report.verdict, oracle
    )
}

fn cmd_distinguish_pair(
    path_a: &Path,
    path_b: &Path,
    grid: &TimeGrid,
    convention: Convention,
    choice: LaplacianChoice,
    threshold: f64,
    out: Option<&Path>,
) -> CmdResult {
    let a = load_complex(path_a)?;
    let b = load_complex(path_b)?;
    let report = distinguish(&a, &b, grid, convention, choice, threshold)?;
    // Ground truth is only available where the exhaustive oracle is
    // feasible; without it the verdict is informational and exit is 0.
    let oracle = if a.n_vertices() <= 10 && b.n_vertices() <= 10 {
        Some(ccspectra::analysis::brute_force_isomorphic(&a, &b)?)
    } else {
        None
    };
    emit(out, &single_pair_csv(&report, oracle))?;
    eprintln!(
        "{}: spectral {:.3e}, descriptor {:.3e}",
        report.verdict, report.spectral_distance, report.descriptor_distance
    );
    match (oracle, report.verdict) {
        (Some(false), Verdict::Indistinguishable) => Ok(1),
        _ => Ok(0),
    }
}

fn cmd_distinguish_corpus(
    manifest_path: &Path,
    grid: &TimeGrid,
    convention: Convention,
    choice: LaplacianChoice,
    threshold: f64,
    out: Option<&Path>,
) -> CmdResult {
    let text = std::fs::read_to_string(manifest_path)
        .map_err(|e| CmdError::Input(format!("{}: {e}", manifest_path.display())))?;
    let rows = parse_manifest(&text)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let corpus: Vec<CorpusPair> = rows
        .iter()
        .map(|row| -> Result<CorpusPair, CmdError> {
            let mode = CorpusMode::parse(&row.mode)?;
            let left = load_complex(&base.join(&row.left_file))?;
            let right = load_complex(&base.join(&row.right_file))?;
            Ok(CorpusPair {
                pair_id: row.pair_id,
                mode,
                m: row.m,
                n: row.n,
                seed: row.seed,
                instance: PairInstance {
                    isomorphic: mode == CorpusMode::Control,
                    description: format!("{} pair {}", row.mode, row.pair_id),
                    left,
                    right,
                },
            })
        })
        .collect::<Result<_, _>>()?;

    let report = evaluate_corpus(&corpus, grid, convention, threshold, choice)?;
    emit(out, &report.to_csv())?;
    if let Some(acc) = report.accuracy {
        eprintln!("accuracy (non-isomorphic pairs): {acc:.3}");
    }
    if let Some(acc) = report.hodge_accuracy {
        eprintln!("hodge:0 baseline accuracy:       {acc:.3}");
    }
    if let Some(fpr) = report.false_positive_rate {
        eprintln!("false positive rate (controls):  {fpr:.3}");
    }
    let all_separated = report
        .rows
        .iter()
        .filter(|r| !r.labeled_isomorphic)
        .all(|r| r.verdict == Verdict::Distinguished);
    Ok(if all_separated { 0 } else { 1 })
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

/// One bench row: per-phase medians over `repetitions` runs.
struct BenchRecord {
    n_vertices: usize,
    n_cells: usize,
    build_ms: f64,
    eig_ms: f64,
    hks_ms: f64,
    repetitions: usize,
}

fn bench_torus(
    side: usize,
    reps: usize,
    convention: Convention,
    grid: &TimeGrid,
) -> Result<BenchRecord, CmdError> {
    let spec = TorusSpec::new(side, side)?;
    let (mut build_ms, mut eig_ms, mut hks_ms) = (Vec::new(), Vec::new(), Vec::new());
    let mut shape = (0usize, 0usize);
    for _ in 0..reps {
        let t0 = Instant::now();
        let cc = make_torus(&spec)?;
        let w = WeightScheme::dyadic(cc.max_rank());
        let l = cc_laplacian(&cc, &w, convention)?;
        build_ms.push(t0.elapsed().as_secs_f64() * 1e3);

        let t1 = Instant::now();
        let spectrum = eigendecompose(&l)?;
        eig_ms.push(t1.elapsed().as_secs_f64() * 1e3);

        let t2 = Instant::now();
        let table = ccspectra::spectral::hks(&spectrum, grid, cc.vertices())?;
        hks_ms.push(t2.elapsed().as_secs_f64() * 1e3);
        std::hint::black_box(&table);
        shape = (cc.n_vertices(), cc.n_cells());
    }
    Ok(BenchRecord {
        n_vertices: shape.0,
        n_cells: shape.1,
        build_ms: median(&mut build_ms),
        eig_ms: median(&mut eig_ms),
        hks_ms: median(&mut hks_ms),
        repetitions: reps,
    })
}

fn cmd_bench(
    sizes: &[usize],
    reps: usize,
    convention: Convention,
    d: usize,
    out: Option<&Path>,
) -> CmdResult {
    let grid = TimeGrid::uniform(d, DEFAULT_T_MAX)?;
    let mut csv = String::from("n_vertices,n_cells,build_ms,eig_ms,hks_ms,repetitions\n");
    for &size in sizes {
        let side = (size as f64).sqrt().round().max(3.0) as usize;
        let rec = bench_torus(side, reps, convention, &grid)?;
        let _ = writeln!(
            csv,
            "{},{},{:.3},{:.3},{:.3},{}",
            rec.n_vertices, rec.n_cells, rec.build_ms, rec.eig_ms, rec.hks_ms, rec.repetitions
        );
    }
    emit(out, &csv)?;
    Ok(0)
}
