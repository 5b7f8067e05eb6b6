use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chebrank::altmin::{AltMin, AltMinOptions};
use chebrank::bench::{bench_csv, run_bench};
use chebrank::globalopt::{optimize_with, OptimizeOptions, Termination};
use chebrank::io::{parse_matrix, Format};
use chebrank::matcore::{preserves_chebyshev_with_tol, profile, DenseMatrix};
use chebrank::oracle::exhaustive_optimize;
use chebrank::random::{perturb, stream};
use chebrank::report::{to_json, GraphJson, OptResultJson, OracleJson, PcReportJson};
use chebrank::signgraph::{
    build_dependency_graph, dependency_dot, enumerate_from_profile, transition_dot,
    validate_structure, DEFAULT_ENUMERATION_LIMIT,
};
use clap::{Args, Parser, Subcommand};

const EXIT_ERROR: u8 = 1;
const EXIT_RUN_LIMIT: u8 = 2;
const EXIT_NOT_PC: u8 = 3;

#[derive(Parser)]
#[command(name = "chebrank", version, about = "Optimal rank-1 approximation in the Chebyshev norm")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an optimal rank-1 approximation and print it as JSON.
    Approx(ApproxArgs),
    /// Print the sign dependency graph (and optionally the full sign
    /// transition graph) in DOT format.
    Graph(GraphArgs),
    /// Report whether every row and column has a unique entry of largest
    /// modulus.
    Check(CheckArgs),
    /// Brute-force optimum over all sign patterns (at most 16 columns).
    Oracle(OracleArgs),
    /// Run the benchmark on random standard-normal matrices and print CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Matrix file, or `-` for standard input.
    input: PathBuf,
    /// `csv` or `mtx`; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<Format>,
    /// Add uniform noise from [-EPS, EPS] to every entry first.
    #[arg(long, value_name = "EPS")]
    perturb: Option<f64>,
    /// Seed for --perturb and for shuffling the search order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "1e-12")]
    conv_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Maximum number of alternating minimization runs (default 10 n).
    #[arg(long)]
    run_limit: Option<usize>,
    /// Support tolerance ladder for alternance certificates.
    #[arg(long, value_delimiter = ',', default_value = "1e-7,1e-5,1e-4")]
    support_tol: Vec<f64>,
    /// Treat a second largest modulus within this relative distance of the
    /// largest as a tie when checking the input.
    #[arg(long, default_value_t = 0.0)]
    tie_tol: f64,
    /// Shuffle the candidate order using --seed.
    #[arg(long)]
    shuffle: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Also enumerate and validate the full sign transition graph.
    #[arg(long)]
    full: bool,
    /// Largest column count accepted by --full.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    limit: usize,
    /// Print a JSON summary instead of DOT.
    #[arg(long)]
    json: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.0)]
    tie_tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated matrix sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    run_limit: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

type CliResult = Result<u8, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Approx(a) => approx(a),
        Command::Graph(a) => graph(a),
        Command::Check(a) => check(a),
        Command::Oracle(a) => oracle(a),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn load(args: &InputArgs) -> Result<DenseMatrix, String> {
    let text = if args.input == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        s
    } else {
        fs::read_to_string(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?
    };
    let format = args.format.unwrap_or_else(|| Format::from_path(&args.input));
    let a = parse_matrix(&text, format).map_err(|e| e.to_string())?;
    Ok(match args.perturb {
        Some(eps) if eps > 0.0 => perturb(&a, eps, &mut stream(args.seed, &[0x7065_7274])),
        _ => a,
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), String> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn altmin_options(s: &SolverArgs) -> Result<AltMinOptions, String> {
    if s.conv_tol.is_nan() || s.conv_tol <= 0.0 {
        return Err("--conv-tol must be positive".into());
    }
    Ok(AltMinOptions {
        max_iter: s.max_iter,
        conv_tol: s.conv_tol,
    })
}

fn approx(args: ApproxArgs) -> CliResult {
    let a = load(&args.input)?;
    if args.support_tol.iter().any(|t| t.is_nan() || *t <= 0.0) {
        return Err("--support-tol values must be positive".into());
    }
    if args.tie_tol > 0.0 {
        let report = preserves_chebyshev_with_tol(&a, args.tie_tol);
        if !report.preserves {
            return Err(format!(
                "matrix has near-ties within --tie-tol {} (rows {:?}, columns {:?})",
                args.tie_tol,
                one_based(&report.bad_rows),
                one_based(&report.bad_cols)
            ));
        }
    }
    let engine = AltMin::new(&a).map_err(|e| e.to_string())?;
    let opts = OptimizeOptions {
        altmin: altmin_options(&args.solver)?,
        tol_ladder: args.support_tol,
        run_limit: args.run_limit,
        seed: args.shuffle.then_some(args.input.seed),
    };
    let res = optimize_with(&engine, &opts).map_err(|e| e.to_string())?;
    let failures = res.certificate_failures();
    if failures > 0 {
        eprintln!("warning: {failures} run(s) could not be certified; used the full-pattern clause");
    }
    emit(args.output.as_deref(), &(to_json(&OptResultJson::from(&res)) + "\n"))?;
    Ok(match res.terminated {
        Termination::DnfFull => 0,
        Termination::RunLimit => {
            eprintln!("warning: run limit reached; the result may not be optimal");
            EXIT_RUN_LIMIT
        }
    })
}

fn one_based(x: &[usize]) -> Vec<usize> {
    x.iter().map(|i| i + 1).collect()
}

fn graph(args: GraphArgs) -> CliResult {
    let a = load(&args.input)?;
    let prof = profile(&a).map_err(|e| e.to_string())?;
    let dep = build_dependency_graph(&prof);
    let mut code = 0;
    let full = if args.full {
        let limit = args.limit.min(31);
        if a.cols() > limit {
            return Err(format!("--full needs at most {limit} columns, got {}", a.cols()));
        }
        let g = enumerate_from_profile(&prof);
        let report = validate_structure(&g);
        if !report.passed() {
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            code = EXIT_ERROR;
        }
        Some((g, report))
    } else {
        None
    };
    let text = if args.json {
        let summary = full.as_ref().map(|(g, r)| (g.summary(), r.clone()));
        to_json(&GraphJson::new(&dep, summary.as_ref().map(|(s, r)| (s, r)))) + "\n"
    } else {
        let mut t = dependency_dot(&dep);
        if let Some((g, _)) = &full {
            t.push_str(&transition_dot(g));
        }
        t
    };
    emit(args.output.as_deref(), &text)?;
    Ok(code)
}

fn check(args: CheckArgs) -> CliResult {
    let a = load(&args.input)?;
    let report = preserves_chebyshev_with_tol(&a, args.tie_tol);
    if args.json {
        println!("{}", to_json(&PcReportJson::from(&report)));
    } else if report.preserves {
        println!("PC: every row and column has a unique entry of largest modulus");
    } else {
        println!("not PC");
        if !report.bad_rows.is_empty() {
            println!("  rows with ties: {:?}", one_based(&report.bad_rows));
        }
        if !report.bad_cols.is_empty() {
            println!("  columns with ties: {:?}", one_based(&report.bad_cols));
        }
    }
    Ok(if report.preserves { 0 } else { EXIT_NOT_PC })
}

fn oracle(args: OracleArgs) -> CliResult {
    let a = load(&args.input)?;
    let res = exhaustive_optimize(&a, &altmin_options(&args.solver)?).map_err(|e| e.to_string())?;
    emit(args.output.as_deref(), &(to_json(&OracleJson::from(&res)) + "\n"))?;
    Ok(0)
}

fn bench(args: BenchArgs) -> CliResult {
    if args.sizes.iter().any(|&n| n < 2) {
        return Err("--sizes entries must be at least 2".into());
    }
    let opts = OptimizeOptions {
        altmin: altmin_options(&args.solver)?,
        run_limit: args.run_limit,
        ..Default::default()
    };
    let records = run_bench(&args.sizes, args.trials, args.seed, &opts).map_err(|e| e.to_string())?;
    emit(args.output.as_deref(), &bench_csv(&records))?;
    Ok(0)
}
