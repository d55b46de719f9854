//! Command-line front end: parse instances, run the instrumented
//! algorithms or the augmentation engine, verify replication, classify
//! walks, enumerate circuits, and export DOT views.
//!
//! Exit codes: 0 success (and, for `verify`, walks equal); 1 parse error or
//! failed verification; 2 infeasible instance; 3 flag conflict; 4 size
//! guard exceeded.

use circuitflow::algorithms::{
    run_gapa, run_hungarian, run_preflow_push, run_sspa, ActiveRule, PairingRule, PathRule,
    SspaOptions,
};
use circuitflow::circuits::enumerate_circuits;
use circuitflow::dot::{export_dot, DotView};
use circuitflow::geometry::{face_for, zero_pseudoflow_vertex, Algorithm};
use circuitflow::json;
use circuitflow::network::{assignment_matrix, parse_network, InputFormat, Network, NetworkKind};
use circuitflow::pivot::{
    augment, build_maxflow_objective, build_sspa_objective, CandidateMode, PathSearch, PivotRule,
};
use circuitflow::trace::WalkTrace;
use circuitflow::verify::{classify_walk, verify_replication, ComparisonMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "circuitflow",
    version,
    about = "circuit walks over pseudoflow polyhedra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatFlag {
    DimacsMin,
    DimacsMax,
    Csv,
}

#[derive(Args)]
struct InputArgs {
    /// Instance file (.min, .max, or .csv)
    input: PathBuf,
    /// Input format; inferred from the extension when omitted
    #[arg(long)]
    format: Option<FormatFlag>,
    /// Output file; a name derived from the input when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoFlag {
    Sspa,
    Gapa,
    Sapa,
    #[value(alias = "hm")]
    Hungarian,
    #[value(alias = "pfp")]
    PreflowPush,
}

impl AlgoFlag {
    fn algorithm(self) -> Algorithm {
        match self {
            AlgoFlag::Sspa => Algorithm::Sspa,
            AlgoFlag::Gapa => Algorithm::Gapa,
            AlgoFlag::Sapa => Algorithm::Sapa,
            AlgoFlag::Hungarian => Algorithm::Hungarian,
            AlgoFlag::PreflowPush => Algorithm::PreflowPush,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ActiveFlag {
    Fifo,
    Lowest,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathFlag {
    Bfs,
    Dfs,
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotFlag {
    Dantzig,
    Steepest,
    First,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeFlag {
    Structured,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareFlag {
    PointSequence,
    CircuitSequence,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewFlag {
    Original,
    Pseudoflow,
    Residual,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    MinCost,
    MaxFlow,
    Assignment,
}

#[derive(Subcommand)]
enum Command {
    /// Run an instrumented algorithm and write its walk trace
    Run {
        /// Algorithm to run
        algorithm: AlgoFlag,
        #[command(flatten)]
        io: InputArgs,
        /// Active-node rule for preflow-push
        #[arg(long, default_value = "lowest")]
        active: ActiveFlag,
        /// Path rule for gapa (sapa always searches shortest paths)
        #[arg(long, default_value = "dfs")]
        path: PathFlag,
        /// Node potentials for sspa
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        potentials: bool,
    },
    /// Run the circuit-augmentation engine and write its walk trace
    Augment {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value = "dantzig")]
        pivot: PivotFlag,
        /// `auto` builds the canonical objective for the instance kind;
        /// anything else is read as an objective JSON file
        #[arg(long, default_value = "auto")]
        objective: String,
        #[arg(long, default_value = "structured")]
        mode: ModeFlag,
        #[arg(long, default_value_t = circuitflow::pivot::DEFAULT_STEP_LIMIT)]
        step_limit: usize,
    },
    /// Check that circuit augmentation replicates an algorithm's walk
    Verify {
        algorithm: AlgoFlag,
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value = "point-sequence")]
        mode: CompareFlag,
    },
    /// Enumerate all circuits of the instance's polyhedron
    Circuits {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Classify a recorded walk as edge, vertex, or general
    Classify {
        /// Trace JSON file produced by `run` or `augment`
        trace: PathBuf,
        /// The instance the trace belongs to
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        format: Option<FormatFlag>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export DOT drawings of the network
    Export {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value = "original")]
        view: ViewFlag,
        /// Trace whose terminal point defines the residual view
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Generate a random instance; sizes and magnitudes are upper bounds
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest node count to sample
        #[arg(long, default_value_t = 8)]
        nodes: usize,
        /// Largest arc count to sample
        #[arg(long, default_value_t = 12)]
        arcs: usize,
        #[arg(long, default_value_t = 5)]
        max_capacity: i64,
        #[arg(long, default_value_t = 9)]
        max_cost: i64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn exit_code_for(error: &circuitflow::Error) -> u8 {
    use circuitflow::Error::*;
    match error {
        Syntax { .. } | Validation(_) => 1,
        Infeasible(_) | InfeasiblePoint(_) => 2,
        KindMismatch { .. } | BadArgument(_) => 3,
        SizeGuard { .. } => 4,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<circuitflow::Error> for Failure {
    fn from(error: circuitflow::Error) -> Failure {
        Failure {
            code: exit_code_for(&error),
            message: error.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(error: std::io::Error) -> Failure {
        Failure {
            code: 1,
            message: error.to_string(),
        }
    }
}

fn detect_format(path: &Path, flag: Option<FormatFlag>) -> Result<InputFormat, Failure> {
    if let Some(flag) = flag {
        return Ok(match flag {
            FormatFlag::DimacsMin => InputFormat::DimacsMin,
            FormatFlag::DimacsMax => InputFormat::DimacsMax,
            FormatFlag::Csv => InputFormat::AssignmentCsv,
        });
    }
    InputFormat::from_path(&path.to_string_lossy()).ok_or(Failure {
        code: 3,
        message: format!(
            "cannot infer the format of {}; pass --format",
            path.display()
        ),
    })
}

fn load_network(path: &Path, flag: Option<FormatFlag>) -> Result<Network, Failure> {
    let format = detect_format(path, flag)?;
    let text = std::fs::read_to_string(path)?;
    Ok(parse_network(&text, format)?)
}

fn derived_output(input: &Path, suffix: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "out".to_string());
    PathBuf::from(format!("{stem}.{suffix}"))
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn write_trace(
    net: &Network,
    trace: &WalkTrace,
    io: &InputArgs,
    summary: &[(String, String)],
) -> Result<(), Failure> {
    let path = io
        .output
        .clone()
        .unwrap_or_else(|| derived_output(&io.input, "trace.json"));
    write_output(
        &path,
        &json::to_output_string(&json::trace_to_json(net, trace)),
    )?;
    for (key, value) in summary {
        println!("{key}: {value}");
    }
    println!("steps: {}", trace.steps.len());
    println!("status: {}", trace.status.name());
    println!("trace: {}", path.display());
    Ok(())
}

fn cmd_run(
    algorithm: AlgoFlag,
    io: InputArgs,
    active: ActiveFlag,
    path: PathFlag,
    potentials: bool,
) -> Result<(), Failure> {
    let net = load_network(&io.input, io.format)?;
    match algorithm {
        AlgoFlag::Sspa => {
            let run = run_sspa(
                &net,
                SspaOptions {
                    pairing: PairingRule::GlobalShortest,
                    use_potentials: potentials,
                },
            )?;
            write_trace(
                &net,
                &run.trace,
                &io,
                &[("total cost".to_string(), run.total_cost.to_string())],
            )
        }
        AlgoFlag::Gapa | AlgoFlag::Sapa => {
            let rule = match (algorithm, path) {
                (AlgoFlag::Sapa, _) | (_, PathFlag::Bfs) => PathRule::Bfs,
                (_, PathFlag::Dfs) => PathRule::Dfs,
            };
            let run = run_gapa(&net, rule)?;
            write_trace(
                &net,
                &run.trace,
                &io,
                &[("flow value".to_string(), run.flow_value.to_string())],
            )
        }
        AlgoFlag::Hungarian => {
            let matrix = assignment_matrix(&net)?;
            let run = run_hungarian(&matrix)?;
            let assignment = run
                .assignment
                .iter()
                .enumerate()
                .map(|(r, c)| format!("{}->{}", r + 1, c + 1))
                .collect::<Vec<_>>()
                .join(" ");
            write_trace(
                &net,
                &run.trace,
                &io,
                &[
                    ("total cost".to_string(), run.total_cost.to_string()),
                    ("assignment".to_string(), assignment),
                ],
            )
        }
        AlgoFlag::PreflowPush => {
            let rule = match active {
                ActiveFlag::Fifo => ActiveRule::Fifo,
                ActiveFlag::Lowest => ActiveRule::LowestId,
            };
            let run = run_preflow_push(&net, rule)?;
            write_trace(
                &net,
                &run.trace,
                &io,
                &[("flow value".to_string(), run.flow_value.to_string())],
            )
        }
    }
}

fn cmd_augment(
    io: InputArgs,
    pivot: PivotFlag,
    objective: String,
    mode: ModeFlag,
    step_limit: usize,
) -> Result<(), Failure> {
    let net = load_network(&io.input, io.format)?;
    let objective = if objective == "auto" {
        match net.kind() {
            NetworkKind::MinCost | NetworkKind::Assignment { .. } => build_sspa_objective(&net)?,
            NetworkKind::MaxFlow { .. } => build_maxflow_objective(&net)?,
        }
    } else {
        let text = std::fs::read_to_string(&objective)?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure {
            code: 1,
            message: format!("{objective}: {e}"),
        })?;
        json::objective_from_json(&net, &value)?
    };
    let algorithm = match net.kind() {
        NetworkKind::MinCost => Algorithm::Sspa,
        NetworkKind::Assignment { .. } => Algorithm::Hungarian,
        NetworkKind::MaxFlow { .. } => Algorithm::Sapa,
    };
    let face = face_for(&net, algorithm)?;
    let rule = match pivot {
        PivotFlag::Dantzig => PivotRule::Dantzig,
        PivotFlag::Steepest => PivotRule::SteepestAscent,
        PivotFlag::First => PivotRule::FirstImproving,
    };
    let mode = match mode {
        ModeFlag::Structured => CandidateMode::Structured {
            primary_path: PathSearch::Bfs,
        },
        ModeFlag::Exhaustive => CandidateMode::Exhaustive,
    };
    let trace = augment(
        &net,
        &face,
        &objective,
        rule,
        zero_pseudoflow_vertex(&net),
        step_limit,
        mode,
    )?;
    let objective_text = trace
        .steps
        .last()
        .map(|s| s.objective_after.to_string())
        .unwrap_or_else(|| "unchanged".to_string());
    write_trace(
        &net,
        &trace,
        &io,
        &[("objective".to_string(), objective_text)],
    )
}

fn cmd_verify(algorithm: AlgoFlag, io: InputArgs, mode: CompareFlag) -> Result<u8, Failure> {
    let net = load_network(&io.input, io.format)?;
    let mode = match mode {
        CompareFlag::PointSequence => ComparisonMode::PointSequence,
        CompareFlag::CircuitSequence => ComparisonMode::CircuitSequence,
    };
    let report = verify_replication(&net, algorithm.algorithm(), mode)?;
    let path = io
        .output
        .clone()
        .unwrap_or_else(|| derived_output(&io.input, "report.json"));
    write_output(
        &path,
        &json::to_output_string(&json::report_to_json(&report)),
    )?;
    println!("algorithm: {}", report.algorithm.name());
    println!("equal: {}", report.equal);
    println!("steps: {}", report.steps);
    println!(
        "walks: {} / {}",
        report.walk_class_combinatorial.name(),
        report.walk_class_engine.name()
    );
    println!("report: {}", path.display());
    Ok(if report.equal { 0 } else { 1 })
}

fn cmd_circuits(io: InputArgs) -> Result<(), Failure> {
    let net = load_network(&io.input, io.format)?;
    let circuits = enumerate_circuits(&net)?;
    let value = json::circuits_to_json(&circuits);
    let path = io
        .output
        .clone()
        .unwrap_or_else(|| derived_output(&io.input, "circuits.json"));
    write_output(&path, &json::to_output_string(&value))?;
    if let Some(counts) = value.get("counts").and_then(|c| c.as_object()) {
        for (kind, count) in counts {
            println!("{kind}: {count}");
        }
    }
    println!("total: {}", circuits.len());
    println!("circuits: {}", path.display());
    Ok(())
}

fn cmd_classify(
    trace: PathBuf,
    net: PathBuf,
    format: Option<FormatFlag>,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    let network = load_network(&net, format)?;
    let text = std::fs::read_to_string(&trace)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", trace.display()),
    })?;
    let walk = json::trace_from_json(&network, &value)?;
    let classification = classify_walk(&network, &walk)?;
    let path = output.unwrap_or_else(|| derived_output(&trace, "class.json"));
    write_output(
        &path,
        &json::to_output_string(&json::classification_to_json(&classification)),
    )?;
    println!("class: {}", classification.class.name());
    println!("report: {}", path.display());
    Ok(())
}

fn cmd_export(io: InputArgs, view: ViewFlag, trace: Option<PathBuf>) -> Result<(), Failure> {
    let net = load_network(&io.input, io.format)?;
    let view = match view {
        ViewFlag::Original => DotView::Original,
        ViewFlag::Pseudoflow => DotView::Pseudoflow,
        ViewFlag::Residual => DotView::Residual,
    };
    let point = match trace {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(&path)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure {
                code: 1,
                message: format!("{}: {e}", path.display()),
            })?;
            let walk = json::trace_from_json(&net, &value)?;
            Some(walk.terminal_point().clone())
        }
    };
    let dot = export_dot(&net, view, point.as_ref())?;
    let path = io
        .output
        .clone()
        .unwrap_or_else(|| derived_output(&io.input, "dot"));
    write_output(&path, &dot)?;
    println!("dot: {}", path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    seed: u64,
    nodes: usize,
    arcs: usize,
    max_capacity: i64,
    max_cost: i64,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    use circuitflow::instances;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let text =
        match kind {
            GenKind::MinCost => circuitflow::network::serialize_network(
                &instances::random_min_cost(&mut rng, nodes, arcs, max_capacity, max_cost),
            ),
            GenKind::MaxFlow => circuitflow::network::serialize_network(
                &instances::random_max_flow(&mut rng, nodes, arcs, max_capacity),
            ),
            GenKind::Assignment => {
                let matrix = instances::random_assignment(&mut rng, nodes.min(9), max_cost);
                let net = circuitflow::network::assignment_to_network(&matrix)?;
                circuitflow::network::serialize_network(&net)
            }
        };
    match output {
        Some(path) => {
            write_output(&path, &text)?;
            println!("instance: {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Run {
            algorithm,
            io,
            active,
            path,
            potentials,
        } => cmd_run(algorithm, io, active, path, potentials).map(|_| 0),
        Command::Augment {
            io,
            pivot,
            objective,
            mode,
            step_limit,
        } => cmd_augment(io, pivot, objective, mode, step_limit).map(|_| 0),
        Command::Verify {
            algorithm,
            io,
            mode,
        } => cmd_verify(algorithm, io, mode),
        Command::Circuits { io } => cmd_circuits(io).map(|_| 0),
        Command::Classify {
            trace,
            net,
            format,
            output,
        } => cmd_classify(trace, net, format, output).map(|_| 0),
        Command::Export { io, view, trace } => cmd_export(io, view, trace).map(|_| 0),
        Command::Gen {
            kind,
            seed,
            nodes,
            arcs,
            max_capacity,
            max_cost,
            output,
        } => cmd_gen(kind, seed, nodes, arcs, max_capacity, max_cost, output).map(|_| 0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
