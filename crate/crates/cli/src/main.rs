//! `qcausal`: run causal hypothesis testing experiments and export the data.

mod settings;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcausal_core::experiment::{self, ExperimentConfig, ResourceRow};
use qcausal_core::metrics::MAX_CHOI_CHANNEL_QUBITS;
use qcausal_core::state::MAX_STATE_QUBITS;
use qcausal_core::strategy::max_configurations;
use qcausal_core::{
    build_alternate_oracle, build_u_in, build_u_per, output, Circuit, LayoutDims, PermutationStrategy,
    RegisterLayout, StrategyKind,
};

use settings::{
    parse_angle, parse_range, parse_strategy, parse_usize, ConfigFile, Format, Sink,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Capacity(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Capacity(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Capacity(m) => write!(f, "capacity error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<qcausal_core::Error> for CliError {
    fn from(e: qcausal_core::Error) -> Self {
        match e {
            qcausal_core::Error::Capacity(_) => CliError::Capacity(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qcausal", version, about = "Quantum causal hypothesis testing experiments")]
struct Cli {
    /// Optional key=value file; explicit flags override it, it overrides the defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Theta sweep of error probabilities and process distances.
    Sweep(SweepArgs),
    /// Controlled-Bell resource counts over a (k, d, r) grid.
    Resources(ResourceArgs),
    /// Theta sweep of the process distances only.
    Distances(SweepArgs),
    /// Register sizes and capacity verdicts for a layout.
    Info(InfoArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ExperimentFlags {
    /// Number of cause (and effect) variables [default: 4]
    #[arg(long, value_parser = parse_usize)]
    pub k: Option<usize>,
    /// Qubits per variable [default: 1]
    #[arg(long, value_parser = parse_usize)]
    pub d: Option<usize>,
    /// Pairing configurations in superposition [default: 1]
    #[arg(long, value_parser = parse_usize)]
    pub r: Option<usize>,
    /// First angle in radians; multiples of pi such as `2pi` are accepted [default: 0]
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta_start: Option<f64>,
    /// Last angle in radians, included [default: 4pi]
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta_end: Option<f64>,
    /// Number of grid points, at least 2 [default: 81]
    #[arg(long, value_parser = parse_usize)]
    pub steps: Option<usize>,
    /// Comma list from trace, bures, hs; `none` disables distances [default: trace,bures,hs]
    #[arg(long, value_name = "LIST")]
    pub measures: Option<String>,
    /// Seed for the random pairing strategy [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pairing strategy: cyclic or random [default: cyclic]
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Option<StrategyKind>,
}

#[derive(Args, Debug, Clone)]
struct OutputFlags {
    /// Output file; `-` or absent writes to stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format: csv or json [default: csv]
    #[arg(long, value_parser = |s: &str| s.parse::<Format>())]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    experiment: ExperimentFlags,
    #[command(flatten)]
    output: OutputFlags,
    /// Also write U_in, U_per and the alternate oracle at theta-start as circuit text
    #[arg(long, value_name = "PATH")]
    dump_circuit: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ResourceArgs {
    /// Variable counts, `a..b` inclusive or a single value [default: 2..6]
    #[arg(long, value_parser = parse_range)]
    k: Option<RangeInclusive<usize>>,
    /// Qubits per variable, `a..b` inclusive or a single value [default: 1]
    #[arg(long, value_parser = parse_range)]
    d: Option<RangeInclusive<usize>>,
    /// Configuration counts, `a..b` inclusive or a single value [default: 1]
    #[arg(long, value_parser = parse_range)]
    r: Option<RangeInclusive<usize>>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args, Debug)]
struct InfoArgs {
    /// Number of cause (and effect) variables [default: 4]
    #[arg(long, value_parser = parse_usize)]
    k: Option<usize>,
    /// Qubits per variable [default: 1]
    #[arg(long, value_parser = parse_usize)]
    d: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcausal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = ConfigFile::load(cli.config.as_deref())?;
    match cli.command {
        Command::Sweep(args) => cmd_sweep(&file, &args),
        Command::Distances(args) => cmd_distances(&file, &args),
        Command::Resources(args) => cmd_resources(&file, &args),
        Command::Info(args) => cmd_info(&file, &args),
    }
}

fn cmd_sweep(file: &ConfigFile, args: &SweepArgs) -> Result<(), CliError> {
    let config = settings::experiment_config(file, &args.experiment)?;
    let sink = Sink::resolve(file, args.output.out.clone(), args.output.format)?;
    let dump = file.pick_opt(args.dump_circuit.clone(), "dump_circuit", settings::parse_path)?;
    let reports = experiment::sweep_theta(&config)?;
    for report in &reports {
        let over = report.practical_out_of_range();
        if !over.is_empty() {
            log::warn!("theta={}: practical error above 1 for {:?}", report.theta, over);
        }
    }
    let mut buf = Vec::new();
    match sink.format {
        Format::Csv => output::write_sweep_csv(&mut buf, &reports),
        Format::Json => output::write_sweep_json(&mut buf, &reports),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(path) = dump {
        dump_circuit(&config, &path)?;
    }
    emit(&sink, &buf)
}

fn cmd_distances(file: &ConfigFile, args: &SweepArgs) -> Result<(), CliError> {
    let config = settings::experiment_config(file, &args.experiment)?;
    if config.measures.is_empty() {
        return Err(CliError::Usage("distances needs at least one measure".into()));
    }
    let sink = Sink::resolve(file, args.output.out.clone(), args.output.format)?;
    let dump = file.pick_opt(args.dump_circuit.clone(), "dump_circuit", settings::parse_path)?;
    let rows = experiment::sweep_distances(&config)?;
    let mut buf = Vec::new();
    match sink.format {
        Format::Csv => output::write_distances_csv(&mut buf, &rows),
        Format::Json => output::write_distances_json(&mut buf, &rows),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(path) = dump {
        dump_circuit(&config, &path)?;
    }
    emit(&sink, &buf)
}

fn cmd_resources(file: &ConfigFile, args: &ResourceArgs) -> Result<(), CliError> {
    let k = file.pick(args.k.clone(), "k", parse_range, 2..=6)?;
    let d = file.pick(args.d.clone(), "d", parse_range, 1..=1)?;
    let r = file.pick(args.r.clone(), "r", parse_range, 1..=1)?;
    let sink = Sink::resolve(file, args.output.out.clone(), args.output.format)?;
    let rows = experiment::sweep_resources(k, d, r);
    if rows.iter().all(|row| matches!(row, ResourceRow::Skipped { .. })) {
        let reason = match rows.first() {
            Some(ResourceRow::Skipped { reason, .. }) => reason.clone(),
            _ => "empty grid".into(),
        };
        return Err(CliError::Capacity(format!("no grid point is feasible ({reason})")));
    }
    let mut buf = Vec::new();
    match sink.format {
        Format::Csv => output::write_resources_csv(&mut buf, &rows),
        Format::Json => output::write_resources_json(&mut buf, &rows),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    emit(&sink, &buf)
}

fn cmd_info(file: &ConfigFile, args: &InfoArgs) -> Result<(), CliError> {
    let def = ExperimentConfig::default();
    let k = file.pick(args.k, "k", parse_usize, def.k)?;
    let d = file.pick(args.d, "d", parse_usize, def.d)?;
    let dims = LayoutDims::new(k, d)?;
    let mut text = String::new();
    text.push_str(&format!("k = {}\nd = {}\n", dims.k, dims.d));
    text.push_str(&format!("N_A = {}\nN_B = {}\nN_ref = {}\n", dims.n_a, dims.n_b, dims.n_ref));
    text.push_str(&format!("total_qubits = {}\n", dims.total_qubits));

    let sim_ok = dims.total_qubits <= MAX_STATE_QUBITS;
    text.push_str(&format!(
        "statevector: {} ({} of {MAX_STATE_QUBITS} qubits)\n",
        verdict(sim_ok),
        dims.total_qubits
    ));
    let channel = 2 * dims.n_a;
    let choi_ok = channel <= MAX_CHOI_CHANNEL_QUBITS;
    text.push_str(&format!(
        "process distances: {} ({channel} of {MAX_CHOI_CHANNEL_QUBITS} channel qubits)\n",
        verdict(choi_ok)
    ));
    if sim_ok {
        let layout = RegisterLayout::new(k, d)?;
        text.push_str(&format!("max_configurations = {}\n", max_configurations(&layout)));
    } else {
        log::warn!(
            "layout k={k}, d={d} needs {} qubits, beyond the {MAX_STATE_QUBITS}-qubit simulator",
            dims.total_qubits
        );
    }
    if sim_ok && !choi_ok {
        log::warn!("process distances unavailable for k={k}, d={d}; use --measures none");
    }
    emit(&Sink { path: None, format: Format::Csv }, text.as_bytes())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "over capacity"
    }
}

fn dump_circuit(config: &ExperimentConfig, path: &Path) -> Result<(), CliError> {
    let layout = config.validate()?;
    let strategy = PermutationStrategy::build(config.strategy, &layout, config.r, config.seed)?;
    let u_in: Circuit = build_u_in(&layout, config.r)?;
    let (u_per, count): (Circuit, _) = build_u_per(&layout, &strategy)?;
    let oracle: Circuit = build_alternate_oracle(&layout, config.theta_start)?;
    let mut text = format!(
        "# k={} d={} r={} qubits={} controlled_bell_count={}\n# U_in\n",
        layout.k(),
        layout.d(),
        config.r,
        layout.total_qubits(),
        count.controlled_bell_count
    );
    text.push_str(&u_in.to_text());
    text.push_str("# U_per\n");
    text.push_str(&u_per.to_text());
    text.push_str(&format!("# U_orc theta={}\n", config.theta_start));
    text.push_str(&oracle.to_text());
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(sink: &Sink, bytes: &[u8]) -> Result<(), CliError> {
    match &sink.path {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
