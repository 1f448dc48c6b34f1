//! The `majdiff` command-line front end.
//!
//! Exit codes: 0 success, 2 validation failure, 3 refusal (search cap or
//! update budget), 4 I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::circuit::{compile, layerize, Circuit};
use crate::dot::to_dot;
use crate::dynamics::{
    format_trace, guarantee_search, run, trace_report, ConvergenceOutcome, Labelling, RunOptions,
    SearchOptions, DEFAULT_EXHAUSTIVE_CAP,
};
use crate::error::{Error, Result};
use crate::netcore::{analyze, predict_convergence, SocialNetwork};
use crate::reduction::{assemble_main_network, run_reduction_demo, DemoVerdict, ToyTM};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "majdiff", version, about = "Synchronous majority opinion diffusion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a network file.
    Validate { network: PathBuf },
    /// Run the dynamics from a labelling until it converges or cycles.
    Simulate {
        network: PathBuf,
        /// Opinion string such as `110`, or `@FILE` to read one.
        labelling: String,
        /// Stop after this many updates.
        #[arg(long)]
        steps: Option<u64>,
        /// Write every visited labelling and the final report here.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Add wall time to the report.
        #[arg(long)]
        timing: bool,
    },
    /// Search all labellings for one that never converges.
    Guarantee {
        network: PathBuf,
        /// Refuse networks with more agents.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
        max_n: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Report the smallest witness rather than the first found.
        #[arg(long)]
        deterministic: bool,
    },
    /// Structural report and convergence prediction.
    Analyze { network: PathBuf },
    /// Compile a Boolean circuit into a network.
    Compile {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the source/sink pair map here.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Build the main network of a toy Turing machine.
    Reduce {
        machine: PathBuf,
        /// Start configuration `STATE@HEAD:TAPE`; defaults to the initial one.
        #[arg(long)]
        start: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the start labelling here.
        #[arg(long)]
        labelling: Option<PathBuf>,
        /// Run the dynamics and report the verdict.
        #[arg(long)]
        demo: bool,
        /// Half the alarm size.
        #[arg(short, default_value_t = 2)]
        k: usize,
        /// Update budget for the demo.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Graphviz rendering of a network.
    ExportDot {
        network: PathBuf,
        #[arg(long)]
        labelling: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            Error::ExhaustiveCap { .. } | Error::MemoryCap { .. } => EXIT_REFUSED,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn load_network(path: &Path) -> Result<SocialNetwork> {
    SocialNetwork::from_json_str(&read(path)?)
}

fn parse_labelling(arg: &str) -> Result<Labelling> {
    match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path))?.trim().parse(),
        None => arg.parse(),
    }
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{value}")?;
    Ok(())
}

/// Outcome of one simulation with its cost.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub outcome: ConvergenceOutcome,
    /// Distinct labellings computed, including the initial one.
    pub states_explored: u64,
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    /// The trace report line plus the cost fields.
    pub fn to_json(&self) -> Value {
        let mut v = trace_report(&self.outcome);
        let obj = v.as_object_mut().expect("report is an object");
        obj.insert("states_explored".into(), json!(self.states_explored));
        if let Some(ms) = self.wall_time_ms {
            obj.insert("wall_time_ms".into(), json!(ms));
        }
        v
    }
}

fn cmd_validate(network: &Path, out: &mut dyn Write) -> CmdResult {
    let net = load_network(network)?;
    writeln!(out, "OK: {} agents, {} edges", net.node_count(), net.edge_count()).map_err(Error::from)?;
    Ok(EXIT_OK)
}

fn cmd_simulate(
    network: &Path,
    labelling: &str,
    steps: Option<u64>,
    trace_out: Option<&Path>,
    timing: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let net = load_network(network)?;
    let f = parse_labelling(labelling)?;
    let options = RunOptions {
        max_steps: steps,
        ..RunOptions::default()
    };
    let start = Instant::now();
    let result = run(&net, &f, &options)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = trace_out {
        write(path, &format_trace(&result.trajectory, &result.outcome))?;
    }
    let report = RunReport {
        outcome: result.outcome,
        states_explored: result.updates + 1,
        wall_time_ms: timing.then_some(elapsed),
    };
    emit_json(out, &report.to_json())?;
    Ok(match report.outcome {
        ConvergenceOutcome::Undetermined { .. } => EXIT_REFUSED,
        _ => EXIT_OK,
    })
}

fn cmd_guarantee(
    network: &Path,
    max_n: usize,
    jobs: Option<usize>,
    deterministic: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let net = load_network(network)?;
    let options = SearchOptions {
        exhaustive_cap: max_n,
        jobs,
        deterministic,
    };
    let value = match guarantee_search(&net, &options)? {
        Some(w) => json!({"all_converge": false, "witness": w.to_string()}),
        None => json!({"all_converge": true, "witness": null}),
    };
    emit_json(out, &value)?;
    Ok(EXIT_OK)
}

fn cmd_analyze(network: &Path, out: &mut dyn Write) -> CmdResult {
    let net = load_network(network)?;
    let report = analyze(&net);
    let prediction = predict_convergence(&report);
    let value = json!({"structure": report, "prediction": prediction});
    emit_json(out, &value)?;
    Ok(EXIT_OK)
}

fn cmd_compile(
    circuit: &Path,
    output: Option<&Path>,
    map: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let circuit = Circuit::from_json_str(&read(circuit)?)?;
    let cc = compile(&layerize(&circuit)?)?;
    let text = cc.network.to_json_string();
    if let Some(path) = map {
        write(path, &serde_json::to_string(&cc.map()).map_err(Error::from)?)?;
    }
    match output {
        Some(path) => {
            write(path, &text)?;
            let summary = json!({
                "n": cc.network.node_count(),
                "edges": cc.network.edge_count(),
                "h": cc.h,
            });
            emit_json(out, &summary)?;
        }
        None => writeln!(out, "{text}").map_err(Error::from)?,
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_reduce(
    machine: &Path,
    start: Option<&str>,
    output: Option<&Path>,
    labelling: Option<&Path>,
    demo: bool,
    k: usize,
    budget: Option<u64>,
    out: &mut dyn Write,
) -> CmdResult {
    let tm = ToyTM::from_json_str(&read(machine)?)?;
    let config = match start {
        Some(s) => tm.parse_config(s)?,
        None => tm.initial_config(),
    };
    let mn = assemble_main_network(&tm, k)?;
    if let Some(path) = output {
        write(path, &mn.network.to_json_string())?;
    }
    if let Some(path) = labelling {
        write(path, &format!("{}\n", mn.initial_labelling(&config)?))?;
    }
    let mut value = json!({
        "manifest": mn.manifest(),
        "n": mn.network.node_count(),
        "edges": mn.network.edge_count(),
        "max_in_degree": mn.network.max_in_degree(),
        "start": tm.format_config(&config),
    });
    let mut code = EXIT_OK;
    if demo {
        let verdict = run_reduction_demo(&mn, &config, budget)?;
        if matches!(verdict, DemoVerdict::Undetermined { .. }) {
            code = EXIT_REFUSED;
        }
        let mut v = serde_json::to_value(&verdict).map_err(Error::from)?;
        if let DemoVerdict::Convergent { limit, .. } = &verdict {
            // The full limit is long; its constant value is what matters.
            v["limit"] = json!(limit.is_constant().then(|| limit.get(0) as u8));
        }
        value["demo"] = v;
    }
    emit_json(out, &value)?;
    Ok(code)
}

fn cmd_export_dot(
    network: &Path,
    labelling: Option<&str>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let net = load_network(network)?;
    let f = labelling.map(parse_labelling).transpose()?;
    let dot = to_dot(&net, f.as_ref())?;
    match output {
        Some(path) => write(path, &dot)?,
        None => out.write_all(dot.as_bytes()).map_err(Error::from)?,
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Validate { network } => cmd_validate(&network, out),
        Command::Simulate {
            network,
            labelling,
            steps,
            trace_out,
            timing,
        } => cmd_simulate(&network, &labelling, steps, trace_out.as_deref(), timing, out),
        Command::Guarantee {
            network,
            max_n,
            jobs,
            deterministic,
        } => cmd_guarantee(&network, max_n, jobs, deterministic, out),
        Command::Analyze { network } => cmd_analyze(&network, out),
        Command::Compile {
            circuit,
            output,
            map,
        } => cmd_compile(&circuit, output.as_deref(), map.as_deref(), out),
        Command::Reduce {
            machine,
            start,
            output,
            labelling,
            demo,
            k,
            budget,
        } => cmd_reduce(
            &machine,
            start.as_deref(),
            output.as_deref(),
            labelling.as_deref(),
            demo,
            k,
            budget,
            out,
        ),
        Command::ExportDot {
            network,
            labelling,
            output,
        } => cmd_export_dot(&network, labelling.as_deref(), output.as_deref(), out),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns its exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
