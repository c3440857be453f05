use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Space-time networks: evaluate, simulate, synthesize, verify and run.
#[derive(Parser)]
#[command(name = "spacetime", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression. Bindings are `name=value`; `k=N` sets k (default 16).
    Eval {
        expr: String,
        bindings: Vec<String>,
        #[arg(short, long)]
        k: Option<u32>,
    },
    /// Evaluate a netlist on one volley per `--volley`, or on the positional bindings.
    Simulate {
        netlist: PathBuf,
        bindings: Vec<String>,
        /// A volley such as "A=1 B=inf"; repeat for several cycles.
        #[arg(long)]
        volley: Vec<String>,
        /// Run the pulse-mode machines instead of the ideal operators.
        #[arg(long)]
        fsm: bool,
    },
    /// Compile a function table into equations or a netlist.
    Synthesize {
        table: PathBuf,
        #[arg(long)]
        minimize: bool,
        #[arg(long)]
        equality_combine: bool,
        #[arg(long, value_enum, default_value_t = Emit::Equations)]
        emit: Emit,
        #[arg(long)]
        cost: bool,
    },
    /// Check a netlist against the space-time axioms, or a pulse-mode
    /// machine against its ideal operator.
    Verify(VerifyArgs),
    /// Drive one pulse-mode machine with a spike trace.
    FsmCheck {
        trace: PathBuf,
        /// delay, min or max
        #[arg(long)]
        op: String,
        #[arg(short, long, default_value_t = 4)]
        k: u32,
        /// Cycles to run; defaults to the trace length.
        #[arg(long)]
        cycles: Option<u32>,
        #[arg(long)]
        no_reset: bool,
    },
    /// Run a system configuration cycle by cycle.
    Run {
        config: PathBuf,
        #[arg(long)]
        fsm: bool,
        /// Jitter the gates with this seed (the config's epsilon is used).
        #[arg(long, value_name = "SEED")]
        jitter: Option<u64>,
        /// Jitter bound when the config has no [jitter] section.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Write the cycle trace here instead of stdout.
        #[arg(long, value_name = "OUT")]
        trace: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    netlist: Option<PathBuf>,
    /// Operator whose machine is checked: delay, min, max or any other gate name.
    #[arg(long, conflicts_with = "netlist", required_unless_present = "netlist")]
    fsm: Option<String>,
    #[arg(short, long, default_value_t = 4)]
    k: u32,
    /// Exhaustive sequence length for --fsm.
    #[arg(long, default_value_t = 1)]
    cycles: u32,
    /// Check this many random sequences instead of all of them.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    no_reset: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Netlist,
    Equations,
}

/// How a command finished when it did not fail outright.
pub enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { expr, bindings, k } => commands::eval(&expr, &bindings, k),
        Command::Simulate {
            netlist,
            bindings,
            volley,
            fsm,
        } => commands::simulate(&netlist, &bindings, &volley, fsm),
        Command::Synthesize {
            table,
            minimize,
            equality_combine,
            emit,
            cost,
        } => commands::synthesize(
            &table,
            minimize,
            equality_combine,
            matches!(emit, Emit::Netlist),
            cost,
        ),
        Command::Verify(v) => match (v.netlist, v.fsm) {
            (Some(path), _) => commands::verify_netlist(&path),
            (None, Some(op)) => {
                commands::verify_fsm(&op, v.k, v.cycles, v.random, v.seed, !v.no_reset)
            }
            (None, None) => unreachable!("clap requires one of them"),
        },
        Command::FsmCheck {
            trace,
            op,
            k,
            cycles,
            no_reset,
        } => commands::fsm_check(&trace, &op, k, cycles, !no_reset),
        Command::Run {
            config,
            fsm,
            jitter,
            epsilon,
            trace,
        } => commands::run(&config, fsm, jitter, epsilon, trace.as_deref()),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
