use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use ttisched::experiment::instance_file::{format_instance, parse_instance};
use ttisched::experiment::{run_experiment, Arm, ExperimentSpec, RepSummary};
use ttisched::oracle::{
    brute_force_optimum, check_partition_equiv, reduce_partition, PartitionInstance,
};
use ttisched::sim::{write_event_log, EventRecorder, SimConfig};
use ttisched::solvers::{solve_exact, Policy, SolveError};

/// Scalable-TTI channel allocation: solvers, simulation and sweeps.
#[derive(Parser)]
#[command(name = "ttisched", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and print its metrics.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Arrival probability per MCC source and time unit.
        #[arg(long)]
        r_mcc: Option<f64>,
        /// Policy, e.g. cast, cast@2, exact, sdfs@2.
        #[arg(long, default_value = "cast")]
        policy: Arm,
        /// Write the event log to this file (`-` for stdout).
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Sweep r_mcc over several policies and write results.csv and plot.gp.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated ascending r_mcc grid.
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])]
        r_mcc: Vec<f64>,
        /// Comma-separated policies.
        #[arg(long, value_delimiter = ',', default_values_t = ["cast".parse::<Arm>().unwrap(), "cast@2".parse().unwrap(), "sdfs@2".parse().unwrap()])]
        policy: Vec<Arm>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        /// Output directory.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Solve a single instance file.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "exact")]
        policy: Arm,
    },
    /// Print the scheduling instance built from a Partition multiset.
    ReducePartition {
        #[arg(required = true)]
        items: Vec<u64>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the reduction against subset-sum, or the exact solver
    /// against enumeration on an instance file.
    OracleCheck {
        #[arg(required_unless_present = "instance")]
        items: Vec<u64>,
        #[arg(long, conflicts_with = "items")]
        instance: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, env = "TTISCHED_SEED")]
    seed: Option<u64>,
    /// Simulated time units per run.
    #[arg(long)]
    horizon: Option<u64>,
    /// Fixed TTI length for every policy.
    #[arg(long)]
    fixed_tti: Option<u32>,
}

impl CommonArgs {
    fn load(&self) -> anyhow::Result<SimConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                SimConfig::from_kv_str(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => SimConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(h) = self.horizon {
            cfg.horizon_units = h;
        }
        Ok(cfg)
    }

    fn apply_fixed(&self, arm: Arm) -> anyhow::Result<Arm> {
        match (self.fixed_tti, arm.policy) {
            (None, _) => Ok(arm),
            (Some(_), Policy::Sdfs { .. }) => bail!("sdfs takes its TTI as sdfs@<tti>"),
            (Some(t), p) => Ok(Arm::fixed(p, t)),
        }
    }
}

/// Error with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 1,
            error: e.into(),
        }
    }
}

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate {
            common,
            r_mcc,
            policy,
            events,
        } => simulate(&common, r_mcc, policy, events.as_deref()),
        Command::Sweep {
            common,
            r_mcc,
            policy,
            reps,
            out,
        } => {
            let arms = policy
                .into_iter()
                .map(|a| common.apply_fixed(a))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let spec = ExperimentSpec {
                base: common.load()?,
                r_mcc_grid: r_mcc,
                arms,
                replications: reps,
                output_dir: out,
            };
            let rows = run_experiment(&spec)?;
            let skipped = rows.iter().filter(|r| r.flags.budget_exceeded).count();
            println!(
                "wrote {} rows to {}",
                rows.len(),
                spec.output_dir.join("results.csv").display()
            );
            if skipped > 0 {
                println!("{skipped} cells skipped: exact search budget exceeded");
            }
            Ok(())
        }
        Command::Solve { file, policy } => solve(&file, policy),
        Command::ReducePartition { items, out } => {
            let instance = reduce_partition(&PartitionInstance::new(items)?)?;
            let text = format_instance(&instance);
            match out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::OracleCheck { items, instance } => match instance {
            Some(path) => oracle_check_instance(&path),
            None => {
                let p = PartitionInstance::new(items)?;
                let answer = check_partition_equiv(&p)?;
                let optimum = solve_exact(&reduce_partition(&p)?).value;
                println!("equal split: {}", if answer { "yes" } else { "no" });
                println!("reduced optimum: {optimum}");
                println!("agreement: ok");
                Ok(())
            }
        },
    }
}

fn simulate(
    common: &CommonArgs,
    r_mcc: Option<f64>,
    arm: Arm,
    events: Option<&Path>,
) -> Result<(), Failure> {
    let mut cfg = common.load()?;
    if let Some(r) = r_mcc {
        cfg.r_mcc = r;
    }
    let arm = common.apply_fixed(arm)?;
    let mut recorder = EventRecorder::default();
    let metrics = arm.simulation(&cfg).run_observed(&mut recorder)?;
    let summary = RepSummary::from_metrics(&metrics, cfg.time_unit_ms);
    println!("policy={arm} r_mcc={} seed={}", cfg.r_mcc, cfg.seed);
    println!("{metrics}");
    println!("pct_mcc_served={}", summary.pct_mcc);
    println!("pct_mbb_served={}", summary.pct_mbb);
    println!("mbb_throughput_bits_per_ms={}", summary.throughput);
    if let Some(path) = events {
        if path == Path::new("-") {
            write_event_log(io::stdout().lock(), &recorder.events)?;
        } else {
            let mut buf = Vec::new();
            write_event_log(&mut buf, &recorder.events)?;
            fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn read_instance(path: &Path) -> Result<ttisched::Instance, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).map_err(|e| Failure {
        code: EXIT_PARSE,
        error: anyhow::Error::new(e).context(path.display().to_string()),
    })
}

fn solve(path: &Path, arm: Arm) -> Result<(), Failure> {
    let mut instance = read_instance(path)?;
    if let Some(t) = arm.fixed_tti {
        instance = instance.with_fixed_tti(t).map_err(|e| Failure {
            code: EXIT_PRECONDITION,
            error: e.into(),
        })?;
    }
    let result = arm.policy.solve(&instance).map_err(|e| Failure {
        code: match e {
            SolveError::NotFlat | SolveError::TtiNotInMenu(_) => EXIT_PRECONDITION,
            _ => 1,
        },
        error: e.into(),
    })?;
    let mut out = io::stdout().lock();
    writeln!(out, "policy: {arm}")?;
    writeln!(out, "tti: {}", result.decision.tti_length)?;
    writeln!(out, "value: {}", result.value)?;
    writeln!(out, "nodes: {}", result.stats.nodes)?;
    writeln!(out, "operations: {}", result.stats.operations)?;
    let ids: Vec<String> = instance
        .services()
        .iter()
        .map(|s| s.id.to_string())
        .collect();
    writeln!(
        out,
        "assignment (rows: channels, columns: services {}):",
        ids.join(" ")
    )?;
    for row in &result.decision.assignment {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        writeln!(out, "  {}", cells.join(" "))?;
    }
    Ok(())
}

fn oracle_check_instance(path: &Path) -> Result<(), Failure> {
    let instance = read_instance(path)?;
    let brute = brute_force_optimum(&instance)?;
    let exact = solve_exact(&instance);
    println!("enumeration: {}", brute.value);
    println!("exact: {}", exact.value);
    if brute.value != exact.value {
        return Err(anyhow::anyhow!("exact solver disagrees with enumeration").into());
    }
    println!("agreement: ok");
    Ok(())
}
