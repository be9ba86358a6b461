//! Parameter sweeps over the MCC arrival probability, CSV and plot-script
//! output, and the plain-text instance file format.

mod csv;
pub mod instance_file;

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::sim::{ConfigError, RunMetrics, SimConfig, SimError, Simulation};
use crate::solvers::{Policy, SolveError};

pub use csv::{format_sig6, gnuplot_script, write_results_csv, CSV_HEADER};

/// A policy together with an optional fixed TTI length. Written as
/// `cast`, `cast@2`, `exact`, `exact@2`, `flat_dp` or `sdfs@2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arm {
    pub policy: Policy,
    pub fixed_tti: Option<u32>,
}

impl Arm {
    pub fn scalable(policy: Policy) -> Arm {
        Arm {
            policy,
            fixed_tti: None,
        }
    }

    pub fn fixed(policy: Policy, tti: u32) -> Arm {
        Arm {
            policy,
            fixed_tti: Some(tti),
        }
    }

    /// Simulation of this arm. The exact policy takes its node budget from
    /// the configuration.
    pub fn simulation<'a>(&self, config: &'a SimConfig) -> Simulation<'a> {
        let policy = match self.policy {
            Policy::Exact { .. } => Policy::Exact {
                node_budget: config.exact_node_budget,
            },
            p => p,
        };
        Simulation::new(config, policy).fixed_tti(self.fixed_tti)
    }

    pub fn simulate(&self, config: &SimConfig) -> Result<RunMetrics, SimError> {
        self.simulation(config).run()
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.policy)?;
        if let Some(t) = self.fixed_tti {
            write!(f, "@{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Arm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        if lower.starts_with("sdfs") {
            return Ok(Arm::scalable(lower.parse()?));
        }
        match lower.split_once('@') {
            Some((name, tti)) => {
                let tti = tti
                    .parse::<u32>()
                    .map_err(|_| format!("invalid fixed TTI `{tti}` in `{s}`"))?;
                Ok(Arm::fixed(name.parse()?, tti))
            }
            None => Ok(Arm::scalable(lower.parse()?)),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{arm} at r_mcc={r_mcc}: {source}")]
    Simulation {
        arm: String,
        r_mcc: f64,
        source: SimError,
    },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub base: SimConfig,
    pub r_mcc_grid: Vec<f64>,
    pub arms: Vec<Arm>,
    pub replications: usize,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Invalid(m.into()));
        if self.replications == 0 {
            return bad("replications must be >= 1");
        }
        if self.r_mcc_grid.is_empty() {
            return bad("r_mcc grid is empty");
        }
        if self
            .r_mcc_grid
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return bad("r_mcc grid must be strictly ascending");
        }
        if self.arms.is_empty() {
            return bad("no policies given");
        }
        for &r in &self.r_mcc_grid {
            SimConfig {
                r_mcc: r,
                ..self.base.clone()
            }
            .validate()?;
        }
        Ok(())
    }

    /// Configuration of one replication. Seeds depend on the base seed, the
    /// grid index and the replication only, so every arm sees the same
    /// traffic and fading.
    pub fn replication_config(&self, r_index: usize, rep: usize) -> SimConfig {
        SimConfig {
            r_mcc: self.r_mcc_grid[r_index],
            seed: replication_seed(self.base.seed, r_index as u64, rep as u64),
            ..self.base.clone()
        }
    }
}

pub fn replication_seed(base: u64, r_index: u64, rep: u64) -> u64 {
    splitmix64(splitmix64(base ^ splitmix64(r_index)).wrapping_add(rep))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RowFlags {
    /// Some replication had no resolved services of a class; its
    /// percentage was reported as 100.
    pub no_traffic: bool,
    /// The exact policy ran out of search budget; the cell holds no data.
    pub budget_exceeded: bool,
}

impl fmt::Display for RowFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut flags = Vec::new();
        if self.no_traffic {
            flags.push("no_traffic");
        }
        if self.budget_exceeded {
            flags.push("budget_exceeded");
        }
        f.write_str(&flags.join(";"))
    }
}

/// Aggregate of one (arm, r_mcc) cell: means over replications and their
/// standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub arm: Arm,
    pub r_mcc: f64,
    pub mean_mcc_arrivals: f64,
    pub pct_mcc_served: f64,
    pub pct_mbb_served: f64,
    /// Bits per millisecond.
    pub mbb_throughput: f64,
    pub reps: usize,
    pub se_mcc: f64,
    pub se_mbb: f64,
    pub se_thr: f64,
    pub flags: RowFlags,
}

/// Per-replication summary fed into [`ResultRow`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepSummary {
    pub pct_mcc: f64,
    pub pct_mbb: f64,
    pub throughput: f64,
    pub no_traffic: bool,
}

impl RepSummary {
    pub fn from_metrics(m: &RunMetrics, time_unit_ms: f64) -> RepSummary {
        let (mcc, mbb) = (m.mcc.pct_completed(), m.mbb.pct_completed());
        RepSummary {
            pct_mcc: mcc.unwrap_or(100.0),
            pct_mbb: mbb.unwrap_or(100.0),
            throughput: m.mbb_throughput(time_unit_ms),
            no_traffic: mcc.is_none() || mbb.is_none(),
        }
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

impl ResultRow {
    fn aggregate(arm: Arm, r_mcc: f64, sources: usize, reps: &[RepSummary]) -> ResultRow {
        let mean_mcc_arrivals = sources as f64 * r_mcc;
        if reps.is_empty() {
            return ResultRow {
                arm,
                r_mcc,
                mean_mcc_arrivals,
                pct_mcc_served: 0.0,
                pct_mbb_served: 0.0,
                mbb_throughput: 0.0,
                reps: 0,
                se_mcc: 0.0,
                se_mbb: 0.0,
                se_thr: 0.0,
                flags: RowFlags {
                    budget_exceeded: true,
                    ..RowFlags::default()
                },
            };
        }
        let col = |f: fn(&RepSummary) -> f64| mean_se(&reps.iter().map(f).collect::<Vec<_>>());
        let (pct_mcc_served, se_mcc) = col(|r| r.pct_mcc);
        let (pct_mbb_served, se_mbb) = col(|r| r.pct_mbb);
        let (mbb_throughput, se_thr) = col(|r| r.throughput);
        ResultRow {
            arm,
            r_mcc,
            mean_mcc_arrivals,
            pct_mcc_served,
            pct_mbb_served,
            mbb_throughput,
            reps: reps.len(),
            se_mcc,
            se_mbb,
            se_thr,
            flags: RowFlags {
                no_traffic: reps.iter().any(|r| r.no_traffic),
                budget_exceeded: false,
            },
        }
    }
}

fn is_budget_error(e: &SimError) -> bool {
    matches!(
        e,
        SimError::Solve {
            source: SolveError::BudgetExceeded { .. },
            ..
        }
    )
}

/// Run every (arm, r_mcc, replication) simulation and aggregate per cell.
/// Rows are ordered by arm, then by r_mcc. A cell whose exact solver runs
/// out of budget is kept as an empty, flagged row; any other failure
/// aborts the experiment.
pub fn run_cells(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, ExperimentError> {
    spec.validate()?;
    let n_r = spec.r_mcc_grid.len();
    let jobs: Vec<(usize, usize, usize)> = (0..spec.arms.len())
        .flat_map(|a| (0..n_r).flat_map(move |r| (0..spec.replications).map(move |k| (a, r, k))))
        .collect();
    let outcomes: Vec<Result<RunMetrics, SimError>> = jobs
        .par_iter()
        .map(|&(a, r, k)| spec.arms[a].simulate(&spec.replication_config(r, k)))
        .collect();

    let mut rows = Vec::with_capacity(spec.arms.len() * n_r);
    for (cell, chunk) in outcomes.chunks(spec.replications).enumerate() {
        let (arm, r_index) = (spec.arms[cell / n_r], cell % n_r);
        let r_mcc = spec.r_mcc_grid[r_index];
        let mut reps = Vec::with_capacity(chunk.len());
        let mut skipped = false;
        for outcome in chunk {
            match outcome {
                Ok(m) => reps.push(RepSummary::from_metrics(m, spec.base.time_unit_ms)),
                Err(e) if is_budget_error(e) => skipped = true,
                Err(e) => {
                    return Err(ExperimentError::Simulation {
                        arm: arm.to_string(),
                        r_mcc,
                        source: e.clone(),
                    })
                }
            }
        }
        if skipped {
            reps.clear();
        }
        rows.push(ResultRow::aggregate(
            arm,
            r_mcc,
            spec.base.num_mcc_sources,
            &reps,
        ));
    }
    Ok(rows)
}

/// Run the sweep and write `results.csv` and `plot.gp` into the output
/// directory.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, ExperimentError> {
    let rows = run_cells(spec)?;
    write_outputs(&spec.output_dir, &rows)?;
    Ok(rows)
}

pub fn write_outputs(dir: &Path, rows: &[ResultRow]) -> Result<(), ExperimentError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ExperimentError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let csv_path = dir.join("results.csv");
    let mut buf = Vec::new();
    write_results_csv(&mut buf, rows).map_err(io_err(&csv_path))?;
    fs::write(&csv_path, buf).map_err(io_err(&csv_path))?;
    let plot_path = dir.join("plot.gp");
    let arms: Vec<String> = unique_arms(rows);
    fs::write(&plot_path, gnuplot_script("results.csv", &arms)).map_err(io_err(&plot_path))?;
    Ok(())
}

fn unique_arms(rows: &[ResultRow]) -> Vec<String> {
    let mut arms: Vec<String> = Vec::new();
    for r in rows {
        let name = r.arm.to_string();
        if !arms.contains(&name) {
            arms.push(name);
        }
    }
    arms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arm_names_round_trip() {
        for s in [
            "cast", "cast@2", "exact", "exact@3", "flat_dp", "sdfs@2", "sdfs@4",
        ] {
            assert_eq!(s.parse::<Arm>().unwrap().to_string(), s);
        }
        assert_eq!("sdfs".parse::<Arm>().unwrap().to_string(), "sdfs@2");
        assert!("cast@x".parse::<Arm>().is_err());
    }

    #[test]
    fn seeds_are_shared_across_arms_and_distinct_across_cells() {
        let spec = ExperimentSpec {
            base: SimConfig::default(),
            r_mcc_grid: vec![0.1, 0.5],
            arms: vec![Arm::scalable(Policy::Cast)],
            replications: 3,
            output_dir: PathBuf::from("."),
        };
        let mut seeds: Vec<u64> = (0..2)
            .flat_map(|r| (0..3).map(move |k| (r, k)))
            .map(|(r, k)| spec.replication_config(r, k).seed)
            .collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 6);
    }

    #[test]
    fn spec_validation() {
        let mut spec = ExperimentSpec {
            base: SimConfig::default(),
            r_mcc_grid: vec![0.5, 0.1],
            arms: vec![Arm::scalable(Policy::Cast)],
            replications: 1,
            output_dir: PathBuf::from("."),
        };
        assert!(spec.validate().is_err());
        spec.r_mcc_grid = vec![0.1, 0.5];
        spec.replications = 0;
        assert!(spec.validate().is_err());
        spec.replications = 1;
        spec.validate().unwrap();
    }

    #[test]
    fn mean_and_standard_error() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_se(&[4.0]), (4.0, 0.0));
    }
}
