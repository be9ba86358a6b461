//! Per-TTI scheduling policies. Each one takes an [`Instance`] and returns a
//! [`SolveResult`] whose value is the objective of the returned decision,
//! recomputed through [`objective_value`].

mod cast;
mod exact;
mod flat_dp;
mod sdfs;
mod view;

pub use cast::solve_cast;
pub use exact::{solve_exact, solve_exact_with_budget};
pub use flat_dp::solve_flat_dp;
pub use sdfs::solve_sdfs;
pub use view::{IlpSolution, IlpView};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{objective_value, utility, Instance, ModelError, ScheduleDecision};

/// Two objective values closer than this (scaled by `max(1, |v|)`) are
/// treated as a tie; ties go to the smaller TTI and then to the
/// lexicographically smallest assignment.
pub const VALUE_TIE_TOLERANCE: f64 = 1e-10;

pub(crate) fn tie_slack(v: f64) -> f64 {
    VALUE_TIE_TOLERANCE * v.abs().max(1.0)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("instance is not flat: every channel-service pair must share the same CSI")]
    NotFlat,
    #[error("TTI length {0} is not in the instance's TTI menu")]
    TtiNotInMenu(u32),
    #[error(
        "exact search exceeded its budget of {budget} nodes; use fewer channels or cap the number of active services"
    )]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Search nodes visited (exact solver) or decisions enumerated (oracle).
    pub nodes: u64,
    /// Elementary evaluations: (channel, service) scores for the greedy,
    /// table cell updates for the DP.
    pub operations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub decision: ScheduleDecision,
    pub value: f64,
    pub stats: SolveStats,
}

impl SolveResult {
    /// Wrap a decision, recomputing its objective from scratch.
    pub(crate) fn evaluate(
        instance: &Instance,
        decision: ScheduleDecision,
        stats: SolveStats,
    ) -> Result<SolveResult, SolveError> {
        let value = objective_value(instance, &decision)?;
        debug_assert!({
            let u = utility(instance, &decision)?;
            (-1e-12..=instance.num_services() as f64 + 1e-9).contains(&u)
        });
        debug_assert!(
            value <= instance.num_services() as f64 * (1.0 + instance.completion_bonus()) + 1e-9
        );
        Ok(SolveResult {
            decision,
            value,
            stats,
        })
    }
}

/// Scheduling policy selector used by the simulator and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Exact optimum with a search-node budget per call.
    Exact {
        node_budget: u64,
    },
    Cast,
    FlatDp,
    /// Shortest-deadline-first baseline at a fixed TTI length.
    Sdfs {
        tti: u32,
    },
}

impl Policy {
    pub const DEFAULT_EXACT_BUDGET: u64 = 2_000_000;

    pub fn solve(&self, instance: &Instance) -> Result<SolveResult, SolveError> {
        match *self {
            Policy::Exact { node_budget } => solve_exact_with_budget(instance, node_budget),
            Policy::Cast => Ok(solve_cast(instance)),
            Policy::FlatDp => solve_flat_dp(instance),
            Policy::Sdfs { tti } => solve_sdfs(instance, tti),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Exact { .. } => f.write_str("exact"),
            Policy::Cast => f.write_str("cast"),
            Policy::FlatDp => f.write_str("flat_dp"),
            Policy::Sdfs { tti } => write!(f, "sdfs@{tti}"),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    /// Accepts `exact`, `cast`, `flat_dp` and `sdfs` or `sdfs@<tti>`
    /// (default TTI 2).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once('@') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let tti = arg
            .map(|a| {
                a.parse::<u32>()
                    .map_err(|_| format!("invalid TTI `{a}` in policy `{s}`"))
            })
            .transpose()?;
        match (name, tti) {
            ("exact" | "os", None) => Ok(Policy::Exact {
                node_budget: Policy::DEFAULT_EXACT_BUDGET,
            }),
            ("cast", None) => Ok(Policy::Cast),
            ("flat_dp" | "flat-dp" | "dp", None) => Ok(Policy::FlatDp),
            ("sdfs", t) => Ok(Policy::Sdfs {
                tti: t.unwrap_or(2),
            }),
            _ => Err(format!(
                "unknown policy `{s}` (expected exact, cast, flat_dp or sdfs[@tti])"
            )),
        }
    }
}
