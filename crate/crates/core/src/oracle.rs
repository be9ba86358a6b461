//! Ground truth for small instances: exhaustive enumeration, and the
//! reduction from Partition that shows the allocation problem is NP-hard.
//!
//! Nothing here shares search code with the solvers; decisions are scored
//! only through [`objective_value`].

use thiserror::Error;

use crate::model::{
    objective_value, ChannelCsi, Instance, ModelError, ScheduleDecision, ServiceClass, ServiceState,
};
use crate::solvers::{solve_exact, tie_slack, SolveResult, SolveStats};

/// Enumeration refuses instances needing more evaluations than this for a
/// single TTI length.
pub const BRUTE_FORCE_LIMIT: f64 = 1e7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(
        "brute force would enumerate {evaluations:.3e} assignments (limit {BRUTE_FORCE_LIMIT:e})"
    )]
    TooLarge { evaluations: f64 },
    #[error("partition multiset sums to {sum}, which is odd; the reduction needs an even total")]
    OddSum { sum: u64 },
    #[error("partition multiset must be non-empty with items >= 1")]
    InvalidMultiset,
    #[error("multiset of {0} items is above the supported maximum of 20")]
    TooManyItems(usize),
    #[error("reduction disagrees with subset-sum for {items:?}: reduction {reduction}, subset-sum {subset_sum}")]
    Disagreement {
        items: Vec<u64>,
        reduction: bool,
        subset_sum: bool,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Every (TTI, assignment) pair, scored with `objective_value`.
///
/// Returns the first TTI (ascending) whose optimum beats all smaller TTIs
/// by more than the tie tolerance, and there the first assignment in
/// lexicographic order (channel 0 most significant; idle before service 0
/// before service 1...) that reaches the optimum within the tolerance.
pub fn brute_force_optimum(instance: &Instance) -> Result<SolveResult, OracleError> {
    let k = instance.num_channels();
    let n = instance.num_services();
    for &tti in instance.tti_menu() {
        let eligible = instance
            .services()
            .iter()
            .filter(|s| s.deadline >= tti)
            .count();
        let evaluations = (eligible as f64 + 1.0).powi(k as i32);
        if evaluations > BRUTE_FORCE_LIMIT {
            return Err(OracleError::TooLarge { evaluations });
        }
    }

    let mut enumerated = 0u64;
    let mut best: Option<(u32, f64)> = None;
    for &tti in instance.tti_menu() {
        let mut top = f64::NEG_INFINITY;
        for_each_assignment(instance, tti, |d| {
            enumerated += 1;
            top = top.max(objective_value(instance, d)?);
            Ok(true)
        })?;
        if best.is_none_or(|(_, v)| top > v + tie_slack(v)) {
            best = Some((tti, top));
        }
    }

    let (tti, value) = best.expect("TTI menu is never empty");
    let target = value - tie_slack(value);
    let mut chosen = ScheduleDecision::empty(tti, k, n);
    for_each_assignment(instance, tti, |d| {
        if objective_value(instance, d)? >= target {
            chosen = d.clone();
            return Ok(false);
        }
        Ok(true)
    })?;
    let value = objective_value(instance, &chosen)?;
    Ok(SolveResult {
        decision: chosen,
        value,
        stats: SolveStats {
            nodes: enumerated,
            operations: enumerated,
        },
    })
}

/// Visit admissible assignments at `tti` in lexicographic order until the
/// callback returns `false`.
fn for_each_assignment<F>(instance: &Instance, tti: u32, mut visit: F) -> Result<(), OracleError>
where
    F: FnMut(&ScheduleDecision) -> Result<bool, OracleError>,
{
    let k = instance.num_channels();
    let n = instance.num_services();
    let services = instance.services();
    let options: Vec<Vec<Option<usize>>> = (0..k)
        .map(|i| {
            std::iter::once(None)
                .chain(
                    (0..n)
                        .filter(|&s| {
                            services[s].deadline >= tti && instance.csi(i, s).valid_for >= tti
                        })
                        .map(Some),
                )
                .collect()
        })
        .collect();
    let mut digits = vec![0usize; k];
    loop {
        let owners: Vec<Option<usize>> = (0..k).map(|i| options[i][digits[i]]).collect();
        let d = ScheduleDecision::from_owners(tti, &owners, n);
        if !visit(&d)? {
            return Ok(());
        }
        // odometer, last channel fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < options[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// A Partition instance: a non-empty multiset of positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    items: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(items: Vec<u64>) -> Result<Self, OracleError> {
        if items.is_empty() || items.contains(&0) {
            return Err(OracleError::InvalidMultiset);
        }
        Ok(PartitionInstance { items })
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    pub fn sum(&self) -> u64 {
        self.items.iter().sum()
    }

    /// Direct check: does some sub-multiset sum to half the total?
    pub fn has_equal_split(&self) -> bool {
        let total = self.sum();
        if total % 2 == 1 {
            return false;
        }
        let half = (total / 2) as usize;
        let mut reachable = vec![false; half + 1];
        reachable[0] = true;
        for &p in &self.items {
            let p = p as usize;
            for v in (p..=half).rev() {
                reachable[v] |= reachable[v - p];
            }
        }
        reachable[half]
    }
}

/// Objective threshold for the decision version of the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionThreshold(f64);

impl DecisionThreshold {
    /// Both services of a reduced instance completely served.
    pub const PARTITION: DecisionThreshold = DecisionThreshold(4.0);

    pub fn new(f: f64) -> Option<Self> {
        (f > 0.0).then_some(DecisionThreshold(f))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Two services, one channel per item, both needing half the total within
/// a single time unit.
pub fn reduce_partition(p: &PartitionInstance) -> Result<Instance, OracleError> {
    let sum = p.sum();
    if sum % 2 == 1 {
        return Err(OracleError::OddSum { sum });
    }
    let half = sum as f64 / 2.0;
    let services = (0..2)
        .map(|id| ServiceState::new(id, ServiceClass::Mcc, half, 1))
        .collect();
    let csi = p
        .items()
        .iter()
        .map(|&item| vec![ChannelCsi::new(item as f64, 1); 2])
        .collect();
    Ok(Instance::new(services, csi, vec![1], 0.0)?)
}

/// Solve the reduced instance and compare with the direct subset-sum
/// answer. Enumeration is used up to its size limit, the exact solver
/// beyond it.
pub fn check_partition_equiv(p: &PartitionInstance) -> Result<bool, OracleError> {
    if p.items().len() > 20 {
        return Err(OracleError::TooManyItems(p.items().len()));
    }
    let instance = reduce_partition(p)?;
    let optimum = match brute_force_optimum(&instance) {
        Ok(r) => r.value,
        Err(OracleError::TooLarge { .. }) => solve_exact(&instance).value,
        Err(e) => return Err(e),
    };
    let reduction = optimum >= DecisionThreshold::PARTITION.value();
    let subset_sum = p.has_equal_split();
    if reduction != subset_sum {
        return Err(OracleError::Disagreement {
            items: p.items().to_vec(),
            reduction,
            subset_sum,
        });
    }
    Ok(reduction)
}
