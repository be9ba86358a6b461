//! Domain types and state-transition semantics for one scheduling snapshot.
//!
//! Time is counted in integer time units. Demands and rates are real-valued
//! bits (per time unit for rates). A [`Instance`] is the state at the start
//! of one TTI; a [`ScheduleDecision`] picks the TTI length and the
//! channel-to-service assignment; [`advance_state`] applies it.

use std::fmt;

use thiserror::Error;

/// Residual backlogs at or below this many bits are snapped to zero.
pub const DEFAULT_BACKLOG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("decision violates {} constraint(s): {}", .0.len(), join_violations(.0))]
    ConstraintViolation(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ServiceClass {
    /// Mission-critical: small packets, short deadline.
    Mcc,
    /// Mobile broadband: large packets, lenient deadline.
    Mbb,
}

impl ServiceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ServiceClass::Mcc => "MCC",
            ServiceClass::Mbb => "MBB",
        }
    }
}

impl fmt::Display for ServiceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ServiceClass {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "MCC" => Ok(ServiceClass::Mcc),
            "MBB" => Ok(ServiceClass::Mbb),
            other => Err(ModelError::InvalidInput(format!(
                "unknown service class `{other}` (expected MCC or MBB)"
            ))),
        }
    }
}

/// One active service at the start of a TTI.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceState {
    pub id: u64,
    /// Bits still to deliver.
    pub demand: f64,
    /// Time units left before the service is dropped.
    pub deadline: u32,
    pub class: ServiceClass,
    pub arrival_time: u64,
}

impl ServiceState {
    pub fn new(id: u64, class: ServiceClass, demand: f64, deadline: u32) -> Self {
        ServiceState {
            id,
            demand,
            deadline,
            class,
            arrival_time: 0,
        }
    }

    pub fn arrived_at(mut self, t: u64) -> Self {
        self.arrival_time = t;
        self
    }

    /// Urgency weight, the reciprocal of the remaining deadline.
    pub fn weight(&self) -> f64 {
        if self.deadline == 0 {
            0.0
        } else {
            1.0 / f64::from(self.deadline)
        }
    }
}

/// Channel state for one (channel, service) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCsi {
    /// Error-free bits per time unit.
    pub rate: f64,
    /// Time units for which `rate` can be sustained.
    pub valid_for: u32,
}

impl ChannelCsi {
    pub fn new(rate: f64, valid_for: u32) -> Self {
        ChannelCsi { rate, valid_for }
    }
}

/// A scheduling snapshot: the active services, their CSI on every channel,
/// and the admissible TTI lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    services: Vec<ServiceState>,
    /// Indexed `[channel][service]`.
    csi: Vec<Vec<ChannelCsi>>,
    /// Sorted, deduplicated TTI lengths in time units.
    tti_menu: Vec<u32>,
    overhead: f64,
}

impl Instance {
    pub fn new(
        services: Vec<ServiceState>,
        csi: Vec<Vec<ChannelCsi>>,
        mut tti_menu: Vec<u32>,
        overhead: f64,
    ) -> Result<Self, ModelError> {
        tti_menu.sort_unstable();
        tti_menu.dedup();
        let Some(&min_tti) = tti_menu.first() else {
            return Err(ModelError::InvalidInput("TTI menu is empty".into()));
        };
        if min_tti == 0 {
            return Err(ModelError::InvalidInput("TTI lengths must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&overhead) {
            return Err(ModelError::InvalidInput(format!(
                "signaling overhead {overhead} outside [0, 1]"
            )));
        }
        if overhead >= f64::from(min_tti) {
            return Err(ModelError::InvalidInput(format!(
                "signaling overhead {overhead} leaves no transmission time in a TTI of {min_tti}"
            )));
        }
        for (i, s) in services.iter().enumerate() {
            if !(s.demand.is_finite() && s.demand > 0.0) {
                return Err(ModelError::InvalidInput(format!(
                    "service {} has non-positive demand {}",
                    s.id, s.demand
                )));
            }
            if s.deadline == 0 {
                return Err(ModelError::InvalidInput(format!(
                    "service {} is active with an expired deadline",
                    s.id
                )));
            }
            if services[..i].iter().any(|o| o.id == s.id) {
                return Err(ModelError::InvalidInput(format!(
                    "duplicate service id {}",
                    s.id
                )));
            }
        }
        for (ch, row) in csi.iter().enumerate() {
            if row.len() != services.len() {
                return Err(ModelError::InvalidInput(format!(
                    "CSI row {ch} has {} entries, expected {}",
                    row.len(),
                    services.len()
                )));
            }
            for c in row {
                if !(c.rate.is_finite() && c.rate >= 0.0) {
                    return Err(ModelError::InvalidInput(format!(
                        "channel {ch} has invalid rate {}",
                        c.rate
                    )));
                }
                if c.valid_for == 0 {
                    return Err(ModelError::InvalidInput(format!(
                        "channel {ch} has zero CSI validity"
                    )));
                }
            }
        }
        Ok(Instance {
            services,
            csi,
            tti_menu,
            overhead,
        })
    }

    pub fn services(&self) -> &[ServiceState] {
        &self.services
    }

    pub fn csi(&self, channel: usize, service: usize) -> ChannelCsi {
        self.csi[channel][service]
    }

    pub fn csi_rows(&self) -> &[Vec<ChannelCsi>] {
        &self.csi
    }

    pub fn num_channels(&self) -> usize {
        self.csi.len()
    }

    pub fn num_services(&self) -> usize {
        self.services.len()
    }

    pub fn tti_menu(&self) -> &[u32] {
        &self.tti_menu
    }

    pub fn overhead(&self) -> f64 {
        self.overhead
    }

    /// Completion bonus `|S| - 1`, taken over the whole active set.
    pub fn completion_bonus(&self) -> f64 {
        self.services.len().saturating_sub(1) as f64
    }

    /// Copy of this instance with the TTI menu collapsed to one length.
    pub fn with_fixed_tti(&self, tti: u32) -> Result<Instance, ModelError> {
        Instance::new(
            self.services.clone(),
            self.csi.clone(),
            vec![tti],
            self.overhead,
        )
    }

    /// True when every (channel, service) pair carries the same CSI.
    pub fn is_flat(&self) -> bool {
        let mut all = self.csi.iter().flatten();
        match all.next() {
            None => true,
            Some(first) => all.all(|c| c == first),
        }
    }
}

/// Chosen TTI length plus a K x |S| binary assignment matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScheduleDecision {
    pub tti_length: u32,
    /// Indexed `[channel][service]`.
    pub assignment: Vec<Vec<bool>>,
}

impl ScheduleDecision {
    pub fn empty(tti_length: u32, num_channels: usize, num_services: usize) -> Self {
        ScheduleDecision {
            tti_length,
            assignment: vec![vec![false; num_services]; num_channels],
        }
    }

    /// Build from a per-channel owner list.
    pub fn from_owners(tti_length: u32, owners: &[Option<usize>], num_services: usize) -> Self {
        let mut d = Self::empty(tti_length, owners.len(), num_services);
        for (row, owner) in d.assignment.iter_mut().zip(owners) {
            if let Some(s) = *owner {
                row[s] = true;
            }
        }
        d
    }

    /// The service a channel is assigned to (first one, if the row is
    /// malformed).
    pub fn owner(&self, channel: usize) -> Option<usize> {
        self.assignment[channel].iter().position(|&a| a)
    }

    pub fn owners(&self) -> Vec<Option<usize>> {
        (0..self.assignment.len()).map(|i| self.owner(i)).collect()
    }

    /// Channels assigned to `service`, in index order.
    pub fn channels_of(&self, service: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, row)| row.get(service).copied().unwrap_or(false))
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Assignment shape differs from the instance.
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// TTI length not in the menu.
    TtiNotInMenu { tti: u32 },
    /// A channel is assigned to more than one service.
    ChannelShared { channel: usize, count: usize },
    /// CSI on an assigned pair expires before the TTI ends.
    CsiExpired {
        channel: usize,
        service: usize,
        valid_for: u32,
        tti: u32,
    },
    /// Channel given to a service whose deadline is shorter than the TTI.
    DeadlineTooShort {
        channel: usize,
        service: usize,
        deadline: u32,
        tti: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { expected, got } => write!(
                f,
                "assignment is {}x{}, expected {}x{}",
                got.0, got.1, expected.0, expected.1
            ),
            Violation::TtiNotInMenu { tti } => write!(f, "TTI length {tti} not in menu"),
            Violation::ChannelShared { channel, count } => {
                write!(f, "channel {channel} assigned to {count} services")
            }
            Violation::CsiExpired {
                channel,
                service,
                valid_for,
                tti,
            } => write!(
                f,
                "channel {channel} for service {service} valid for {valid_for} < TTI {tti}"
            ),
            Violation::DeadlineTooShort {
                channel,
                service,
                deadline,
                tti,
            } => write!(
                f,
                "channel {channel} given to service {service} with deadline {deadline} < TTI {tti}"
            ),
        }
    }
}

/// Result of applying a decision: every input service lands in exactly one
/// of `updated`, `completed`, `dropped`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionOutcome {
    pub updated: Vec<ServiceState>,
    pub completed: Vec<u64>,
    pub dropped: Vec<u64>,
    /// Bits delivered this TTI, aligned with the instance's services.
    pub served_bits: Vec<f64>,
}

/// Backlog after one TTI: `[q_prev - (delta - overhead) * sum(rates)]+`.
pub fn step_backlog(
    q_prev: f64,
    delta: u32,
    overhead: f64,
    assigned_rates: &[f64],
) -> Result<f64, ModelError> {
    step_backlog_with_tolerance(
        q_prev,
        delta,
        overhead,
        assigned_rates,
        DEFAULT_BACKLOG_TOLERANCE,
    )
}

/// [`step_backlog`] with an explicit snap-to-zero tolerance in bits.
pub fn step_backlog_with_tolerance(
    q_prev: f64,
    delta: u32,
    overhead: f64,
    assigned_rates: &[f64],
    tolerance: f64,
) -> Result<f64, ModelError> {
    if let Some(r) = assigned_rates.iter().find(|r| r.is_nan() || **r < 0.0) {
        return Err(ModelError::InvalidInput(format!("negative rate {r}")));
    }
    if q_prev < 0.0 {
        return Err(ModelError::InvalidInput(format!(
            "negative backlog {q_prev}"
        )));
    }
    let rate: f64 = assigned_rates.iter().sum();
    Ok(remaining_backlog(
        q_prev,
        transmit_capacity(delta, overhead, rate),
        tolerance,
    ))
}

/// Bits a summed rate can carry during a TTI of `delta` units.
#[inline]
pub(crate) fn transmit_capacity(delta: u32, overhead: f64, summed_rate: f64) -> f64 {
    (f64::from(delta) - overhead) * summed_rate
}

#[inline]
pub(crate) fn remaining_backlog(q_prev: f64, capacity: f64, tolerance: f64) -> f64 {
    if capacity >= q_prev {
        return 0.0;
    }
    let rest = q_prev - capacity;
    if rest <= tolerance {
        0.0
    } else {
        rest
    }
}

/// Deadline after one TTI, clamped at zero.
pub fn step_deadline(d_prev: u32, delta: u32) -> u32 {
    d_prev.saturating_sub(delta)
}

/// Fraction of the backlog cleared during the TTI.
pub fn emptying_rate(q_prev: f64, q_new: f64) -> Result<f64, ModelError> {
    if q_prev.is_nan() || q_prev <= 0.0 {
        return Err(ModelError::InvalidInput(format!(
            "emptying rate undefined for backlog {q_prev}"
        )));
    }
    if !(0.0..=q_prev).contains(&q_new) {
        return Err(ModelError::InvalidInput(format!(
            "new backlog {q_new} outside [0, {q_prev}]"
        )));
    }
    Ok((q_prev - q_new) / q_prev)
}

/// Constraint check for a decision against an instance. Never fails; an
/// empty list means the decision is admissible.
pub fn validate_decision(instance: &Instance, decision: &ScheduleDecision) -> Vec<Violation> {
    let mut out = Vec::new();
    let k = instance.num_channels();
    let n = instance.num_services();
    let got = (
        decision.assignment.len(),
        decision.assignment.first().map_or(n, Vec::len),
    );
    if decision.assignment.len() != k || decision.assignment.iter().any(|r| r.len() != n) {
        out.push(Violation::Shape {
            expected: (k, n),
            got,
        });
        return out;
    }
    let tti = decision.tti_length;
    if instance.tti_menu().binary_search(&tti).is_err() {
        out.push(Violation::TtiNotInMenu { tti });
    }
    for (i, row) in decision.assignment.iter().enumerate() {
        let count = row.iter().filter(|&&a| a).count();
        if count > 1 {
            out.push(Violation::ChannelShared { channel: i, count });
        }
        for (s, &a) in row.iter().enumerate() {
            if !a {
                continue;
            }
            let csi = instance.csi(i, s);
            if tti > csi.valid_for {
                out.push(Violation::CsiExpired {
                    channel: i,
                    service: s,
                    valid_for: csi.valid_for,
                    tti,
                });
            }
            let deadline = instance.services()[s].deadline;
            if deadline < tti {
                out.push(Violation::DeadlineTooShort {
                    channel: i,
                    service: s,
                    deadline,
                    tti,
                });
            }
        }
    }
    out
}

fn ensure_valid(instance: &Instance, decision: &ScheduleDecision) -> Result<(), ModelError> {
    let v = validate_decision(instance, decision);
    if v.is_empty() {
        Ok(())
    } else {
        Err(ModelError::ConstraintViolation(v))
    }
}

fn backlogs_after(
    instance: &Instance,
    decision: &ScheduleDecision,
) -> Result<Vec<f64>, ModelError> {
    instance
        .services()
        .iter()
        .enumerate()
        .map(|(s, svc)| {
            let rates: Vec<f64> = decision
                .channels_of(s)
                .map(|i| instance.csi(i, s).rate)
                .collect();
            step_backlog(svc.demand, decision.tti_length, instance.overhead(), &rates)
        })
        .collect()
}

/// Utility plus completion bonus of a decision.
///
/// Utility sums `W_s * E_s` over the active set; every service whose
/// backlog reaches zero adds `|S| - 1`.
pub fn objective_value(
    instance: &Instance,
    decision: &ScheduleDecision,
) -> Result<f64, ModelError> {
    ensure_valid(instance, decision)?;
    let after = backlogs_after(instance, decision)?;
    Ok(objective_from_backlogs(instance, &after))
}

/// Utility part only (no completion bonus).
pub fn utility(instance: &Instance, decision: &ScheduleDecision) -> Result<f64, ModelError> {
    ensure_valid(instance, decision)?;
    let after = backlogs_after(instance, decision)?;
    let mut u = 0.0;
    for (svc, q_new) in instance.services().iter().zip(&after) {
        u += svc.weight() * emptying_rate(svc.demand, *q_new)?;
    }
    Ok(u)
}

pub(crate) fn objective_from_backlogs(instance: &Instance, after: &[f64]) -> f64 {
    let bonus = instance.completion_bonus();
    let mut utility = 0.0;
    let mut completed = 0usize;
    for (svc, &q_new) in instance.services().iter().zip(after) {
        utility += svc.weight() * ((svc.demand - q_new) / svc.demand);
        if q_new == 0.0 {
            completed += 1;
        }
    }
    utility + bonus * completed as f64
}

/// Apply a decision: update backlogs and deadlines, then route each service
/// to completed (backlog zero), dropped (deadline zero with backlog left) or
/// updated.
pub fn advance_state(
    instance: &Instance,
    decision: &ScheduleDecision,
) -> Result<TransitionOutcome, ModelError> {
    ensure_valid(instance, decision)?;
    let after = backlogs_after(instance, decision)?;
    let mut out = TransitionOutcome {
        updated: Vec::new(),
        completed: Vec::new(),
        dropped: Vec::new(),
        served_bits: Vec::with_capacity(after.len()),
    };
    for (svc, q_new) in instance.services().iter().zip(after) {
        out.served_bits.push(svc.demand - q_new);
        let d_new = step_deadline(svc.deadline, decision.tti_length);
        if q_new == 0.0 {
            out.completed.push(svc.id);
        } else if d_new == 0 {
            out.dropped.push(svc.id);
        } else {
            out.updated.push(ServiceState {
                demand: q_new,
                deadline: d_new,
                ..svc.clone()
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn svc(id: u64, q: f64, d: u32) -> ServiceState {
        ServiceState::new(id, ServiceClass::Mcc, q, d)
    }

    fn uniform_csi(k: usize, n: usize, rate: f64, valid: u32) -> Vec<Vec<ChannelCsi>> {
        vec![vec![ChannelCsi::new(rate, valid); n]; k]
    }

    #[test]
    fn backlog_examples() {
        assert_eq!(step_backlog(100.0, 2, 0.5, &[40.0]).unwrap(), 40.0);
        assert_eq!(step_backlog(100.0, 2, 0.5, &[]).unwrap(), 100.0);
        assert_eq!(step_backlog(10.0, 2, 0.5, &[40.0]).unwrap(), 0.0);
    }

    #[test]
    fn backlog_rejects_negative_rate() {
        assert!(matches!(
            step_backlog(100.0, 2, 0.5, &[10.0, -1.0]),
            Err(ModelError::InvalidInput(_))
        ));
    }

    #[test]
    fn backlog_snaps_float_residue() {
        // 0.1 * 3 overshoots/undershoots 0.3 depending on order
        let q = 0.1 + 0.2;
        assert_eq!(step_backlog(q, 1, 0.0, &[0.1, 0.2 - 1e-12]).unwrap(), 0.0);
        assert!(step_backlog_with_tolerance(q, 1, 0.0, &[0.1, 0.2 - 1e-6], 1e-9).unwrap() > 0.0);
    }

    #[test]
    fn deadline_examples() {
        assert_eq!(step_deadline(10, 2), 8);
        assert_eq!(step_deadline(1, 2), 0);
        assert_eq!(step_deadline(0, 5), 0);
    }

    #[test]
    fn emptying_rate_examples() {
        assert_eq!(emptying_rate(100.0, 0.0).unwrap(), 1.0);
        assert_eq!(emptying_rate(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(emptying_rate(100.0, 50.0).unwrap(), 0.5);
        assert!(emptying_rate(0.0, 0.0).is_err());
    }

    #[test]
    fn objective_two_urgent_services_completed() {
        let inst = Instance::new(
            vec![svc(0, 1.0, 1), svc(1, 1.0, 1)],
            uniform_csi(2, 2, 1.0, 1),
            vec![1],
            0.0,
        )
        .unwrap();
        let d = ScheduleDecision::from_owners(1, &[Some(0), Some(1)], 2);
        assert_eq!(objective_value(&inst, &d).unwrap(), 4.0);
    }

    #[test]
    fn objective_single_service_has_no_bonus() {
        let inst = Instance::new(
            vec![svc(0, 5.0, 1)],
            uniform_csi(1, 1, 10.0, 1),
            vec![1],
            0.0,
        )
        .unwrap();
        let d = ScheduleDecision::from_owners(1, &[Some(0)], 1);
        assert_eq!(objective_value(&inst, &d).unwrap(), 1.0);
    }

    #[test]
    fn objective_partial_service() {
        let csi = vec![
            vec![ChannelCsi::new(50.0, 1), ChannelCsi::new(0.0, 1)],
            vec![ChannelCsi::new(0.0, 1), ChannelCsi::new(25.0, 1)],
        ];
        let inst =
            Instance::new(vec![svc(0, 100.0, 2), svc(1, 100.0, 4)], csi, vec![1], 0.0).unwrap();
        let d = ScheduleDecision::from_owners(1, &[Some(0), Some(1)], 2);
        assert_eq!(objective_value(&inst, &d).unwrap(), 0.3125);
    }

    #[test]
    fn validate_examples() {
        let inst = Instance::new(
            vec![svc(0, 10.0, 5), svc(1, 10.0, 5)],
            uniform_csi(2, 2, 1.0, 2),
            vec![1, 2, 3],
            0.0,
        )
        .unwrap();
        assert!(validate_decision(&inst, &ScheduleDecision::empty(1, 2, 2)).is_empty());

        let mut shared = ScheduleDecision::empty(1, 2, 2);
        shared.assignment[0] = vec![true, true];
        assert_eq!(
            validate_decision(&inst, &shared),
            vec![Violation::ChannelShared {
                channel: 0,
                count: 2
            }]
        );

        let long = ScheduleDecision::from_owners(3, &[Some(0), None], 2);
        assert_eq!(
            validate_decision(&inst, &long),
            vec![Violation::CsiExpired {
                channel: 0,
                service: 0,
                valid_for: 2,
                tti: 3
            }]
        );
        assert!(matches!(
            objective_value(&inst, &long),
            Err(ModelError::ConstraintViolation(_))
        ));
    }

    #[test]
    fn validate_flags_tti_and_deadline() {
        let inst = Instance::new(
            vec![svc(0, 10.0, 1)],
            uniform_csi(1, 1, 1.0, 9),
            vec![1, 2],
            0.0,
        )
        .unwrap();
        let bad_tti = ScheduleDecision::empty(4, 1, 1);
        assert_eq!(
            validate_decision(&inst, &bad_tti),
            vec![Violation::TtiNotInMenu { tti: 4 }]
        );
        let late = ScheduleDecision::from_owners(2, &[Some(0)], 1);
        assert!(matches!(
            validate_decision(&inst, &late)[..],
            [Violation::DeadlineTooShort {
                deadline: 1,
                tti: 2,
                ..
            }]
        ));
        let wrong_shape = ScheduleDecision::empty(1, 2, 1);
        assert!(matches!(
            validate_decision(&inst, &wrong_shape)[..],
            [Violation::Shape { .. }]
        ));
    }

    #[test]
    fn advance_examples() {
        let one = |q: f64, d: u32, rate: f64| {
            let inst = Instance::new(
                vec![svc(7, q, d)],
                uniform_csi(1, 1, rate, 10),
                vec![2],
                0.5,
            )
            .unwrap();
            advance_state(&inst, &ScheduleDecision::from_owners(2, &[Some(0)], 1)).unwrap()
        };
        // capacity = 1.5 * rate
        let done = one(100.0, 2, 100.0);
        assert_eq!(done.completed, vec![7]);
        assert_eq!(done.served_bits, vec![100.0]);

        let dropped = one(100.0, 2, 0.0);
        assert_eq!(dropped.dropped, vec![7]);
        assert_eq!(dropped.served_bits, vec![0.0]);

        let mid = one(100.0, 10, 40.0);
        assert!(mid.completed.is_empty() && mid.dropped.is_empty());
        assert_eq!(mid.updated[0].demand, 40.0);
        assert_eq!(mid.updated[0].deadline, 8);
    }

    #[test]
    fn completion_wins_over_expiry() {
        let inst = Instance::new(
            vec![svc(1, 10.0, 2)],
            uniform_csi(1, 1, 100.0, 2),
            vec![2],
            0.0,
        )
        .unwrap();
        let out = advance_state(&inst, &ScheduleDecision::from_owners(2, &[Some(0)], 1)).unwrap();
        assert_eq!(out.completed, vec![1]);
    }

    #[test]
    fn instance_rejects_bad_inputs() {
        let c = uniform_csi(1, 1, 1.0, 1);
        assert!(Instance::new(vec![svc(0, 1.0, 1)], c.clone(), vec![], 0.0).is_err());
        assert!(Instance::new(vec![svc(0, 1.0, 1)], c.clone(), vec![1], 1.0).is_err());
        assert!(Instance::new(vec![svc(0, 0.0, 1)], c.clone(), vec![1], 0.0).is_err());
        assert!(Instance::new(vec![svc(0, 1.0, 0)], c.clone(), vec![1], 0.0).is_err());
        assert!(Instance::new(
            vec![svc(0, 1.0, 1), svc(0, 1.0, 1)],
            c.clone(),
            vec![1],
            0.0
        )
        .is_err());
        assert!(Instance::new(
            vec![svc(0, 1.0, 1)],
            vec![vec![ChannelCsi::new(-1.0, 1)]],
            vec![1],
            0.0
        )
        .is_err());
    }

    #[test]
    fn flatness() {
        let flat = Instance::new(
            vec![svc(0, 1.0, 1), svc(1, 2.0, 3)],
            uniform_csi(3, 2, 4.0, 2),
            vec![1],
            0.0,
        )
        .unwrap();
        assert!(flat.is_flat());
        let mut csi = uniform_csi(3, 2, 4.0, 2);
        csi[2][1].rate = 5.0;
        let bumpy = Instance::new(flat.services().to_vec(), csi, vec![1], 0.0).unwrap();
        assert!(!bumpy.is_flat());
    }
}
