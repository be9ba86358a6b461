use crate::model::{
    objective_from_backlogs, remaining_backlog, transmit_capacity, Instance,
    DEFAULT_BACKLOG_TOLERANCE,
};

/// An instance reduced to one candidate TTI length.
///
/// Services whose deadline is shorter than the TTI are ineligible, and a
/// (channel, service) pair is usable only when its CSI stays valid for the
/// whole TTI. Infeasible pairs are excluded outright rather than through a
/// big-M constraint.
#[derive(Debug, Clone)]
pub struct IlpView<'a> {
    instance: &'a Instance,
    tti: u32,
    eligible: Vec<bool>,
    bonus: f64,
}

/// Served amounts and completion flags for one assignment under a view.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpSolution {
    /// Bits served per service, capped at the residual demand.
    pub served: Vec<f64>,
    pub completed: Vec<bool>,
    pub value: f64,
}

impl<'a> IlpView<'a> {
    pub fn new(instance: &'a Instance, tti: u32) -> Self {
        let eligible = instance
            .services()
            .iter()
            .map(|s| s.deadline >= tti)
            .collect();
        IlpView {
            instance,
            tti,
            eligible,
            bonus: instance.completion_bonus(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn tti(&self) -> u32 {
        self.tti
    }

    pub fn num_channels(&self) -> usize {
        self.instance.num_channels()
    }

    pub fn num_services(&self) -> usize {
        self.instance.num_services()
    }

    pub fn is_eligible(&self, service: usize) -> bool {
        self.eligible[service]
    }

    pub fn eligible_services(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.eligible.len()).filter(|&s| self.eligible[s])
    }

    pub fn num_eligible(&self) -> usize {
        self.eligible.iter().filter(|&&e| e).count()
    }

    /// Completion bonus, `|S| - 1` over the full active set.
    pub fn bonus(&self) -> f64 {
        self.bonus
    }

    pub fn feasible(&self, channel: usize, service: usize) -> bool {
        self.eligible[service] && self.instance.csi(channel, service).valid_for >= self.tti
    }

    pub fn rate(&self, channel: usize, service: usize) -> f64 {
        self.instance.csi(channel, service).rate
    }

    /// Bits channel `channel` would carry for `service` in this TTI.
    pub fn effective_rate(&self, channel: usize, service: usize) -> f64 {
        transmit_capacity(
            self.tti,
            self.instance.overhead(),
            self.rate(channel, service),
        )
    }

    pub fn residual(&self, service: usize) -> f64 {
        self.instance.services()[service].demand
    }

    pub fn weight(&self, service: usize) -> f64 {
        self.instance.services()[service].weight()
    }

    /// Weight per served bit, `W_s / Q_s`.
    pub fn normalized_weight(&self, service: usize) -> f64 {
        self.weight(service) / self.residual(service)
    }

    /// Backlog left for `service` when its assigned rates sum to
    /// `summed_rate`.
    pub fn backlog_after(&self, service: usize, summed_rate: f64) -> f64 {
        remaining_backlog(
            self.residual(service),
            transmit_capacity(self.tti, self.instance.overhead(), summed_rate),
            DEFAULT_BACKLOG_TOLERANCE,
        )
    }

    /// Evaluate a per-channel owner list. Rates are summed in channel index
    /// order so the value is bit-identical to `objective_value` on the
    /// equivalent decision.
    pub fn evaluate(&self, owners: &[Option<usize>]) -> IlpSolution {
        let n = self.num_services();
        let mut rate_sum = vec![0.0; n];
        for (i, owner) in owners.iter().enumerate() {
            if let Some(s) = *owner {
                rate_sum[s] += self.rate(i, s);
            }
        }
        let after: Vec<f64> = (0..n).map(|s| self.backlog_after(s, rate_sum[s])).collect();
        let value = objective_from_backlogs(self.instance, &after);
        IlpSolution {
            served: (0..n).map(|s| self.residual(s) - after[s]).collect(),
            completed: after.iter().map(|&q| q == 0.0).collect(),
            value,
        }
    }
}
