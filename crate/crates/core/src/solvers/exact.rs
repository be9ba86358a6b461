//! Exact optimum by sweeping the TTI menu and running a depth-first
//! branch-and-bound over channel owners for each length.
//!
//! The search works in two phases. The first finds the optimal value and
//! the smallest TTI attaining it. The second fixes channels one at a time
//! in index order, preferring "unassigned" and then lower service indices,
//! keeping each choice only if the optimum is still reachable. The result
//! is the lexicographically smallest optimal assignment, which makes the
//! output independent of the internal branching order.

use crate::model::{Instance, ScheduleDecision};

use super::cast::cast_at;
use super::{tie_slack, IlpView, SolveError, SolveResult, SolveStats};

pub fn solve_exact(instance: &Instance) -> SolveResult {
    solve_exact_with_budget(instance, u64::MAX).expect("unbounded search cannot exceed its budget")
}

/// [`solve_exact`] that gives up after visiting `node_budget` search nodes.
pub fn solve_exact_with_budget(
    instance: &Instance,
    node_budget: u64,
) -> Result<SolveResult, SolveError> {
    let mut counter = NodeCounter {
        visited: 0,
        budget: node_budget,
    };
    let mut ops = 0u64;

    // phase 1: optimal value and the first TTI reaching it
    let mut best: Option<(u32, f64)> = None;
    for &tti in instance.tti_menu() {
        let view = IlpView::new(instance, tti);
        let floor = best.map_or(f64::NEG_INFINITY, |(_, v)| v + tie_slack(v));
        let (greedy, _) = cast_at(&view, &mut ops);
        let seed = view.evaluate(&greedy).value;
        let mut search = Search::new(&view, &mut counter);
        let incumbent = if seed > floor { Some(seed) } else { None };
        if let Some(v) = search.maximize(floor, incumbent)? {
            best = Some((tti, v));
        }
    }
    let Some((tti, value)) = best else {
        // every length has an empty search space; nothing beats zero
        let tti = instance.tti_menu()[0];
        let decision =
            ScheduleDecision::empty(tti, instance.num_channels(), instance.num_services());
        return SolveResult::evaluate(instance, decision, stats(&counter, ops));
    };

    // phase 2: lexicographically smallest assignment reaching the optimum
    let view = IlpView::new(instance, tti);
    let target = value - tie_slack(value);
    let k = instance.num_channels();
    let mut fixed: Vec<Option<Option<usize>>> = vec![None; k];
    for channel in 0..k {
        let choices = std::iter::once(None).chain(
            view.eligible_services()
                .filter(|&s| view.feasible(channel, s))
                .map(Some),
        );
        let mut chosen = None;
        for choice in choices {
            fixed[channel] = Some(choice);
            let mut search = Search::with_fixed(&view, &mut counter, &fixed);
            if search.reach(target)? {
                chosen = Some(choice);
                break;
            }
        }
        // unreachable only if phase 1 and phase 2 disagree on arithmetic
        fixed[channel] = Some(chosen.expect("optimum reachable from a feasible prefix"));
    }
    let owners: Vec<Option<usize>> = fixed.into_iter().map(|c| c.flatten()).collect();
    let decision = ScheduleDecision::from_owners(tti, &owners, instance.num_services());
    SolveResult::evaluate(instance, decision, stats(&counter, ops))
}

fn stats(counter: &NodeCounter, ops: u64) -> SolveStats {
    SolveStats {
        nodes: counter.visited,
        operations: ops,
    }
}

struct NodeCounter {
    visited: u64,
    budget: u64,
}

impl NodeCounter {
    fn tick(&mut self) -> Result<(), SolveError> {
        self.visited += 1;
        if self.visited > self.budget {
            Err(SolveError::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy)]
enum Goal {
    /// Find the maximum leaf value strictly above a floor.
    Maximize { floor: f64 },
    /// Find any leaf with value at least the target.
    Reach { target: f64 },
}

struct Search<'v, 'c> {
    view: &'v IlpView<'v>,
    counter: &'c mut NodeCounter,
    /// Free channels in branching order.
    order: Vec<usize>,
    owners: Vec<Option<usize>>,
    rate_sum: Vec<f64>,
    best: Option<f64>,
    goal: Goal,
    done: bool,
}

impl<'v, 'c> Search<'v, 'c> {
    fn new(view: &'v IlpView<'v>, counter: &'c mut NodeCounter) -> Self {
        Self::with_fixed(view, counter, &vec![None; view.num_channels()])
    }

    fn with_fixed(
        view: &'v IlpView<'v>,
        counter: &'c mut NodeCounter,
        fixed: &[Option<Option<usize>>],
    ) -> Self {
        let n = view.num_services();
        let mut owners = vec![None; view.num_channels()];
        let mut rate_sum = vec![0.0; n];
        let mut free = Vec::new();
        for (i, f) in fixed.iter().enumerate() {
            match f {
                Some(owner) => {
                    owners[i] = *owner;
                    if let Some(s) = *owner {
                        rate_sum[s] += view.rate(i, s);
                    }
                }
                None => free.push(i),
            }
        }
        // strongest channels first tightens the bound early
        let strength = |i: usize| {
            view.eligible_services()
                .filter(|&s| view.feasible(i, s))
                .map(|s| view.effective_rate(i, s))
                .fold(0.0, f64::max)
        };
        let mut keyed: Vec<(f64, usize)> = free.into_iter().map(|i| (strength(i), i)).collect();
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        Search {
            view,
            counter,
            order: keyed.into_iter().map(|(_, i)| i).collect(),
            owners,
            rate_sum,
            best: None,
            goal: Goal::Maximize {
                floor: f64::NEG_INFINITY,
            },
            done: false,
        }
    }

    fn maximize(&mut self, floor: f64, incumbent: Option<f64>) -> Result<Option<f64>, SolveError> {
        self.goal = Goal::Maximize { floor };
        self.best = incumbent;
        self.descend(0)?;
        Ok(self.best)
    }

    fn reach(&mut self, target: f64) -> Result<bool, SolveError> {
        self.goal = Goal::Reach { target };
        self.descend(0)?;
        Ok(self.done)
    }

    /// Bound below which a subtree is pruned (pruned when `bound <= cut`
    /// for maximize, `bound < cut` for reach).
    fn prunes(&self, bound: f64) -> bool {
        match self.goal {
            Goal::Maximize { floor } => {
                let cut = self.best.map_or(floor, |b| b.max(floor));
                bound <= cut
            }
            Goal::Reach { target } => bound < target,
        }
    }

    fn descend(&mut self, depth: usize) -> Result<(), SolveError> {
        if self.done {
            return Ok(());
        }
        self.counter.tick()?;
        if depth == self.order.len() {
            let value = self.view.evaluate(&self.owners).value;
            match self.goal {
                Goal::Maximize { floor } => {
                    if value > floor && self.best.is_none_or(|b| value > b) {
                        self.best = Some(value);
                    }
                }
                Goal::Reach { target } => {
                    if value >= target {
                        self.done = true;
                    }
                }
            }
            return Ok(());
        }
        if self.prunes(self.upper_bound(depth)) {
            return Ok(());
        }

        let channel = self.order[depth];
        let bonus = self.view.bonus();
        let mut options: Vec<(f64, usize)> = Vec::new();
        for s in self.view.eligible_services() {
            if !self.view.feasible(channel, s) {
                continue;
            }
            let before = self.view.backlog_after(s, self.rate_sum[s]);
            if before == 0.0 {
                continue; // already served: same value as leaving it idle
            }
            let after = self
                .view
                .backlog_after(s, self.rate_sum[s] + self.view.rate(channel, s));
            if after == before {
                continue;
            }
            let mut gain = self.view.weight(s) * (before - after) / self.view.residual(s);
            if after == 0.0 {
                gain += bonus;
            }
            options.push((gain, s));
        }
        options.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

        for (_, s) in options {
            let r = self.view.rate(channel, s);
            self.owners[channel] = Some(s);
            let saved = self.rate_sum[s];
            self.rate_sum[s] += r;
            let res = self.descend(depth + 1);
            self.rate_sum[s] = saved;
            self.owners[channel] = None;
            res?;
            if self.done {
                return Ok(());
            }
        }
        self.descend(depth + 1)
    }

    /// Admissible bound on any completion of the current partial
    /// assignment.
    fn upper_bound(&self, depth: usize) -> f64 {
        let view = self.view;
        let bonus = view.bonus();
        let free = &self.order[depth..];
        let mut value = 0.0;
        let mut completed = 0usize;
        let mut remaining = vec![0.0; view.num_services()];
        for s in view.eligible_services() {
            let left = view.backlog_after(s, self.rate_sum[s]);
            value += view.weight(s) * (view.residual(s) - left) / view.residual(s);
            if left == 0.0 {
                completed += 1;
            }
            remaining[s] = left;
        }

        // utility still collectable, per channel and per service
        let mut per_channel = 0.0;
        let mut reachable = vec![false; view.num_services()];
        for &i in free {
            let mut best = 0.0f64;
            for s in view.eligible_services() {
                if remaining[s] > 0.0 && view.feasible(i, s) {
                    reachable[s] = true;
                    let gain =
                        view.normalized_weight(s) * view.effective_rate(i, s).min(remaining[s]);
                    best = best.max(gain);
                }
            }
            per_channel += best;
        }
        let per_service: f64 = (0..remaining.len())
            .filter(|&s| reachable[s])
            .map(|s| view.normalized_weight(s) * remaining[s])
            .sum();

        // services that can still complete, each needing at least as many
        // free channels as its best rates require
        let mut needs = Vec::new();
        for s in view.eligible_services() {
            if !reachable[s] || bonus == 0.0 {
                continue;
            }
            let mut rates: Vec<f64> = free
                .iter()
                .filter(|&&i| view.feasible(i, s))
                .map(|&i| view.effective_rate(i, s))
                .collect();
            rates.sort_by(|a, b| b.total_cmp(a));
            let goal = remaining[s] * (1.0 - 1e-12) - 2e-9;
            let mut acc = 0.0;
            for (j, r) in rates.iter().enumerate() {
                acc += r;
                if acc >= goal {
                    needs.push(j + 1);
                    break;
                }
            }
        }
        needs.sort_unstable();
        let mut used = 0;
        let mut extra = 0usize;
        for need in needs {
            if used + need > free.len() {
                break;
            }
            used += need;
            extra += 1;
        }

        value
            + per_channel.min(per_service)
            + bonus * (completed + extra) as f64
            + 1e-12 * (1.0 + value)
    }
}
