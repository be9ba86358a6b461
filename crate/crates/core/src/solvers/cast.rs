use crate::model::{Instance, ScheduleDecision};

use super::{IlpView, SolveResult, SolveStats};

/// Greedy channel allocation over every candidate TTI length.
///
/// For each TTI length, channels are visited in index order and each one
/// goes to the eligible service whose share of the objective grows the
/// most; a service leaves the working set once its backlog is cleared. The
/// TTI with the largest accumulated objective wins, the earliest on ties.
/// Work is `O(K * |S| * L)`.
pub fn solve_cast(instance: &Instance) -> SolveResult {
    let mut ops = 0u64;
    let mut best: Option<(u32, Vec<Option<usize>>, f64)> = None;
    for &tti in instance.tti_menu() {
        let view = IlpView::new(instance, tti);
        let (owners, gain) = cast_at(&view, &mut ops);
        if best.as_ref().is_none_or(|(_, _, g)| gain > *g) {
            best = Some((tti, owners, gain));
        }
    }
    let (tti, owners, _) = best.expect("TTI menu is never empty");
    let decision = ScheduleDecision::from_owners(tti, &owners, instance.num_services());
    SolveResult::evaluate(
        instance,
        decision,
        SolveStats {
            nodes: 0,
            operations: ops,
        },
    )
    .expect("greedy decisions are admissible by construction")
}

/// One greedy pass at a fixed TTI. Returns the channel owners and the
/// accumulated objective.
pub(crate) fn cast_at(view: &IlpView<'_>, ops: &mut u64) -> (Vec<Option<usize>>, f64) {
    let n = view.num_services();
    let bonus = view.bonus();
    // ineligible services are filtered out before the channel loop
    *ops += n as u64;
    let mut working: Vec<usize> = view.eligible_services().collect();
    let mut rate_sum = vec![0.0; n];
    let mut backlog: Vec<f64> = (0..n).map(|s| view.residual(s)).collect();
    let mut owners = vec![None; view.num_channels()];
    let mut total = 0.0;

    for (channel, owner) in owners.iter_mut().enumerate() {
        let mut best: Option<(usize, f64, f64)> = None;
        for &s in &working {
            *ops += 1;
            if !view.feasible(channel, s) {
                continue;
            }
            let q_temp = view.backlog_after(s, rate_sum[s] + view.rate(channel, s));
            let mut g = view.weight(s) * ((backlog[s] - q_temp) / view.residual(s));
            if q_temp == 0.0 {
                g += bonus;
            }
            if best.is_none_or(|(_, g_max, _)| g > g_max) {
                best = Some((s, g, q_temp));
            }
        }
        let Some((s, g, q_temp)) = best else {
            continue;
        };
        *owner = Some(s);
        rate_sum[s] += view.rate(channel, s);
        backlog[s] = q_temp;
        total += g;
        if q_temp == 0.0 {
            working.retain(|&x| x != s);
        }
    }
    (owners, total)
}
