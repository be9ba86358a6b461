use crate::model::{Instance, ScheduleDecision};

use super::{IlpView, SolveError, SolveResult, SolveStats};

/// Exact optimum for flat channels by dynamic programming.
///
/// When every (channel, service) pair has the same CSI only the number of
/// channels per service matters. With `g[s][k]` the value of giving `k`
/// channels to service `s`, the table
/// `h[s][k] = max_{j <= k} g[s][j] + h[s-1][k-j]` is filled for each
/// candidate TTI in `O(|S| * K^2)` cell updates.
pub fn solve_flat_dp(instance: &Instance) -> Result<SolveResult, SolveError> {
    if !instance.is_flat() {
        return Err(SolveError::NotFlat);
    }
    let k = instance.num_channels();
    let n = instance.num_services();
    let mut ops = 0u64;
    let mut best: Option<(u32, f64, Vec<Option<usize>>)> = None;

    for &tti in instance.tti_menu() {
        let view = IlpView::new(instance, tti);
        let (value, owners) = solve_at(&view, &mut ops);
        if best.as_ref().is_none_or(|(_, v, _)| value > *v) {
            best = Some((tti, value, owners));
        }
    }
    let (tti, _, owners) = best.expect("TTI menu is never empty");
    let decision = if k == 0 {
        ScheduleDecision::empty(tti, 0, n)
    } else {
        ScheduleDecision::from_owners(tti, &owners, n)
    };
    SolveResult::evaluate(
        instance,
        decision,
        SolveStats {
            nodes: 0,
            operations: ops,
        },
    )
}

fn solve_at(view: &IlpView<'_>, ops: &mut u64) -> (f64, Vec<Option<usize>>) {
    let k = view.num_channels();
    let mut owners = vec![None; k];
    let services: Vec<usize> = view.eligible_services().collect();
    // a flat instance is either usable on every pair at this TTI or on none
    if k == 0 || services.is_empty() || !view.feasible(0, services[0]) {
        return (0.0, owners);
    }
    let rate = view.rate(0, services[0]);
    let bonus = view.bonus();

    // value of j channels for each eligible service
    let gains: Vec<Vec<f64>> = services
        .iter()
        .map(|&s| {
            let mut row = Vec::with_capacity(k + 1);
            row.push(0.0);
            let mut summed = 0.0;
            for _ in 1..=k {
                summed += rate;
                let left = view.backlog_after(s, summed);
                row.push(if left == 0.0 {
                    view.weight(s) + bonus
                } else {
                    view.weight(s) * (view.residual(s) - left) / view.residual(s)
                });
            }
            row
        })
        .collect();

    let rows = services.len();
    let mut table = vec![vec![0.0; k + 1]; rows + 1];
    let mut choice = vec![vec![0usize; k + 1]; rows + 1];
    for r in 1..=rows {
        for c in 0..=k {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for j in 0..=c {
                *ops += 1;
                let v = gains[r - 1][j] + table[r - 1][c - j];
                if v > best {
                    best = v;
                    arg = j;
                }
            }
            table[r][c] = best;
            choice[r][c] = arg;
        }
    }

    let mut counts = vec![0usize; rows];
    let mut c = k;
    for r in (1..=rows).rev() {
        counts[r - 1] = choice[r][c];
        c -= choice[r][c];
    }
    let mut next = 0;
    for (row, &count) in counts.iter().enumerate() {
        for owner in &mut owners[next..next + count] {
            *owner = Some(services[row]);
        }
        next += count;
    }
    (table[rows][k], owners)
}
