use crate::model::{Instance, ScheduleDecision};

use super::{IlpView, SolveError, SolveResult, SolveStats};

/// Shortest-deadline-first baseline at a fixed TTI length.
///
/// Services that can survive the TTI are served in order of increasing
/// deadline (then id). Each takes its best remaining channels, highest rate
/// first, until its backlog is covered or nothing usable is left.
pub fn solve_sdfs(instance: &Instance, fixed_tti: u32) -> Result<SolveResult, SolveError> {
    if instance.tti_menu().binary_search(&fixed_tti).is_err() {
        return Err(SolveError::TtiNotInMenu(fixed_tti));
    }
    let view = IlpView::new(instance, fixed_tti);
    let services = instance.services();
    let mut order: Vec<usize> = view.eligible_services().collect();
    order.sort_by_key(|&s| (services[s].deadline, services[s].id));

    let mut owners = vec![None; instance.num_channels()];
    let mut ops = 0u64;
    for s in order {
        let mut channels: Vec<usize> = (0..instance.num_channels())
            .filter(|&i| owners[i].is_none() && view.feasible(i, s) && view.rate(i, s) > 0.0)
            .collect();
        ops += channels.len() as u64;
        channels.sort_by(|&a, &b| view.rate(b, s).total_cmp(&view.rate(a, s)).then(a.cmp(&b)));
        let mut summed = 0.0;
        for i in channels {
            owners[i] = Some(s);
            summed += view.rate(i, s);
            if view.backlog_after(s, summed) == 0.0 {
                break;
            }
        }
    }
    let decision = ScheduleDecision::from_owners(fixed_tti, &owners, instance.num_services());
    SolveResult::evaluate(
        instance,
        decision,
        SolveStats {
            nodes: 0,
            operations: ops,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChannelCsi, ServiceClass, ServiceState};

    #[test]
    fn urgent_service_gets_the_channel() {
        let inst = Instance::new(
            vec![
                ServiceState::new(0, ServiceClass::Mbb, 10.0, 5),
                ServiceState::new(1, ServiceClass::Mcc, 10.0, 1),
            ],
            vec![vec![ChannelCsi::new(10.0, 5); 2]],
            vec![1],
            0.0,
        )
        .unwrap();
        let r = solve_sdfs(&inst, 1).unwrap();
        assert_eq!(r.decision.owners(), vec![Some(1)]);
    }

    #[test]
    fn fills_by_decreasing_rate_until_covered() {
        let inst = Instance::new(
            vec![ServiceState::new(0, ServiceClass::Mcc, 25.0, 3)],
            vec![
                vec![ChannelCsi::new(10.0, 3)],
                vec![ChannelCsi::new(30.0, 3)],
                vec![ChannelCsi::new(20.0, 3)],
            ],
            vec![1],
            0.0,
        )
        .unwrap();
        let r = solve_sdfs(&inst, 1).unwrap();
        assert_eq!(r.decision.owners(), vec![None, Some(0), None]);
    }

    #[test]
    fn tti_must_be_in_menu() {
        let inst = Instance::new(
            vec![ServiceState::new(0, ServiceClass::Mcc, 1.0, 3)],
            vec![vec![ChannelCsi::new(1.0, 3)]],
            vec![1, 2],
            0.0,
        )
        .unwrap();
        assert_eq!(solve_sdfs(&inst, 3), Err(SolveError::TtiNotInMenu(3)));
    }

    #[test]
    fn id_breaks_deadline_ties() {
        let inst = Instance::new(
            vec![
                ServiceState::new(9, ServiceClass::Mcc, 10.0, 2),
                ServiceState::new(4, ServiceClass::Mcc, 10.0, 2),
            ],
            vec![vec![ChannelCsi::new(10.0, 2); 2]],
            vec![1],
            0.0,
        )
        .unwrap();
        assert_eq!(
            solve_sdfs(&inst, 1).unwrap().decision.owners(),
            vec![Some(1)]
        );
    }
}
