use rand::Rng;

use super::config::SimConfig;
use super::random::{Purpose, SimRng};
use crate::model::{ServiceClass, ServiceState};

/// New services emitted during time unit `t`.
///
/// Each MCC source, then each MBB source, fires independently with its
/// per-unit probability. Ids are taken from `next_id` in that order.
pub fn generate_arrivals(
    config: &SimConfig,
    rng: &SimRng,
    t: u64,
    next_id: &mut u64,
) -> Vec<ServiceState> {
    let mut stream = rng.stream(Purpose::Arrivals, t, 0);
    let mut out = Vec::new();
    let sources = std::iter::repeat_n(ServiceClass::Mcc, config.num_mcc_sources).chain(
        std::iter::repeat_n(ServiceClass::Mbb, config.num_mbb_sources),
    );
    for class in sources {
        let (p, demand, deadline) = match class {
            ServiceClass::Mcc => (
                config.r_mcc,
                config.mcc_demand_bits,
                config.mcc_deadline_units,
            ),
            ServiceClass::Mbb => (
                config.r_mbb,
                config.mbb_demand_bits,
                config.mbb_deadline_units,
            ),
        };
        if stream.random_bool(p) {
            out.push(ServiceState::new(*next_id, class, demand, deadline).arrived_at(t));
            *next_id += 1;
        }
    }
    out
}
