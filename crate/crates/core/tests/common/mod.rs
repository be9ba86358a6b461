#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ttisched::model::{ChannelCsi, Instance, ScheduleDecision, ServiceClass, ServiceState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small integer instance: K <= k_max, |S| <= s_max, menu {1..L}, L <= l_max,
/// rates 1..=10, demands 1..=40, deadlines 1..=L+1, validity 1..=L, no
/// signaling overhead.
pub fn small_integer_instance(
    rng: &mut ChaCha8Rng,
    k_max: usize,
    s_max: usize,
    l_max: u32,
) -> Instance {
    let k = rng.random_range(1..=k_max);
    let n = rng.random_range(1..=s_max);
    let l = rng.random_range(1..=l_max);
    let services = (0..n)
        .map(|id| {
            ServiceState::new(
                id as u64,
                if rng.random_bool(0.5) {
                    ServiceClass::Mcc
                } else {
                    ServiceClass::Mbb
                },
                rng.random_range(1..=40) as f64,
                rng.random_range(1..=l + 1),
            )
        })
        .collect();
    let csi = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| ChannelCsi::new(rng.random_range(1..=10) as f64, rng.random_range(1..=l)))
                .collect()
        })
        .collect();
    Instance::new(services, csi, (1..=l).collect(), 0.0).unwrap()
}

/// Flat integer instance: one shared (rate, validity) for every pair.
pub fn flat_integer_instance(
    rng: &mut ChaCha8Rng,
    k_max: usize,
    s_max: usize,
    l_max: u32,
) -> Instance {
    let k = rng.random_range(1..=k_max);
    let n = rng.random_range(1..=s_max);
    let l = rng.random_range(1..=l_max);
    let services = (0..n)
        .map(|id| {
            ServiceState::new(
                id as u64,
                ServiceClass::Mcc,
                rng.random_range(1..=60) as f64,
                rng.random_range(1..=l + 1),
            )
        })
        .collect();
    let c = ChannelCsi::new(rng.random_range(1..=10) as f64, rng.random_range(1..=l));
    Instance::new(services, vec![vec![c; n]; k], (1..=l).collect(), 0.0).unwrap()
}

/// Exact rational number for objective cross-checks on integer instances.
pub type Ratio = num_rational::Ratio<i128>;

pub fn ratio_to_f64(r: Ratio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Objective of a decision in exact arithmetic, for instances whose
/// demands and rates are integers and whose signaling overhead is zero.
/// Written from the model definition, independent of the library.
pub fn exact_objective(inst: &Instance, d: &ScheduleDecision) -> Ratio {
    assert_eq!(inst.overhead(), 0.0);
    let n = inst.num_services() as i128;
    let bonus = (n - 1).max(0);
    let mut total = Ratio::from_integer(0);
    for (s, svc) in inst.services().iter().enumerate() {
        let q = svc.demand as i128;
        assert_eq!(q as f64, svc.demand);
        let mut rate = 0i128;
        for (i, row) in d.assignment.iter().enumerate() {
            if row[s] {
                rate += inst.csi(i, s).rate as i128;
            }
        }
        let served = (d.tti_length as i128 * rate).min(q);
        total += Ratio::new(served, svc.deadline as i128 * q);
        if served == q {
            total += Ratio::from_integer(bonus);
        }
    }
    total
}

/// Exhaustive subset enumeration for Partition.
pub fn subset_sum_split(items: &[u64]) -> bool {
    let total: u64 = items.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    (0u64..(1 << items.len())).any(|mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p)
            .sum::<u64>()
            * 2
            == total
    })
}
