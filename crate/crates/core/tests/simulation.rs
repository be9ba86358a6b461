use ttisched::experiment::Arm;
use ttisched::model::{objective_value, utility, validate_decision, Instance, ServiceClass};
use ttisched::sim::{
    generate_arrivals, sample_csi, CsiValidity, Event, EventKind, EventRecorder, RunMetrics,
    SimConfig, SimObserver, SimRng, Simulation,
};
use ttisched::solvers::{solve_exact_with_budget, Policy, SolveResult};

fn short(r_mcc: f64, seed: u64, horizon: u64) -> SimConfig {
    SimConfig {
        r_mcc,
        seed,
        horizon_units: horizon,
        ..SimConfig::default()
    }
}

/// Checks every scheduled TTI and keeps the event log.
#[derive(Default)]
struct Auditor {
    recorder: EventRecorder,
    schedules: usize,
}

impl SimObserver for Auditor {
    fn on_event(&mut self, e: &Event) {
        self.recorder.on_event(e);
    }

    fn on_schedule(&mut self, _t: u64, inst: &Instance, r: &SolveResult) {
        assert!(validate_decision(inst, &r.decision).is_empty());
        let u = utility(inst, &r.decision).unwrap();
        assert!(u >= 0.0 && u <= inst.num_services() as f64 + 1e-9);
        assert_eq!(r.value, objective_value(inst, &r.decision).unwrap());
        self.schedules += 1;
    }
}

fn audited(cfg: &SimConfig, arm: Arm) -> (RunMetrics, Auditor) {
    let mut a = Auditor::default();
    let m = Simulation::new(cfg, arm.policy)
        .fixed_tti(arm.fixed_tti)
        .run_observed(&mut a)
        .unwrap();
    (m, a)
}

fn audit_events(events: &[Event], m: &RunMetrics) {
    let mut completed = 0;
    for e in events.iter().filter(|e| e.kind == EventKind::Complete) {
        assert!(
            e.t - e.arrival_time <= u64::from(e.initial_deadline),
            "{e:?}"
        );
        completed += 1;
    }
    assert_eq!(completed, m.mcc.completed + m.mbb.completed);
    let arrivals = events
        .iter()
        .filter(|e| e.kind == EventKind::Arrive)
        .count() as u64;
    assert_eq!(arrivals, m.mcc.arrived + m.mbb.arrived);
}

#[test]
fn conservation_and_deadlines_across_policies() {
    let arms = ["cast", "cast@2", "sdfs@2", "sdfs@5"];
    for (i, arm) in arms.iter().enumerate() {
        for r in [0.05, 0.5, 1.0] {
            let cfg = short(r, 40 + i as u64, 3000);
            let (m, a) = audited(&cfg, arm.parse().unwrap());
            assert!(m.mcc.is_conserved() && m.mbb.is_conserved(), "{arm} {r}");
            assert_eq!(m.late_completions, 0);
            assert_eq!(m.scheduled_ttis() as usize, a.schedules);
            audit_events(&a.recorder.events, &m);
        }
    }
}

#[test]
fn expiring_csi_and_flat_channels() {
    let cfg = SimConfig {
        csi_validity: CsiValidity::UniformRange(1, 6),
        ..short(0.3, 9, 3000)
    };
    let (m, a) = audited(&cfg, Arm::scalable(Policy::Cast));
    assert!(m.mcc.is_conserved() && m.mbb.is_conserved());
    audit_events(&a.recorder.events, &m);

    let cfg = SimConfig {
        flat_channels: true,
        num_channels: 8,
        ..short(0.3, 9, 3000)
    };
    let (m, _) = audited(&cfg, Arm::scalable(Policy::FlatDp));
    assert!(m.mcc.is_conserved() && m.mbb.is_conserved());
    assert!(m.mcc.completed > 0);
}

#[test]
fn same_seed_same_run() {
    let cfg = short(0.4, 77, 5000);
    let (m1, a1) = audited(&cfg, Arm::scalable(Policy::Cast));
    let (m2, a2) = audited(&cfg, Arm::scalable(Policy::Cast));
    assert_eq!(m1, m2);
    assert_eq!(a1.recorder.events, a2.recorder.events);
    let (m3, _) = audited(&short(0.4, 78, 5000), Arm::scalable(Policy::Cast));
    assert_ne!(m1, m3);
}

#[test]
fn mcc_arrival_rate_concentrates() {
    let cfg = short(0.5, 3, 1_000_000);
    let rng = SimRng::new(cfg.seed);
    let mut next_id = 0;
    let units = 1_000_000u64;
    let mut mcc = 0u64;
    for t in 0..units {
        mcc += generate_arrivals(&cfg, &rng, t, &mut next_id)
            .iter()
            .filter(|s| s.class == ServiceClass::Mcc)
            .count() as u64;
    }
    let mean = mcc as f64 / units as f64;
    // 3 Bernoulli(0.5) sources per unit
    let sigma = (3.0 * 0.25 / units as f64).sqrt();
    assert!((mean - 1.5).abs() <= 3.0 * sigma, "mean {mean}");
}

#[test]
fn fading_snr_mean_matches_calibration() {
    let cfg = SimConfig::default();
    let rng = SimRng::new(11);
    let svc = vec![ttisched::ServiceState::new(0, ServiceClass::Mbb, 1.0, 100)];
    let scale = cfg.channel_bandwidth_hz * cfg.time_unit_ms * 1e-3;
    let mut sum = 0.0;
    let mut n = 0usize;
    for t in 0..62_500u64 {
        for row in sample_csi(&cfg, &rng, t, &svc) {
            // invert the Shannon rate to recover |h|^2 S/N
            sum += (row[0].rate / scale).exp2() - 1.0;
            n += 1;
        }
    }
    assert_eq!(n, 1_000_000);
    let target = 10f64.powf(0.5);
    assert!(
        (sum / n as f64 - target).abs() <= 0.01 * target,
        "mean {}",
        sum / n as f64
    );
}

#[test]
fn mbb_throughput_falls_with_mcc_load() {
    for arm in ["cast", "cast@2", "sdfs@2"] {
        let arm: Arm = arm.parse().unwrap();
        let mean = |r: f64| {
            (0..20u64)
                .map(|seed| {
                    arm.simulate(&short(r, 500 + seed, 10_000))
                        .unwrap()
                        .mbb_throughput(0.1)
                })
                .sum::<f64>()
                / 20.0
        };
        let (low, high) = (mean(0.1), mean(0.8));
        assert!(high < low, "{arm}: {high} !< {low}");
    }
}

/// Cast never beats the exact optimum on the instances the simulator
/// actually produces.
#[test]
fn cast_below_exact_per_tti() {
    struct Compare {
        checked: usize,
    }
    impl SimObserver for Compare {
        fn on_schedule(&mut self, _t: u64, inst: &Instance, r: &SolveResult) {
            let exact = solve_exact_with_budget(inst, 5_000_000).unwrap();
            assert!(r.value <= exact.value + 1e-9 * exact.value.max(1.0));
            self.checked += 1;
        }
    }
    let cfg = SimConfig {
        num_channels: 4,
        r_mbb: 0.05,
        ..short(0.1, 21, 4000)
    };
    let mut c = Compare { checked: 0 };
    Simulation::new(&cfg, Policy::Cast)
        .run_observed(&mut c)
        .unwrap();
    assert!(c.checked > 100);
}
