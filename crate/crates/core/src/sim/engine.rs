use std::collections::HashMap;

use thiserror::Error;

use super::channel::sample_csi;
use super::config::{ConfigError, SimConfig};
use super::metrics::{Event, EventKind, RunMetrics};
use super::random::SimRng;
use super::traffic::generate_arrivals;
use crate::model::{
    advance_state, validate_decision, Instance, ModelError, ServiceClass, ServiceState,
};
use crate::solvers::{Policy, SolveError, SolveResult};

#[derive(Debug, Error, Clone)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scheduling failed at time unit {t}: {source}")]
    Solve { t: u64, source: SolveError },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Hooks into a running simulation. Both methods default to no-ops.
pub trait SimObserver {
    fn on_event(&mut self, _event: &Event) {}
    fn on_schedule(&mut self, _t: u64, _instance: &Instance, _result: &SolveResult) {}
}

impl SimObserver for () {}

/// Collects every event of a run.
#[derive(Debug, Default)]
pub struct EventRecorder {
    pub events: Vec<Event>,
}

impl SimObserver for EventRecorder {
    fn on_event(&mut self, event: &Event) {
        self.events.push(event.clone());
    }
}

/// One simulation run: a policy, an optional fixed TTI, and optionally some
/// services injected on top of the random traffic.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    config: &'a SimConfig,
    policy: Policy,
    fixed_tti: Option<u32>,
    injected: Vec<ServiceState>,
}

struct Tracked {
    arrival_time: u64,
    initial_deadline: u32,
    class: ServiceClass,
    delivered: f64,
}

impl<'a> Simulation<'a> {
    pub fn new(config: &'a SimConfig, policy: Policy) -> Self {
        Simulation {
            config,
            policy,
            fixed_tti: None,
            injected: Vec::new(),
        }
    }

    /// Collapse the TTI menu to a single length.
    pub fn fixed_tti(mut self, tti: Option<u32>) -> Self {
        self.fixed_tti = tti;
        self
    }

    /// Add services that arrive at their `arrival_time` in addition to the
    /// random sources.
    pub fn inject(mut self, services: Vec<ServiceState>) -> Self {
        self.injected = services;
        self
    }

    pub fn run(&self) -> Result<RunMetrics, SimError> {
        self.run_observed(&mut ())
    }

    /// Run the scheduling loop.
    ///
    /// At each scheduling instant the services that arrived since the
    /// previous instant join the active set with their deadlines already
    /// reduced by the time they waited. Fresh CSI is drawn, the policy
    /// picks a TTI length and an assignment, and the clock advances by that
    /// length. With nothing active the clock advances one unit.
    pub fn run_observed<O: SimObserver + ?Sized>(
        &self,
        observer: &mut O,
    ) -> Result<RunMetrics, SimError> {
        let cfg = self.config;
        cfg.validate()?;
        let menu = match self.fixed_tti {
            Some(tti) if cfg.tti_menu.contains(&tti) => vec![tti],
            Some(tti) => {
                return Err(ConfigError::Invalid(format!(
                    "fixed TTI {tti} is not in the configured menu {:?}",
                    cfg.tti_menu
                ))
                .into())
            }
            None => cfg.tti_menu.clone(),
        };
        let rng = SimRng::new(cfg.seed);
        let horizon = cfg.horizon_units;

        let mut injected = self.injected.clone();
        injected.sort_by_key(|s| (s.arrival_time, s.id));
        let mut injected = injected.into_iter().peekable();
        let mut next_id = self.injected.iter().map(|s| s.id + 1).max().unwrap_or(0);

        let mut metrics = RunMetrics::default();
        let mut tracked: HashMap<u64, Tracked> = HashMap::new();
        let mut active: Vec<ServiceState> = Vec::new();
        let mut next_unit = 0u64;
        let mut t = 0u64;

        while t < horizon {
            // arrivals accrued since the last instant
            for u in next_unit..=t {
                let mut arrivals: Vec<ServiceState> = Vec::new();
                while injected.peek().is_some_and(|s| s.arrival_time <= u) {
                    let mut s = injected.next().expect("peeked");
                    s.arrival_time = u.max(s.arrival_time);
                    arrivals.push(s);
                }
                arrivals.extend(generate_arrivals(cfg, &rng, u, &mut next_id));
                for svc in arrivals {
                    metrics.class_mut(svc.class).arrived += 1;
                    observer.on_event(&Event {
                        t: u,
                        kind: EventKind::Arrive,
                        service_id: svc.id,
                        class: svc.class,
                        bits: svc.demand,
                        arrival_time: u,
                        initial_deadline: svc.deadline,
                    });
                    tracked.insert(
                        svc.id,
                        Tracked {
                            arrival_time: u,
                            initial_deadline: svc.deadline,
                            class: svc.class,
                            delivered: 0.0,
                        },
                    );
                    let waited = (t - u) as u32;
                    let deadline = svc.deadline.saturating_sub(waited);
                    if deadline == 0 {
                        metrics.class_mut(svc.class).dropped += 1;
                        emit_exit(observer, &mut tracked, svc.id, t, EventKind::Drop);
                    } else {
                        active.push(ServiceState { deadline, ..svc });
                    }
                }
            }
            next_unit = t + 1;

            if active.is_empty() {
                t += 1;
                continue;
            }

            let csi = sample_csi(cfg, &rng, t, &active);
            let instance =
                Instance::new(std::mem::take(&mut active), csi, menu.clone(), cfg.overhead)?;
            let result = self
                .policy
                .solve(&instance)
                .map_err(|source| SimError::Solve { t, source })?;
            debug_assert!(validate_decision(&instance, &result.decision).is_empty());
            observer.on_schedule(t, &instance, &result);

            let outcome = advance_state(&instance, &result.decision)?;
            let tti = result.decision.tti_length;
            let end = t + u64::from(tti);
            *metrics.tti_histogram.entry(tti).or_default() += 1;

            for (svc, bits) in instance.services().iter().zip(&outcome.served_bits) {
                match svc.class {
                    ServiceClass::Mbb => metrics.mbb_bits_served += bits,
                    ServiceClass::Mcc => metrics.mcc_bits_served += bits,
                }
                if let Some(tr) = tracked.get_mut(&svc.id) {
                    tr.delivered += bits;
                }
            }
            for id in &outcome.completed {
                let tr = &tracked[id];
                let late = end - tr.arrival_time > u64::from(tr.initial_deadline);
                debug_assert!(!late, "service {id} completed after its deadline");
                if late {
                    metrics.late_completions += 1;
                }
                metrics.class_mut(tr.class).completed += 1;
                emit_exit(observer, &mut tracked, *id, end, EventKind::Complete);
            }
            for id in &outcome.dropped {
                metrics.class_mut(tracked[id].class).dropped += 1;
                emit_exit(observer, &mut tracked, *id, end, EventKind::Drop);
            }
            active = outcome.updated;
            t = end;
        }

        // arrivals never reached by a scheduling instant
        for u in next_unit..horizon {
            while injected.peek().is_some_and(|s| s.arrival_time <= u) {
                let s = injected.next().expect("peeked");
                metrics.class_mut(s.class).arrived += 1;
                metrics.class_mut(s.class).residual += 1;
            }
            for svc in generate_arrivals(cfg, &rng, u, &mut next_id) {
                metrics.class_mut(svc.class).arrived += 1;
                metrics.class_mut(svc.class).residual += 1;
                observer.on_event(&Event {
                    t: u,
                    kind: EventKind::Arrive,
                    service_id: svc.id,
                    class: svc.class,
                    bits: svc.demand,
                    arrival_time: u,
                    initial_deadline: svc.deadline,
                });
            }
        }
        for svc in &active {
            metrics.class_mut(svc.class).residual += 1;
        }
        metrics.elapsed_units = t.max(horizon);
        debug_assert!(metrics.mcc.is_conserved() && metrics.mbb.is_conserved());
        Ok(metrics)
    }
}

fn emit_exit<O: SimObserver + ?Sized>(
    observer: &mut O,
    tracked: &mut HashMap<u64, Tracked>,
    id: u64,
    t: u64,
    kind: EventKind,
) {
    if let Some(tr) = tracked.remove(&id) {
        observer.on_event(&Event {
            t,
            kind,
            service_id: id,
            class: tr.class,
            bits: tr.delivered,
            arrival_time: tr.arrival_time,
            initial_deadline: tr.initial_deadline,
        });
    }
}

/// Run one simulation with the given policy, optionally at a fixed TTI.
pub fn run_simulation(
    config: &SimConfig,
    policy: Policy,
    fixed_tti: Option<u32>,
) -> Result<RunMetrics, SimError> {
    Simulation::new(config, policy).fixed_tti(fixed_tti).run()
}
