//! Joint TTI-length and channel allocation for heterogeneous downlink
//! traffic.
//!
//! * [`model`]: services, CSI, decisions and the state transition.
//! * [`solvers`]: exact branch-and-bound, the greedy heuristic, the
//!   flat-channel dynamic program and a shortest-deadline-first baseline.
//! * [`oracle`]: exhaustive enumeration and the Partition reduction.
//! * [`sim`]: Monte Carlo simulation with Bernoulli sources and Rayleigh
//!   fading.
//! * [`experiment`]: parameter sweeps, CSV output and instance files.

pub mod experiment;
pub mod model;
pub mod oracle;
pub mod sim;
pub mod solvers;

pub use model::{
    advance_state, emptying_rate, objective_value, step_backlog, step_deadline, validate_decision,
    ChannelCsi, Instance, ModelError, ScheduleDecision, ServiceClass, ServiceState,
    TransitionOutcome, Violation,
};
pub use solvers::{Policy, SolveError, SolveResult, SolveStats};
