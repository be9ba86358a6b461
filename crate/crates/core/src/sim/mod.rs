//! Monte Carlo simulation: Bernoulli traffic sources, Rayleigh-faded
//! Shannon rates and a TTI-by-TTI scheduling loop.

mod channel;
pub(crate) mod config;
mod engine;
mod metrics;
mod random;
mod traffic;

pub use channel::{rayleigh_power, sample_csi, shannon_rate, snr_linear};
pub use config::{ConfigError, CsiValidity, SimConfig};
pub use engine::{run_simulation, EventRecorder, SimError, SimObserver, Simulation};
pub use metrics::{write_event_log, ClassCounts, Event, EventKind, RunMetrics};
pub use random::SimRng;
pub use traffic::generate_arrivals;
