use rand::Rng;
use rand_distr::StandardNormal;

use super::config::{CsiValidity, SimConfig};
use super::random::{Purpose, SimRng};
use crate::model::{ChannelCsi, ServiceState};

/// Linear SNR from decibels.
pub fn snr_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Shannon rate in bits per time unit for a channel of `bandwidth_hz` at
/// instantaneous SNR `snr`.
pub fn shannon_rate(bandwidth_hz: f64, time_unit_ms: f64, snr: f64) -> f64 {
    bandwidth_hz * time_unit_ms * 1e-3 * (1.0 + snr).log2()
}

/// Squared magnitude of a unit-variance circularly-symmetric complex
/// Gaussian, i.e. an Exp(1) power gain.
pub fn rayleigh_power<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    0.5 * (re * re + im * im)
}

/// Fresh CSI for one scheduling instant, indexed `[channel][service]`.
///
/// Fading for a service at instant `t` is drawn from its own substream, so
/// it does not depend on which other services are active.
pub fn sample_csi(
    config: &SimConfig,
    rng: &SimRng,
    t: u64,
    services: &[ServiceState],
) -> Vec<Vec<ChannelCsi>> {
    let k = config.num_channels;
    let snr = snr_linear(config.mean_snr_db);
    let draw = |stream: &mut rand_chacha::ChaCha8Rng| {
        let gain = rayleigh_power(stream);
        let valid_for = match config.csi_validity {
            CsiValidity::ConstantL => config.max_tti(),
            CsiValidity::UniformRange(lo, hi) => stream.random_range(lo..=hi),
        };
        ChannelCsi::new(
            shannon_rate(config.channel_bandwidth_hz, config.time_unit_ms, gain * snr),
            valid_for,
        )
    };

    if config.flat_channels {
        let shared = draw(&mut rng.stream(Purpose::Fading, t, u64::MAX));
        return vec![vec![shared; services.len()]; k];
    }
    let mut csi = vec![Vec::with_capacity(services.len()); k];
    for svc in services {
        let mut stream = rng.stream(Purpose::Fading, t, svc.id);
        for row in csi.iter_mut() {
            row.push(draw(&mut stream));
        }
    }
    csi
}
