use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use crate::model::ServiceClass;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub arrived: u64,
    pub completed: u64,
    pub dropped: u64,
    /// Still active (or not yet scheduled) when the horizon was reached.
    pub residual: u64,
}

impl ClassCounts {
    pub fn is_conserved(&self) -> bool {
        self.arrived == self.completed + self.dropped + self.residual
    }

    /// Percentage of resolved services that completed; `None` when nothing
    /// was resolved.
    pub fn pct_completed(&self) -> Option<f64> {
        let resolved = self.completed + self.dropped;
        (resolved > 0).then(|| 100.0 * self.completed as f64 / resolved as f64)
    }

    fn merge(&mut self, o: &ClassCounts) {
        self.arrived += o.arrived;
        self.completed += o.completed;
        self.dropped += o.dropped;
        self.residual += o.residual;
    }
}

/// Outcome counters of one simulation run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub mcc: ClassCounts,
    pub mbb: ClassCounts,
    /// Bits delivered to MBB services, whether or not they later completed.
    pub mbb_bits_served: f64,
    pub mcc_bits_served: f64,
    pub elapsed_units: u64,
    /// Number of scheduled TTIs per chosen length.
    pub tti_histogram: BTreeMap<u32, u64>,
    /// Completions observed after the service's deadline; always zero.
    pub late_completions: u64,
}

impl RunMetrics {
    pub fn class(&self, class: ServiceClass) -> &ClassCounts {
        match class {
            ServiceClass::Mcc => &self.mcc,
            ServiceClass::Mbb => &self.mbb,
        }
    }

    pub(crate) fn class_mut(&mut self, class: ServiceClass) -> &mut ClassCounts {
        match class {
            ServiceClass::Mcc => &mut self.mcc,
            ServiceClass::Mbb => &mut self.mbb,
        }
    }

    /// MBB bits per millisecond of simulated time.
    pub fn mbb_throughput(&self, time_unit_ms: f64) -> f64 {
        if self.elapsed_units == 0 {
            return 0.0;
        }
        self.mbb_bits_served / (self.elapsed_units as f64 * time_unit_ms)
    }

    pub fn scheduled_ttis(&self) -> u64 {
        self.tti_histogram.values().sum()
    }

    /// Combine two runs. Associative and commutative up to float rounding
    /// of the bit totals.
    pub fn merge(&mut self, o: &RunMetrics) {
        self.mcc.merge(&o.mcc);
        self.mbb.merge(&o.mbb);
        self.mbb_bits_served += o.mbb_bits_served;
        self.mcc_bits_served += o.mcc_bits_served;
        self.elapsed_units += o.elapsed_units;
        for (tti, n) in &o.tti_histogram {
            *self.tti_histogram.entry(*tti).or_default() += n;
        }
        self.late_completions += o.late_completions;
    }
}

impl fmt::Display for RunMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, c) in [("mcc", &self.mcc), ("mbb", &self.mbb)] {
            writeln!(
                f,
                "{name}: arrived={} completed={} dropped={} residual={}",
                c.arrived, c.completed, c.dropped, c.residual
            )?;
        }
        writeln!(f, "mbb_bits_served={}", self.mbb_bits_served)?;
        writeln!(f, "elapsed_units={}", self.elapsed_units)?;
        let hist: Vec<String> = self
            .tti_histogram
            .iter()
            .map(|(t, n)| format!("{t}:{n}"))
            .collect();
        write!(f, "tti_histogram={}", hist.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Arrive,
    Complete,
    Drop,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Arrive => "arrive",
            EventKind::Complete => "complete",
            EventKind::Drop => "drop",
        }
    }
}

/// One line of the per-run event log. `bits` is the demand for arrivals and
/// the total delivered for completions and drops.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub t: u64,
    pub kind: EventKind,
    pub service_id: u64,
    pub class: ServiceClass,
    pub bits: f64,
    pub arrival_time: u64,
    pub initial_deadline: u32,
}

impl Event {
    /// `t,event,service_id,class,bits`
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.t,
            self.kind.as_str(),
            self.service_id,
            self.class,
            self.bits
        )
    }
}

pub fn write_event_log<W: Write>(mut w: W, events: &[Event]) -> io::Result<()> {
    for e in events {
        w.write_all(e.to_line().as_bytes())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
