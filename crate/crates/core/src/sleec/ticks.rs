//! Discretisation of `within` deadlines into ticks.

use super::ast::{Duration, SleecSpec};
use super::printer::Clause;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeadlineTicks {
    pub rule: String,
    pub clause: Clause,
    pub duration: Duration,
    pub ticks: u64,
}

/// Tick length (seconds, or one abstract unit when the spec has no
/// durations) and the tick count of every deadline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TickScale {
    pub tick_seconds: u64,
    pub deadlines: Vec<DeadlineTicks>,
}

impl TickScale {
    /// Number of ticks spanned by `d`. Exact for every duration that took
    /// part in the normalisation.
    pub fn ticks(&self, d: &Duration) -> u64 {
        d.seconds() / self.tick_seconds
    }

    pub fn max_deadline(&self) -> u64 {
        self.deadlines.iter().map(|d| d.ticks).max().unwrap_or(0)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn normalize_durations(spec: &SleecSpec) -> TickScale {
    let mut found = Vec::new();
    for r in &spec.rules {
        if let Some(d) = r.response.deadline {
            found.push((r.id.name.clone(), Clause::Base, d));
        }
        for (i, def) in r.defeaters.iter().enumerate() {
            if let Some(d) = def.response.as_ref().and_then(|resp| resp.deadline) {
                found.push((r.id.name.clone(), Clause::Defeater(i), d));
            }
        }
    }
    let tick_seconds = found.iter().fold(0, |g, (_, _, d)| gcd(g, d.seconds()));
    let tick_seconds = if tick_seconds == 0 { 1 } else { tick_seconds };
    let deadlines = found
        .into_iter()
        .map(|(rule, clause, duration)| DeadlineTicks {
            rule,
            clause,
            ticks: duration.seconds() / tick_seconds,
            duration,
        })
        .collect();
    TickScale { tick_seconds, deadlines }
}
