//! Human-readable output.

use std::fmt::Write;

use sleecgo_core::checker::{Diagnosis, DiagnosisKind};
use sleecgo_core::semantics::{ActivationRecord, Obligation, Trace, Verdict};
use sleecgo_core::sleec::{normalize_durations, print_purpose, render_rule, Clause, Polarity, SleecSpec};

/// `one tick = 2 minutes` and the like.
pub fn tick_length(spec: &SleecSpec) -> String {
    let s = normalize_durations(spec).tick_seconds;
    let (n, unit) = match s {
        _ if s.is_multiple_of(3600) => (s / 3600, "hour"),
        _ if s.is_multiple_of(60) => (s / 60, "minute"),
        _ => (s, "second"),
    };
    format!("one tick = {n} {unit}{}", if n == 1 { "" } else { "s" })
}

fn window(o: &Obligation) -> String {
    if o.open_ended {
        format!("from tick {} on", o.window.start)
    } else {
        format!("in [{}, {}]", o.window.start, o.window.end)
    }
}

fn obligation(o: &Obligation) -> String {
    let verb = match o.polarity {
        Polarity::Require => "requires",
        Polarity::Forbid => "forbids",
    };
    format!("{} {verb} {} {}", o.source_rule, o.event, window(o))
}

fn tick_line(trace: &Trace, t: usize) -> String {
    let tick = &trace.ticks[t];
    let events: Vec<&str> = tick.events.iter().map(String::as_str).collect();
    let mut line = format!("tick {t}: {}", if events.is_empty() { "-".to_string() } else { events.join(", ") });
    if !tick.measures.is_empty() {
        let values: Vec<String> = tick.measures.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = write!(line, " | {}", values.join(", "));
    }
    line
}

/// Rule text with the clause `marked` underlined on the next line.
fn rule_source(spec: &SleecSpec, id: &str, marked: Option<Clause>, out: &mut String) {
    if let Some(rule) = spec.rules.iter().find(|r| r.id.as_str() == id) {
        let rendered = render_rule(rule);
        let _ = writeln!(out, "    {}", rendered.text);
        if let Some(range) = marked.and_then(|c| rendered.clause_range(c)) {
            let _ = writeln!(out, "    {}{}", " ".repeat(range.start), "^".repeat(range.len()));
        }
    } else if let Some(p) = spec.purposes.iter().find(|p| p.id.as_str() == id) {
        let _ = writeln!(out, "    {}", print_purpose(p));
    }
}

fn diagnosis(spec: &SleecSpec, d: &Diagnosis, out: &mut String) {
    let _ = match d.kind {
        DiagnosisKind::Vacuous => {
            writeln!(out, "vacuous rule {}: no compliant trace of at most {} ticks activates it", d.rules[0], d.bound)
        }
        DiagnosisKind::Situational => writeln!(out, "situational conflict between {}", d.rules.join(" and ")),
        DiagnosisKind::PurposeUnsat => writeln!(
            out,
            "unreachable purpose {}: no compliant trace of at most {} ticks exhibits it",
            d.rules[0], d.bound
        ),
    };
    for id in &d.rules {
        let marked = d
            .clash
            .as_ref()
            .and_then(|c| [&c.require, &c.forbid].into_iter().find(|o| &o.source_rule == id).map(|o| o.clause));
        rule_source(spec, id, marked, out);
    }
    if let Some(c) = &d.clash {
        let _ = writeln!(out, "  clash: {}, while {}", obligation(&c.require), obligation(&c.forbid));
    }
    if let Some(w) = &d.witness {
        let _ = writeln!(out, "  witness:");
        for t in 0..w.len() {
            let _ = writeln!(out, "    {}", tick_line(w, t));
        }
    }
    for v in &d.value_context {
        let mut parts = Vec::new();
        if let Some(p) = &v.norm_principle {
            parts.push(format!("principle {p}"));
        }
        if let Some(p) = &v.proxy {
            parts.push(format!("proxy {p}"));
        }
        if !parts.is_empty() {
            let _ = writeln!(out, "  value context: {} from {}: {}", v.generated, v.source, parts.join(", "));
        }
    }
}

pub fn diagnoses(spec: &SleecSpec, bound: usize, found: &[Diagnosis]) -> String {
    let mut out = format!("bound {bound} ticks, {}\n\n", tick_length(spec));
    if found.is_empty() {
        out.push_str("no findings\n");
    }
    for (i, d) in found.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        diagnosis(spec, d, &mut out);
    }
    out
}

/// Tick-by-tick activations and discharges, then the verdict.
pub fn replay(spec: &SleecSpec, trace: &Trace, acts: &[ActivationRecord], verdict: &Verdict) -> String {
    let mut out = format!("{}\n", tick_length(spec));
    let discharge = |o: &Obligation| {
        let last = o.window.end.min(trace.len().saturating_sub(1) as u64);
        (o.window.start..=last).find(|&t| trace.ticks[t as usize].events.contains(&o.event))
    };
    let discharges: Vec<(u64, &Obligation)> = acts
        .iter()
        .filter_map(|a| a.effective.as_ref())
        .filter(|o| o.polarity == Polarity::Require)
        .filter_map(|o| discharge(o).map(|t| (t, o)))
        .collect();
    for t in 0..trace.len() {
        let _ = writeln!(out, "{}", tick_line(trace, t));
        for a in acts.iter().filter(|a| a.tick == t as u64) {
            let _ = match &a.effective {
                Some(o) => writeln!(out, "  {}", obligation(o)),
                None => writeln!(out, "  {} cancelled by defeater {}", a.rule, a.matched_defeater.map_or(0, |i| i + 1)),
            };
        }
        for (_, o) in discharges.iter().filter(|(d, _)| *d == t as u64) {
            let _ = writeln!(out, "  {} discharged at tick {t} ({})", o.event, o.source_rule);
        }
    }
    let _ = match verdict {
        Verdict::Compliant => writeln!(out, "verdict: compliant"),
        Verdict::Violated(obs) | Verdict::Pending(obs) => {
            let what = if verdict.is_violated() { "violated" } else { "pending" };
            let _ = writeln!(out, "verdict: {what}");
            for o in obs {
                let _ = writeln!(out, "  {}", obligation(o));
            }
            Ok(())
        }
    };
    out
}
