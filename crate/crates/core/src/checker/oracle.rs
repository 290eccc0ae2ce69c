//! Exhaustive enumeration over small instances.
//!
//! Every trace over all declared events and the abstract measure domains is
//! generated directly from the compliance semantics, with no state
//! abstraction, so the results can certify the search in [`super::search`].

use std::collections::BTreeSet;

use super::domains::raw_domains;
use super::search::{advance, subsets};
use super::{CheckConfig, CheckError};
use crate::semantics::{ix_obligation_clash, IndexedTick, IndexedTrace, Model, Trace, Verdict, VerdictClass};
use crate::sleec::SleecSpec;

pub const MAX_ORACLE_EVENTS: usize = 6;
pub const MAX_ORACLE_BOUND: usize = 5;
pub const MAX_ORACLE_DOMAIN: usize = 3;

fn tick_options(model: &Model, cfg: &CheckConfig) -> Result<Vec<IndexedTick>, CheckError> {
    let domains = raw_domains(model, &cfg.numeric_representatives);
    if model.events.len() > MAX_ORACLE_EVENTS {
        return Err(CheckError::InstanceTooLarge(format!(
            "{} events (at most {MAX_ORACLE_EVENTS})",
            model.events.len()
        )));
    }
    if cfg.bound_ticks > MAX_ORACLE_BOUND {
        return Err(CheckError::InstanceTooLarge(format!("bound {} (at most {MAX_ORACLE_BOUND})", cfg.bound_ticks)));
    }
    if let Some((m, d)) = domains.iter().enumerate().find(|(_, d)| d.len() > MAX_ORACLE_DOMAIN) {
        return Err(CheckError::InstanceTooLarge(format!(
            "measure `{}` has {} abstract values (at most {MAX_ORACLE_DOMAIN})",
            model.measures[m].name,
            d.len()
        )));
    }
    let sizes: Vec<usize> = domains.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    for events in subsets(model.events.len(), cfg.max_events_per_tick) {
        let mut digits = vec![0; domains.len()];
        loop {
            let values = digits.iter().enumerate().map(|(m, &i)| domains[m][i]).collect();
            out.push(IndexedTick { events: events.clone(), values });
            if !advance(&mut digits, &sizes) {
                break;
            }
        }
    }
    Ok(out)
}

/// Iterator over every trace of exactly `bound_ticks` ticks, with its
/// compliance verdict.
pub struct TraceEnumeration {
    model: Model,
    options: Vec<IndexedTick>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for TraceEnumeration {
    type Item = (Trace, Verdict);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let ix = IndexedTrace { ticks: self.digits.iter().map(|&i| self.options[i].clone()).collect() };
        let sizes = vec![self.options.len(); self.digits.len()];
        self.done = !advance(&mut self.digits, &sizes);
        let verdict = self.model.verdict(&ix);
        Some((self.model.named_trace(&ix), verdict))
    }
}

/// Every trace of length `cfg.bound_ticks` over all declared events (at
/// most `cfg.max_events_per_tick` per tick) and the abstract domains.
pub fn enumerate_all_traces(spec: &SleecSpec, cfg: &CheckConfig) -> Result<TraceEnumeration, CheckError> {
    let model = Model::new(spec)?;
    let options = tick_options(&model, cfg)?;
    Ok(TraceEnumeration { model, options, digits: vec![0; cfg.bound_ticks], done: false })
}

/// What exhaustive enumeration says about each rule and purpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdicts {
    pub bound: usize,
    pub rules: Vec<String>,
    pub purposes: Vec<String>,
    /// Per rule: some compliant, fully discharged trace activates it.
    pub triggerable: Vec<bool>,
    /// Rule index pairs `(i, j)`, `i < j`, whose obligations clash in some
    /// non-violated prefix.
    pub clashes: BTreeSet<(usize, usize)>,
    pub purpose_satisfiable: Vec<bool>,
    /// Non-violated prefixes visited.
    pub prefixes: u64,
}

impl OracleVerdicts {
    pub fn is_triggerable(&self, rule: &str) -> bool {
        self.rules.iter().position(|r| r == rule).is_some_and(|i| self.triggerable[i])
    }

    pub fn clash_partners(&self, rule: &str) -> Vec<&str> {
        let Some(i) = self.rules.iter().position(|r| r == rule) else { return vec![] };
        self.clashes
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .map(|j| self.rules[j].as_str())
            .collect()
    }

    pub fn is_purpose_satisfiable(&self, purpose: &str) -> bool {
        self.purposes.iter().position(|p| p == purpose).is_some_and(|i| self.purpose_satisfiable[i])
    }
}

/// Decides triggerability, pairwise clashes and purpose satisfiability by
/// visiting every trace up to the bound. Violated prefixes are not
/// extended: violation is preserved by extension, and a qualifying trace
/// never has a violated prefix.
pub fn exhaustive_verdicts(spec: &SleecSpec, cfg: &CheckConfig) -> Result<OracleVerdicts, CheckError> {
    let model = Model::new(spec)?;
    let options = tick_options(&model, cfg)?;
    let mut out = OracleVerdicts {
        bound: cfg.bound_ticks,
        rules: model.rules.iter().map(|r| r.id.clone()).collect(),
        purposes: model.purposes.iter().map(|p| p.id.clone()).collect(),
        triggerable: vec![false; model.rules.len()],
        clashes: BTreeSet::new(),
        purpose_satisfiable: vec![false; model.purposes.len()],
        prefixes: 0,
    };
    let mut trace = IndexedTrace::default();
    visit(&model, &options, cfg.bound_ticks, &mut trace, &mut out);
    Ok(out)
}

fn visit(model: &Model, options: &[IndexedTick], bound: usize, trace: &mut IndexedTrace, out: &mut OracleVerdicts) {
    if !trace.is_empty() {
        let class = model.verdict_class(trace);
        if class == VerdictClass::Violated {
            return;
        }
        out.prefixes += 1;
        let acts = model.activations_ix(trace);
        let last = trace.len() as u64 - 1;
        if class == VerdictClass::Compliant {
            for a in &acts {
                if a.obligation.is_some() {
                    out.triggerable[a.rule] = true;
                }
            }
            for (p, purpose) in model.purposes.iter().enumerate() {
                let while_tick = match purpose.while_event {
                    None => Some(0),
                    Some(w) => trace.ticks.iter().position(|t| t.events.contains(&w)),
                };
                let Some(start) = while_tick else { continue };
                let hit = trace.ticks[start..].iter().any(|t| {
                    t.events.contains(&purpose.exists_event) && purpose.cond.as_ref().is_none_or(|c| c.eval(&t.values))
                });
                out.purpose_satisfiable[p] |= hit;
            }
        }
        for x in acts.iter().filter(|a| a.tick == last) {
            let Some(ox) = &x.obligation else { continue };
            for y in &acts {
                let Some(oy) = &y.obligation else { continue };
                if x.rule != y.rule && ix_obligation_clash(ox, oy) {
                    out.clashes.insert((x.rule.min(y.rule), x.rule.max(y.rule)));
                }
            }
        }
    }
    if trace.len() == bound {
        return;
    }
    for opt in options {
        trace.ticks.push(opt.clone());
        visit(model, options, bound, trace, out);
        trace.ticks.pop();
    }
}
