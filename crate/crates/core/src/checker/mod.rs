//! Bounded conflict detection.
//!
//! Three questions are asked of a spec, each up to a bound on trace length:
//!
//! * can a rule be triggered by some compliant behaviour at all
//!   (otherwise it is *vacuously* conflicting),
//! * can two rules be triggered so that one requires an event the other
//!   forbids over a covering window (a *situational* conflict),
//! * does some compliant behaviour exhibit each purpose.
//!
//! Verdicts are bounded: "no witness" always means "none within
//! `bound_ticks` ticks".

mod domains;
mod oracle;
mod search;
mod slice;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

pub use domains::{abstract_measure_domains, numeric_representatives};
pub use oracle::{
    enumerate_all_traces, exhaustive_verdicts, OracleVerdicts, TraceEnumeration, MAX_ORACLE_BOUND, MAX_ORACLE_DOMAIN,
    MAX_ORACLE_EVENTS,
};
pub use slice::slice_relevant_rules;

use crate::semantics::{ix_obligation_clash, IndexedTrace, Model, Obligation, Trace};
use crate::sleec::{Polarity, SemanticError, SleecSpec};
use crate::translate::{TraceEntry, TraceabilityMap};
use search::{Goal, Search};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("bound {bound} is too small for the deadlines in this spec; use at least {minimum}")]
    BoundTooSmall { bound: usize, minimum: usize },
    #[error("instance too large for exhaustive enumeration: {0}")]
    InstanceTooLarge(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("spec is not well-typed ({} error(s)), first: {}", .0.len(), .0[0])]
    IllTyped(Vec<SemanticError>),
    #[error("no rule named `{0}`")]
    UnknownRule(String),
    #[error("no purpose named `{0}`")]
    UnknownPurpose(String),
}

impl From<Vec<SemanticError>> for CheckError {
    fn from(e: Vec<SemanticError>) -> Self {
        CheckError::IllTyped(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckConfig {
    pub bound_ticks: usize,
    pub max_events_per_tick: usize,
    pub slicing: bool,
    /// Replacement value lists for numeric measures, by name.
    pub numeric_representatives: BTreeMap<String, Vec<i64>>,
}

impl CheckConfig {
    pub fn new(bound_ticks: usize) -> Self {
        CheckConfig { bound_ticks, max_events_per_tick: 3, slicing: true, numeric_representatives: BTreeMap::new() }
    }
}

/// Smallest bound that can contain a whole deadline window: one more than
/// the longest deadline in ticks, or 1 without deadlines.
pub fn minimum_bound(spec: &SleecSpec) -> Result<usize, CheckError> {
    Ok(min_bound(&Model::new(spec)?))
}

/// [`minimum_bound`] plus two ticks of slack.
pub fn default_bound(spec: &SleecSpec) -> Result<usize, CheckError> {
    Ok(minimum_bound(spec)? + 2)
}

fn min_bound(model: &Model) -> usize {
    1 + model.ticks.max_deadline() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosisKind {
    Vacuous,
    Situational,
    PurposeUnsat,
}

impl DiagnosisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosisKind::Vacuous => "vacuous",
            DiagnosisKind::Situational => "situational",
            DiagnosisKind::PurposeUnsat => "purpose_unsat",
        }
    }
}

/// The two obligations of a situational conflict. Windows without a
/// deadline are shown ending at the last tick of the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clash {
    pub event: String,
    pub require_window: [u64; 2],
    pub forbid_window: [u64; 2],
    #[serde(skip)]
    pub require: Obligation,
    #[serde(skip)]
    pub forbid: Obligation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub kind: DiagnosisKind,
    /// Implicated rule ids, sorted; the purpose id for `purpose_unsat`.
    pub rules: Vec<String>,
    pub bound: usize,
    pub witness: Option<Trace>,
    pub clash: Option<Clash>,
    pub value_context: Vec<TraceEntry>,
}

impl Diagnosis {
    pub fn attach_value_context(&mut self, map: &TraceabilityMap) {
        self.value_context = self.rules.iter().filter_map(|r| map.lookup(r).cloned()).collect();
    }
}

/// A compiled spec plus configuration, reused across many queries.
pub struct Checker {
    model: Model,
    domains: Vec<Vec<i64>>,
    cfg: CheckConfig,
}

impl Checker {
    pub fn new(spec: &SleecSpec, cfg: &CheckConfig) -> Result<Checker, CheckError> {
        let model = Model::new(spec)?;
        let minimum = min_bound(&model);
        if cfg.bound_ticks < minimum {
            return Err(CheckError::BoundTooSmall { bound: cfg.bound_ticks, minimum });
        }
        if cfg.max_events_per_tick == 0 {
            return Err(CheckError::InvalidConfig("max_events_per_tick must be at least 1".into()));
        }
        let domains = domains::raw_domains(&model, &cfg.numeric_representatives);
        Ok(Checker { model, domains, cfg: cfg.clone() })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    fn rule_ix(&self, id: &str) -> Result<usize, CheckError> {
        self.model.rule(id).ok_or_else(|| CheckError::UnknownRule(id.to_string()))
    }

    /// Rules and event alphabet a query over `seed` events has to consider.
    fn scope(&self, seed: &[usize]) -> (Vec<usize>, Vec<usize>) {
        if self.cfg.slicing {
            let (rules, events) = slice::slice_indices(&self.model, seed);
            return (rules, events.into_iter().collect());
        }
        let mut events: Vec<usize> = seed.to_vec();
        for i in 0..self.model.rules.len() {
            events.extend(slice::rule_events(&self.model, i));
        }
        events.sort_unstable();
        events.dedup();
        ((0..self.model.rules.len()).collect(), events)
    }

    fn search(&self, seed: &[usize], goal: Goal) -> Option<IndexedTrace> {
        let (rules, alphabet) = self.scope(seed);
        Search::new(&self.model, &self.domains, &rules, &alphabet, self.cfg.max_events_per_tick, goal)
            .run(self.cfg.bound_ticks)
    }

    pub fn trigger_witness(&self, rule: &str) -> Result<Option<Trace>, CheckError> {
        let r = self.rule_ix(rule)?;
        Ok(self.trigger_witness_ix(r).map(|t| self.model.named_trace(&t)))
    }

    fn trigger_witness_ix(&self, r: usize) -> Option<IndexedTrace> {
        self.search(&slice::rule_events(&self.model, r), Goal::Trigger(r))
    }

    pub fn purpose_witness(&self, purpose: &str) -> Result<Option<Trace>, CheckError> {
        let p = self.model.purpose(purpose).ok_or_else(|| CheckError::UnknownPurpose(purpose.to_string()))?;
        let pur = &self.model.purposes[p];
        let seed: Vec<usize> = std::iter::once(pur.exists_event).chain(pur.while_event).collect();
        Ok(self.search(&seed, Goal::Purpose(p)).map(|t| self.model.named_trace(&t)))
    }

    /// Rule pairs `(i, j)`, `i < j`, where one can require an event the
    /// other can forbid. Only these can ever clash.
    pub fn candidate_pairs(&self) -> Vec<(usize, usize)> {
        let rules = &self.model.rules;
        let mut out = Vec::new();
        for i in 0..rules.len() {
            for j in i + 1..rules.len() {
                let opposed = rules[i]
                    .responses()
                    .any(|a| rules[j].responses().any(|b| a.event == b.event && a.polarity != b.polarity));
                if opposed {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn situational_pair(&self, a: usize, b: usize) -> Option<Diagnosis> {
        let mut seed = slice::rule_events(&self.model, a);
        seed.extend(slice::rule_events(&self.model, b));
        let trace = self.search(&seed, Goal::Clash(a, b))?;
        let clash = self.clash_in(&trace, a, b);
        let mut rules = vec![self.model.rules[a].id.clone(), self.model.rules[b].id.clone()];
        rules.sort();
        Some(Diagnosis {
            kind: DiagnosisKind::Situational,
            rules,
            bound: self.cfg.bound_ticks,
            witness: Some(self.model.named_trace(&trace)),
            clash: Some(clash),
            value_context: vec![],
        })
    }

    /// The clashing obligation pair completed at the last tick of `trace`.
    fn clash_in(&self, trace: &IndexedTrace, a: usize, b: usize) -> Clash {
        let acts = self.model.activations_ix(trace);
        let last = trace.len() as u64 - 1;
        for x in acts.iter().filter(|x| x.tick == last && (x.rule == a || x.rule == b)) {
            let partner = if x.rule == a { b } else { a };
            for y in acts.iter().filter(|y| y.rule == partner) {
                let (Some(ox), Some(oy)) = (&x.obligation, &y.obligation) else { continue };
                if ix_obligation_clash(ox, oy) {
                    let (req, forb) = if ox.polarity == Polarity::Require { (ox, oy) } else { (oy, ox) };
                    let require = self.model.obligation(req, self.cfg.bound_ticks);
                    let forbid = self.model.obligation(forb, self.cfg.bound_ticks);
                    return Clash {
                        event: require.event.clone(),
                        require_window: [require.window.start, require.window.end],
                        forbid_window: [forbid.window.start, forbid.window.end],
                        require,
                        forbid,
                    };
                }
            }
        }
        unreachable!("search reported a clash the semantics does not show")
    }

    pub fn situational(&self, rule: &str) -> Result<Option<Diagnosis>, CheckError> {
        let r = self.rule_ix(rule)?;
        Ok(self
            .candidate_pairs()
            .into_iter()
            .filter(|&(a, b)| a == r || b == r)
            .find_map(|(a, b)| self.situational_pair(a, b)))
    }

    /// Every finding, ordered by kind and then rule ids.
    pub fn check_all(&self, trace_map: Option<&TraceabilityMap>) -> Vec<Diagnosis> {
        enum Job {
            Vacuity(usize),
            Pair(usize, usize),
            Purpose(usize),
        }
        let mut jobs: Vec<Job> = (0..self.model.rules.len()).map(Job::Vacuity).collect();
        jobs.extend(self.candidate_pairs().into_iter().map(|(a, b)| Job::Pair(a, b)));
        jobs.extend((0..self.model.purposes.len()).map(Job::Purpose));

        let bound = self.cfg.bound_ticks;
        let absent = |kind, id: &str| Diagnosis {
            kind,
            rules: vec![id.to_string()],
            bound,
            witness: None,
            clash: None,
            value_context: vec![],
        };
        let mut found: Vec<Diagnosis> = jobs
            .par_iter()
            .filter_map(|job| match *job {
                Job::Vacuity(r) => self
                    .trigger_witness_ix(r)
                    .is_none()
                    .then(|| absent(DiagnosisKind::Vacuous, &self.model.rules[r].id)),
                Job::Pair(a, b) => self.situational_pair(a, b),
                Job::Purpose(p) => {
                    let id = &self.model.purposes[p].id;
                    self.purpose_witness(id).ok().flatten().is_none().then(|| absent(DiagnosisKind::PurposeUnsat, id))
                }
            })
            .collect();
        found.sort_by(|x, y| (x.kind, &x.rules).cmp(&(y.kind, &y.rules)));
        found.dedup_by(|x, y| x.kind == y.kind && x.rules == y.rules);
        if let Some(map) = trace_map {
            for d in &mut found {
                d.attach_value_context(map);
            }
        }
        found
    }
}

/// Shortest compliant, fully discharged trace that activates `rule_id`
/// with a live obligation.
pub fn find_trigger_witness(spec: &SleecSpec, rule_id: &str, cfg: &CheckConfig) -> Result<Option<Trace>, CheckError> {
    Checker::new(spec, cfg)?.trigger_witness(rule_id)
}

/// First situational conflict between `rule_id` and another rule.
pub fn find_situational_conflict(
    spec: &SleecSpec,
    rule_id: &str,
    cfg: &CheckConfig,
) -> Result<Option<Diagnosis>, CheckError> {
    Checker::new(spec, cfg)?.situational(rule_id)
}

/// Shortest compliant, fully discharged trace exhibiting the purpose.
pub fn check_purpose(spec: &SleecSpec, purpose_id: &str, cfg: &CheckConfig) -> Result<Option<Trace>, CheckError> {
    Checker::new(spec, cfg)?.purpose_witness(purpose_id)
}

/// All vacuity, situational and purpose findings.
pub fn check_spec(
    spec: &SleecSpec,
    cfg: &CheckConfig,
    trace_map: Option<&TraceabilityMap>,
) -> Result<Vec<Diagnosis>, CheckError> {
    Ok(Checker::new(spec, cfg)?.check_all(trace_map))
}
