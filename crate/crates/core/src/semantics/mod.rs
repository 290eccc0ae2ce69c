//! Discrete-trace semantics of SLEEC rules.
//!
//! A rule activates at tick `t` when its trigger event is in the tick's
//! event set and its guard holds under the tick's valuation. Defeaters are
//! resolved at the same tick: the last one whose condition holds decides
//! the response, and a defeater without `then` cancels the obligation.
//!
//! A response `E within d` activated at `t` obliges (or forbids) `E`
//! somewhere in the inclusive window `[t, t + d]`, with `d` in ticks. A
//! response without a deadline is bounded by the end of the trace only.

mod model;
mod trace;

pub use model::*;
pub use trace::*;

use serde::Serialize;
use thiserror::Error;

use crate::sleec::{Clause, Condition, Polarity, Response, Rule, SemanticError, SleecSpec, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("spec is not well-typed ({} error(s)), first: {}", .0.len(), .0[0])]
    IllTyped(Vec<SemanticError>),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("no rule named `{0}`")]
    UnknownRule(String),
}

impl From<Vec<SemanticError>> for SemanticsError {
    fn from(e: Vec<SemanticError>) -> Self {
        SemanticsError::IllTyped(e)
    }
}

/// A tick interval. `end` is inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    pub start: u64,
    pub end: u64,
}

/// Obligation over model indices. `end == None` means the window runs to
/// the end of whatever trace is considered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IxObligation {
    pub rule: usize,
    pub clause: Clause,
    pub polarity: Polarity,
    pub event: usize,
    pub start: u64,
    pub end: Option<u64>,
}

impl IxObligation {
    fn last_tick(&self, len: usize) -> Option<u64> {
        if len == 0 {
            return None;
        }
        let last = len as u64 - 1;
        Some(self.end.map_or(last, |e| e.min(last)))
    }

    /// True when the window reaches past the final tick of a trace of
    /// length `len`.
    pub fn extends_past(&self, len: usize) -> bool {
        self.end.is_none_or(|e| e >= len as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IxActivation {
    pub rule: usize,
    pub tick: u64,
    pub matched_defeater: Option<usize>,
    /// `None` when a defeater cancelled the obligation.
    pub obligation: Option<IxObligation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VerdictClass {
    Compliant,
    Pending,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IxVerdict {
    pub violated: Vec<IxObligation>,
    pub pending: Vec<IxObligation>,
    /// Require obligations met in their window: (obligation, first tick).
    pub discharged: Vec<(IxObligation, u64)>,
}

impl IxVerdict {
    pub fn class(&self) -> VerdictClass {
        if !self.violated.is_empty() {
            VerdictClass::Violated
        } else if !self.pending.is_empty() {
            VerdictClass::Pending
        } else {
            VerdictClass::Compliant
        }
    }
}

impl Model {
    /// Calls `f` for every activation of every rule, in tick order and then
    /// rule declaration order.
    pub fn for_each_activation(&self, trace: &IndexedTrace, mut f: impl FnMut(IxActivation)) {
        for (t, tick) in trace.ticks.iter().enumerate() {
            for (r, rule) in self.rules.iter().enumerate() {
                if !rule.is_triggered(&tick.events, &tick.values) {
                    continue;
                }
                let eff = rule.effective(&tick.values);
                let obligation = match eff {
                    Effective::Respond { clause, response } => Some(IxObligation {
                        rule: r,
                        clause,
                        polarity: response.polarity,
                        event: response.event,
                        start: t as u64,
                        end: response.deadline.map(|d| t as u64 + d),
                    }),
                    Effective::Cancelled { .. } => None,
                };
                f(IxActivation { rule: r, tick: t as u64, matched_defeater: eff.matched_defeater(), obligation });
            }
        }
    }

    pub fn activations_ix(&self, trace: &IndexedTrace) -> Vec<IxActivation> {
        let mut out = Vec::new();
        self.for_each_activation(trace, |a| out.push(a));
        out
    }

    /// First tick in the obligation's window (clipped to the trace) at
    /// which its event occurs.
    pub fn first_occurrence(&self, trace: &IndexedTrace, ob: &IxObligation) -> Option<u64> {
        let last = ob.last_tick(trace.len())?;
        (ob.start..=last).find(|&t| trace.ticks[t as usize].events.binary_search(&ob.event).is_ok())
    }

    pub fn verdict_ix(&self, trace: &IndexedTrace) -> IxVerdict {
        let mut v = IxVerdict { violated: Vec::new(), pending: Vec::new(), discharged: Vec::new() };
        self.for_each_activation(trace, |a| {
            let Some(ob) = a.obligation else { return };
            let hit = self.first_occurrence(trace, &ob);
            match (ob.polarity, hit) {
                (Polarity::Require, Some(t)) => v.discharged.push((ob, t)),
                (Polarity::Require, None) if ob.extends_past(trace.len()) => v.pending.push(ob),
                (Polarity::Require, None) => v.violated.push(ob),
                (Polarity::Forbid, Some(_)) => v.violated.push(ob),
                (Polarity::Forbid, None) => {}
            }
        });
        v
    }

    /// Verdict class without collecting obligations.
    pub fn verdict_class(&self, trace: &IndexedTrace) -> VerdictClass {
        let mut class = VerdictClass::Compliant;
        self.for_each_activation(trace, |a| {
            if class == VerdictClass::Violated {
                return;
            }
            let Some(ob) = a.obligation else { return };
            let hit = self.first_occurrence(trace, &ob).is_some();
            class = class.max(match (ob.polarity, hit) {
                (Polarity::Require, true) | (Polarity::Forbid, false) => VerdictClass::Compliant,
                (Polarity::Require, false) if ob.extends_past(trace.len()) => VerdictClass::Pending,
                _ => VerdictClass::Violated,
            });
        });
        class
    }

    pub fn obligation(&self, ob: &IxObligation, trace_len: usize) -> Obligation {
        let open_ended = ob.end.is_none();
        let end = ob.end.unwrap_or((trace_len as u64).saturating_sub(1).max(ob.start));
        Obligation {
            source_rule: self.rules[ob.rule].id.clone(),
            clause: ob.clause,
            polarity: ob.polarity,
            event: self.events[ob.event].clone(),
            window: Window { start: ob.start, end },
            open_ended,
        }
    }

    pub fn values_of(&self, v: &Valuation) -> Result<Vec<i64>, TraceError> {
        let tick = Tick { events: Default::default(), measures: v.clone() };
        let ix = self.index_trace(&Trace { ticks: vec![tick] })?;
        Ok(ix.ticks.into_iter().next().unwrap().values)
    }
}

/// Obligation created by one rule activation.
///
/// `window.end` is `start + deadline` for deadline responses. For responses
/// without a deadline `open_ended` is set and `window.end` is the last tick
/// of the trace the obligation was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Obligation {
    pub source_rule: String,
    #[serde(skip)]
    pub clause: Clause,
    pub polarity: Polarity,
    pub event: String,
    pub window: Window,
    pub open_ended: bool,
}

impl Obligation {
    pub fn activation_tick(&self) -> u64 {
        self.window.start
    }

    fn end_bound(&self) -> Option<u64> {
        (!self.open_ended).then_some(self.window.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationRecord {
    pub rule: String,
    pub tick: u64,
    pub matched_defeater: Option<usize>,
    /// `None` when cancelled by a defeater.
    pub effective: Option<Obligation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Compliant,
    Violated(Vec<Obligation>),
    Pending(Vec<Obligation>),
}

impl Verdict {
    pub fn class(&self) -> VerdictClass {
        match self {
            Verdict::Compliant => VerdictClass::Compliant,
            Verdict::Violated(_) => VerdictClass::Violated,
            Verdict::Pending(_) => VerdictClass::Pending,
        }
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EffectiveResponse {
    Respond(Response),
    Cancelled,
}

/// Evaluates a condition under a total valuation. Scale comparisons use
/// declaration order.
pub fn evaluate_condition(spec: &SleecSpec, cond: &Condition, v: &Valuation) -> Result<bool, SemanticsError> {
    let vocab = Vocabulary::from_spec(spec);
    let mut errs = Vec::new();
    vocab.check_condition(cond, None, &mut errs);
    if !errs.is_empty() {
        return Err(SemanticsError::IllTyped(errs));
    }
    let model = Model::new(&SleecSpec { rules: Vec::new(), purposes: Vec::new(), ..spec.clone() })?;
    Ok(model.compile(cond).eval(&model.values_of(v)?))
}

/// Resolves `rule`'s defeaters under `v`.
pub fn effective_response(spec: &SleecSpec, rule: &Rule, v: &Valuation) -> Result<EffectiveResponse, SemanticsError> {
    let model = Model::new(spec)?;
    let ix = model.rule(rule.id.as_str()).ok_or_else(|| SemanticsError::UnknownRule(rule.id.name.clone()))?;
    Ok(match model.rules[ix].effective(&model.values_of(v)?) {
        Effective::Respond { clause: Clause::Base, .. } => EffectiveResponse::Respond(rule.response.clone()),
        Effective::Respond { clause: Clause::Defeater(i), .. } => {
            EffectiveResponse::Respond(rule.defeaters[i].response.clone().expect("responding defeater"))
        }
        Effective::Cancelled { .. } => EffectiveResponse::Cancelled,
    })
}

pub fn activations(spec: &SleecSpec, trace: &Trace) -> Result<Vec<ActivationRecord>, SemanticsError> {
    let model = Model::new(spec)?;
    let ix = model.index_trace(trace)?;
    Ok(model
        .activations_ix(&ix)
        .into_iter()
        .map(|a| ActivationRecord {
            rule: model.rules[a.rule].id.clone(),
            tick: a.tick,
            matched_defeater: a.matched_defeater,
            effective: a.obligation.map(|o| model.obligation(&o, ix.len())),
        })
        .collect())
}

pub fn is_compliant(spec: &SleecSpec, trace: &Trace) -> Result<Verdict, SemanticsError> {
    let model = Model::new(spec)?;
    let ix = model.index_trace(trace)?;
    Ok(model.verdict(&ix))
}

impl Model {
    pub fn verdict(&self, trace: &IndexedTrace) -> Verdict {
        let v = self.verdict_ix(trace);
        let named = |obs: Vec<IxObligation>| obs.iter().map(|o| self.obligation(o, trace.len())).collect();
        match v.class() {
            VerdictClass::Violated => Verdict::Violated(named(v.violated)),
            VerdictClass::Pending => Verdict::Pending(named(v.pending)),
            VerdictClass::Compliant => Verdict::Compliant,
        }
    }
}

/// True when the two obligations concern the same event with opposite
/// polarities and the require window lies inside the forbid window, so no
/// way of meeting the requirement avoids the prohibition. Open-ended
/// windows extend indefinitely.
pub fn obligation_clash(o1: &Obligation, o2: &Obligation) -> bool {
    if o1.event != o2.event || o1.polarity == o2.polarity {
        return false;
    }
    let (req, forb) = if o1.polarity == Polarity::Require { (o1, o2) } else { (o2, o1) };
    windows_clash(req.window.start, req.end_bound(), forb.window.start, forb.end_bound())
}

/// Index-level form of [`obligation_clash`].
pub fn ix_obligation_clash(a: &IxObligation, b: &IxObligation) -> bool {
    if a.event != b.event || a.polarity == b.polarity {
        return false;
    }
    let (req, forb) = if a.polarity == Polarity::Require { (a, b) } else { (b, a) };
    windows_clash(req.start, req.end, forb.start, forb.end)
}

fn windows_clash(req_start: u64, req_end: Option<u64>, forb_start: u64, forb_end: Option<u64>) -> bool {
    if forb_start > req_start {
        return false;
    }
    match (req_end, forb_end) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(r), Some(f)) => r <= f,
    }
}
