//! Index-based form of a well-typed spec.
//!
//! Events and measures are numbered in declaration order; every measure
//! value is an `i64` (booleans 0/1, scale values by position, numerics as
//! themselves). Both the compliance semantics and the checker's search
//! evaluate against this form.

use std::collections::HashMap;

use crate::sleec::{
    check_names_and_types, normalize_durations, Clause, CmpOp, Condition, Literal, Polarity, Response, SemanticError,
    SleecSpec, Sort, TickScale,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Atom(usize),
    Cmp(usize, CmpOp, i64),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, values: &[i64]) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Atom(m) => values[*m] != 0,
            Expr::Cmp(m, op, k) => op.apply(values[*m], *k),
            Expr::Not(e) => !e.eval(values),
            Expr::And(a, b) => a.eval(values) && b.eval(values),
            Expr::Or(a, b) => a.eval(values) || b.eval(values),
        }
    }

    pub fn measures(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Const(_) => {}
            Expr::Atom(m) | Expr::Cmp(m, _, _) => out.push(*m),
            Expr::Not(e) => e.measures(out),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.measures(out);
                b.measures(out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompiledResponse {
    pub polarity: Polarity,
    pub event: usize,
    /// Deadline in ticks; `None` means bounded only by the end of the trace.
    pub deadline: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct CompiledDefeater {
    pub cond: Expr,
    pub response: Option<CompiledResponse>,
}

#[derive(Debug, Clone)]
pub struct CompiledRule {
    pub id: String,
    pub trigger: usize,
    pub cond: Option<Expr>,
    pub base: CompiledResponse,
    pub defeaters: Vec<CompiledDefeater>,
}

/// Outcome of defeater resolution at one valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effective {
    Respond { clause: Clause, response: CompiledResponse },
    Cancelled { defeater: usize },
}

impl Effective {
    pub fn matched_defeater(&self) -> Option<usize> {
        match self {
            Effective::Respond { clause: Clause::Defeater(i), .. } | Effective::Cancelled { defeater: i } => Some(*i),
            _ => None,
        }
    }
}

impl CompiledRule {
    pub fn is_triggered(&self, events: &[usize], values: &[i64]) -> bool {
        events.contains(&self.trigger) && self.cond.as_ref().is_none_or(|c| c.eval(values))
    }

    /// The last defeater whose condition holds decides; without one the base
    /// response applies.
    pub fn effective(&self, values: &[i64]) -> Effective {
        match self.defeaters.iter().rposition(|d| d.cond.eval(values)) {
            None => Effective::Respond { clause: Clause::Base, response: self.base },
            Some(i) => match self.defeaters[i].response {
                Some(response) => Effective::Respond { clause: Clause::Defeater(i), response },
                None => Effective::Cancelled { defeater: i },
            },
        }
    }

    /// Measures read when this rule fires: trigger guard and all defeater
    /// conditions.
    pub fn measures(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(c) = &self.cond {
            c.measures(&mut out);
        }
        for d in &self.defeaters {
            d.cond.measures(&mut out);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn responses(&self) -> impl Iterator<Item = &CompiledResponse> {
        std::iter::once(&self.base).chain(self.defeaters.iter().filter_map(|d| d.response.as_ref()))
    }
}

#[derive(Debug, Clone)]
pub struct CompiledPurpose {
    pub id: String,
    pub exists_event: usize,
    pub cond: Option<Expr>,
    pub while_event: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct MeasureInfo {
    pub name: String,
    pub sort: Sort,
}

impl MeasureInfo {
    /// Value used when nothing constrains the measure.
    pub fn default_value(&self) -> i64 {
        0
    }

    pub fn scale_names(&self) -> Option<Vec<&str>> {
        match &self.sort {
            Sort::Scale(v) => Some(v.iter().map(|i| i.as_str()).collect()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    pub events: Vec<String>,
    pub measures: Vec<MeasureInfo>,
    pub rules: Vec<CompiledRule>,
    pub purposes: Vec<CompiledPurpose>,
    pub ticks: TickScale,
    event_ix: HashMap<String, usize>,
    measure_ix: HashMap<String, usize>,
}

impl Model {
    /// Compiles a spec; fails with the semantic errors if it is not
    /// well-typed.
    pub fn new(spec: &SleecSpec) -> Result<Model, Vec<SemanticError>> {
        let errors = check_names_and_types(spec);
        if !errors.is_empty() {
            return Err(errors);
        }
        let ticks = normalize_durations(spec);
        let events: Vec<String> = spec.events.iter().map(|e| e.name.name.clone()).collect();
        let measures: Vec<MeasureInfo> =
            spec.measures.iter().map(|m| MeasureInfo { name: m.name.name.clone(), sort: m.sort.clone() }).collect();
        let event_ix = events.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let measure_ix = measures.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
        let mut model =
            Model { events, measures, rules: Vec::new(), purposes: Vec::new(), ticks, event_ix, measure_ix };
        let rules = spec
            .rules
            .iter()
            .map(|r| CompiledRule {
                id: r.id.name.clone(),
                trigger: model.event(r.trigger_event.as_str()).unwrap(),
                cond: r.trigger_cond.as_ref().map(|c| model.compile(c)),
                base: model.compile_response(&r.response),
                defeaters: r
                    .defeaters
                    .iter()
                    .map(|d| CompiledDefeater {
                        cond: model.compile(&d.cond),
                        response: d.response.as_ref().map(|resp| model.compile_response(resp)),
                    })
                    .collect(),
            })
            .collect();
        let purposes = spec
            .purposes
            .iter()
            .map(|p| CompiledPurpose {
                id: p.id.name.clone(),
                exists_event: model.event(p.exists_event.as_str()).unwrap(),
                cond: p.cond.as_ref().map(|c| model.compile(c)),
                while_event: p.while_event.as_ref().map(|w| model.event(w.as_str()).unwrap()),
            })
            .collect();
        model.rules = rules;
        model.purposes = purposes;
        Ok(model)
    }

    pub fn event(&self, name: &str) -> Option<usize> {
        self.event_ix.get(name).copied()
    }

    pub fn measure(&self, name: &str) -> Option<usize> {
        self.measure_ix.get(name).copied()
    }

    pub fn rule(&self, id: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.id == id)
    }

    pub fn purpose(&self, id: &str) -> Option<usize> {
        self.purposes.iter().position(|p| p.id == id)
    }

    fn compile_response(&self, r: &Response) -> CompiledResponse {
        CompiledResponse {
            polarity: r.polarity,
            event: self.event(r.event.as_str()).unwrap(),
            deadline: r.deadline.map(|d| self.ticks.ticks(&d)),
        }
    }

    /// Compiles a condition already known to be well-typed against this
    /// model's vocabulary.
    pub fn compile(&self, c: &Condition) -> Expr {
        match c {
            Condition::Lit(b) => Expr::Const(*b),
            Condition::Atom(m) => Expr::Atom(self.measure(m.as_str()).unwrap()),
            Condition::Cmp { measure, op, value } => {
                let m = self.measure(measure.as_str()).unwrap();
                let k = match value {
                    Literal::Bool(b) => *b as i64,
                    Literal::Int(n) => *n,
                    Literal::Name(n) => self.scale_position(m, n.as_str()).unwrap(),
                };
                Expr::Cmp(m, *op, k)
            }
            Condition::Not(e) => Expr::Not(Box::new(self.compile(e))),
            Condition::And(a, b) => Expr::And(Box::new(self.compile(a)), Box::new(self.compile(b))),
            Condition::Or(a, b) => Expr::Or(Box::new(self.compile(a)), Box::new(self.compile(b))),
        }
    }

    pub fn scale_position(&self, measure: usize, value: &str) -> Option<i64> {
        match &self.measures[measure].sort {
            Sort::Scale(vals) => vals.iter().position(|v| v.name == value).map(|p| p as i64),
            _ => None,
        }
    }

    pub fn default_values(&self) -> Vec<i64> {
        self.measures.iter().map(|m| m.default_value()).collect()
    }
}
