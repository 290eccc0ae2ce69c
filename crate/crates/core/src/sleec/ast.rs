//! Syntax tree for SLEEC documents.

use crate::span::{Ident, Span};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SleecSpec {
    pub events: Vec<EventDef>,
    pub measures: Vec<MeasureDef>,
    pub rules: Vec<Rule>,
    pub purposes: Vec<Purpose>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventDef {
    pub name: Ident,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureDef {
    pub name: Ident,
    pub sort: Sort,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sort {
    Boolean,
    Numeric,
    /// Ordered value names; order is declaration order.
    Scale(Vec<Ident>),
}

impl Sort {
    pub fn describe(&self) -> &'static str {
        match self {
            Sort::Boolean => "boolean",
            Sort::Numeric => "numeric",
            Sort::Scale(_) => "scale",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: Ident,
    pub trigger_event: Ident,
    pub trigger_cond: Option<Condition>,
    pub response: Response,
    pub defeaters: Vec<Defeater>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Require,
    Forbid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub polarity: Polarity,
    pub event: Ident,
    pub deadline: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defeater {
    pub cond: Condition,
    /// `None` cancels the obligation.
    pub response: Option<Response>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    pub fn apply(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Bool(bool),
    Int(i64),
    /// A scale value name, resolved against the measure's scale.
    Name(Ident),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Lit(bool),
    /// Bare boolean measure, sugar for `m = true`.
    Atom(Ident),
    Cmp {
        measure: Ident,
        op: CmpOp,
        value: Literal,
    },
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

impl Condition {
    pub fn and(a: Condition, b: Condition) -> Condition {
        Condition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Condition, b: Condition) -> Condition {
        Condition::Or(Box::new(a), Box::new(b))
    }

    pub fn negate(c: Condition) -> Condition {
        Condition::Not(Box::new(c))
    }

    /// Every measure identifier mentioned, in left-to-right order.
    pub fn measures(&self) -> Vec<&Ident> {
        let mut out = Vec::new();
        self.collect_measures(&mut out);
        out
    }

    fn collect_measures<'a>(&'a self, out: &mut Vec<&'a Ident>) {
        match self {
            Condition::Lit(_) => {}
            Condition::Atom(m) | Condition::Cmp { measure: m, .. } => out.push(m),
            Condition::Not(c) => c.collect_measures(out),
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.collect_measures(out);
                b.collect_measures(out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeUnit {
    Seconds,
    Minutes,
    Hours,
    Days,
}

impl TimeUnit {
    pub fn seconds(self) -> u64 {
        match self {
            TimeUnit::Seconds => 1,
            TimeUnit::Minutes => 60,
            TimeUnit::Hours => 3600,
            TimeUnit::Days => 86400,
        }
    }

    pub fn from_word(word: &str) -> Option<TimeUnit> {
        Some(match word {
            "second" | "seconds" | "sec" | "secs" => TimeUnit::Seconds,
            "minute" | "minutes" | "min" | "mins" => TimeUnit::Minutes,
            "hour" | "hours" => TimeUnit::Hours,
            "day" | "days" => TimeUnit::Days,
            _ => return None,
        })
    }

    pub fn word(self, magnitude: u64) -> &'static str {
        match (self, magnitude == 1) {
            (TimeUnit::Seconds, true) => "second",
            (TimeUnit::Seconds, false) => "seconds",
            (TimeUnit::Minutes, true) => "minute",
            (TimeUnit::Minutes, false) => "minutes",
            (TimeUnit::Hours, true) => "hour",
            (TimeUnit::Hours, false) => "hours",
            (TimeUnit::Days, true) => "day",
            (TimeUnit::Days, false) => "days",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Duration {
    pub magnitude: u64,
    pub unit: TimeUnit,
}

impl Duration {
    pub fn new(magnitude: u64, unit: TimeUnit) -> Self {
        Duration { magnitude, unit }
    }

    pub fn seconds(&self) -> u64 {
        self.magnitude * self.unit.seconds()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Purpose {
    pub id: Ident,
    pub exists_event: Ident,
    pub cond: Option<Condition>,
    pub while_event: Option<Ident>,
    pub span: Span,
}

impl SleecSpec {
    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id.name == id)
    }

    pub fn purpose(&self, id: &str) -> Option<&Purpose> {
        self.purposes.iter().find(|p| p.id.name == id)
    }

    pub fn measure(&self, name: &str) -> Option<&MeasureDef> {
        self.measures.iter().find(|m| m.name.name == name)
    }

    pub fn has_event(&self, name: &str) -> bool {
        self.events.iter().any(|e| e.name.name == name)
    }
}

impl Rule {
    /// Base response followed by every defeater response, in order.
    pub fn responses(&self) -> impl Iterator<Item = &Response> {
        std::iter::once(&self.response).chain(self.defeaters.iter().filter_map(|d| d.response.as_ref()))
    }

    /// Events this rule mentions as trigger or response.
    pub fn events(&self) -> Vec<&str> {
        let mut out = vec![self.trigger_event.as_str()];
        out.extend(self.responses().map(|r| r.event.as_str()));
        out
    }
}

/// Words that can never be used as identifiers.
pub const RESERVED: &[&str] =
    &["when", "then", "unless", "within", "not", "and", "or", "exists", "while", "event", "measure", "true", "false"];

pub fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}
