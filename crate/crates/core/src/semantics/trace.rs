//! Discrete traces and their JSON form.
//!
//! ```json
//! [
//!   {"events": ["AdaptationExecuted"], "measures": {"riskLevel": "low", "trackVitals": true}},
//!   {"events": [], "measures": {"riskLevel": "high", "trackVitals": false}}
//! ]
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::model::Model;
use crate::sleec::Sort;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Num(i64),
    /// Scale value, by name.
    Scale(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Num(n) => write!(f, "{n}"),
            Value::Scale(s) => f.write_str(s),
        }
    }
}

pub type Valuation = BTreeMap<String, Value>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tick {
    pub events: BTreeSet<String>,
    pub measures: Valuation,
}

/// A finite timeline of ticks. Every tick carries a total valuation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace {
    pub ticks: Vec<Tick>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Trace, TraceError> {
        serde_json::from_str(text).map_err(|e| TraceError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialisation cannot fail")
    }

    pub fn prefix(&self, len: usize) -> Trace {
        Trace { ticks: self.ticks[..len.min(self.ticks.len())].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("malformed trace JSON: {0}")]
    Json(String),
    #[error("tick {tick}: undeclared event `{name}`")]
    UnknownEvent { tick: usize, name: String },
    #[error("tick {tick}: undeclared measure `{name}`")]
    UnknownMeasure { tick: usize, name: String },
    #[error("tick {tick}: measure `{name}` has no value")]
    MissingMeasure { tick: usize, name: String },
    #[error("tick {tick}: `{value}` is not a valid {sort} value for measure `{name}`")]
    BadValue { tick: usize, name: String, value: String, sort: &'static str },
}

/// A trace over a model's indices: per tick, the sorted event indices and
/// one value per measure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexedTrace {
    pub ticks: Vec<IndexedTick>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexedTick {
    pub events: Vec<usize>,
    pub values: Vec<i64>,
}

impl IndexedTrace {
    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }
}

impl Model {
    pub fn index_trace(&self, trace: &Trace) -> Result<IndexedTrace, TraceError> {
        let mut ticks = Vec::with_capacity(trace.len());
        for (t, tick) in trace.ticks.iter().enumerate() {
            let mut events = Vec::with_capacity(tick.events.len());
            for e in &tick.events {
                let ix = self.event(e).ok_or_else(|| TraceError::UnknownEvent { tick: t, name: e.clone() })?;
                events.push(ix);
            }
            events.sort_unstable();
            for name in tick.measures.keys() {
                if self.measure(name).is_none() {
                    return Err(TraceError::UnknownMeasure { tick: t, name: name.clone() });
                }
            }
            let mut values = Vec::with_capacity(self.measures.len());
            for (m, info) in self.measures.iter().enumerate() {
                let v = tick
                    .measures
                    .get(&info.name)
                    .ok_or_else(|| TraceError::MissingMeasure { tick: t, name: info.name.clone() })?;
                let bad = || TraceError::BadValue {
                    tick: t,
                    name: info.name.clone(),
                    value: v.to_string(),
                    sort: info.sort.describe(),
                };
                let x = match (&info.sort, v) {
                    (Sort::Boolean, Value::Bool(b)) => *b as i64,
                    (Sort::Numeric, Value::Num(n)) => *n,
                    (Sort::Scale(_), Value::Scale(s)) => self.scale_position(m, s).ok_or_else(bad)?,
                    _ => return Err(bad()),
                };
                values.push(x);
            }
            ticks.push(IndexedTick { events, values });
        }
        Ok(IndexedTrace { ticks })
    }

    pub fn value_of(&self, measure: usize, raw: i64) -> Value {
        match &self.measures[measure].sort {
            Sort::Boolean => Value::Bool(raw != 0),
            Sort::Numeric => Value::Num(raw),
            Sort::Scale(vals) => Value::Scale(vals[raw as usize].name.clone()),
        }
    }

    pub fn named_trace(&self, trace: &IndexedTrace) -> Trace {
        Trace {
            ticks: trace
                .ticks
                .iter()
                .map(|tick| Tick {
                    events: tick.events.iter().map(|&e| self.events[e].clone()).collect(),
                    measures: tick
                        .values
                        .iter()
                        .enumerate()
                        .map(|(m, &v)| (self.measures[m].name.clone(), self.value_of(m, v)))
                        .collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sleec::parse_sleec;

    fn model() -> Model {
        Model::new(
            &parse_sleec(
                "def_start event A event B measure b: boolean measure n: numeric
                 measure s: scale(lo, mid, hi) def_end rule_start rule_end",
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn json_shape() {
        let trace =
            Trace::from_json(r#"[{"events": ["B", "A"], "measures": {"b": true, "n": -4, "s": "mid"}}]"#).unwrap();
        let ix = model().index_trace(&trace).unwrap();
        assert_eq!(ix.ticks[0].events, vec![0, 1]);
        assert_eq!(ix.ticks[0].values, vec![1, -4, 1]);
        assert_eq!(model().named_trace(&ix), trace);
        let text = trace.to_json();
        assert_eq!(Trace::from_json(&text).unwrap(), trace);
    }

    #[test]
    fn empty_trace() {
        assert_eq!(Trace::from_json("[]").unwrap(), Trace::default());
    }

    #[test]
    fn malformed_traces() {
        let m = model();
        let cases = [
            (r#"[{"events": ["Z"], "measures": {"b": true, "n": 0, "s": "lo"}}]"#, "undeclared event"),
            (r#"[{"events": [], "measures": {"b": true, "n": 0}}]"#, "has no value"),
            (r#"[{"events": [], "measures": {"b": 1, "n": 0, "s": "lo"}}]"#, "not a valid"),
            (r#"[{"events": [], "measures": {"b": true, "n": 0, "s": "top"}}]"#, "not a valid"),
            (r#"[{"events": [], "measures": {"b": true, "n": 0, "s": "lo", "q": 1}}]"#, "undeclared measure"),
        ];
        for (src, msg) in cases {
            let err = m.index_trace(&Trace::from_json(src).unwrap()).unwrap_err();
            assert!(err.to_string().contains(msg), "{src}: {err}");
        }
        assert!(Trace::from_json(r#"{"events": []}"#).is_err());
        assert!(Trace::from_json(r#"[{"events": [], "measures": {}, "extra": 1}]"#).is_err());
    }
}
