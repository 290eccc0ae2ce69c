//! Parser for `.gsl` goal-model documents.
//!
//! ```text
//! system BSN
//!
//! vocabulary_start
//!   event MeetingUser
//!   measure patientConsentsFullTracking: boolean
//! vocabulary_end
//!
//! normative_goal VitalSignsConsent {
//!   type: achieve
//!   condition: purposeProtocolInformed = true & patientConsentsFullTracking = true
//!   event: AchievedObtainConsentFullTracking
//!   context_event: MeetingUser
//!   def: "Obtain the patient's consent before tracking vital signs"
//!   source: "Data-protection regulation"; "Clinical guidelines"
//!   class: Ethical; Legal; Social
//!   norm_principle: "Autonomy"
//!   proxy: "Assent/Consent"
//!   added_value: "Respects the patient's right to decide"
//! }
//!
//! task ObtainConsentFullTracking {
//!   def: "Ask the patient for consent to full tracking"
//!   triggering_event: MeetingUser
//!   temporal_constraint: 5 minutes
//!   post_cond: patientConsentsFullTracking
//! }
//!
//! refine VitalSignsConsent AND { InformPurposeAndProtocol, ObtainConsentFullTracking }
//! ```
//!
//! Attributes may appear in any order; each at most once.

use std::fmt;

use super::model::*;
use crate::lex::{tokenize, Cursor, ParseError, Tok};
use crate::sleec::{parse_condition_at, parse_declarations, parse_duration_at, parse_ident_at, Condition, Duration};
use crate::span::{Ident, Span};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GoalParseError {
    #[error("{0}")]
    Syntax(#[from] ParseError),
    #[error("{line}:{col}: {element} `{id}` is missing required attribute `{attribute}`")]
    MissingAttribute { element: &'static str, id: String, attribute: &'static str, line: u32, col: u32 },
}

impl GoalParseError {
    pub fn line_col(&self) -> (u32, u32) {
        match self {
            GoalParseError::Syntax(e) => (e.line, e.col),
            GoalParseError::MissingAttribute { line, col, .. } => (*line, *col),
        }
    }
}

const GOAL_KEYS: &[&str] = &["type", "condition", "event", "context_event", "def", "formal_def"];
const NORMATIVE_KEYS: &[&str] = &["source", "class", "norm_principle", "proxy", "added_value"];
const TASK_KEYS: &[&str] =
    &["def", "pre_cond", "triggering_event", "temporal_constraint", "post_cond", "obstacle_event"];

pub fn parse_goal_model(src: &str) -> Result<GoalModel, GoalParseError> {
    let mut p = Cursor::new(tokenize(src)?);
    p.expect_kw("system")?;
    let system_name = parse_ident_at(&mut p, "system name")?;
    p.expect_kw("vocabulary_start")?;
    let (events, measures) = parse_declarations(&mut p, "vocabulary_end")?;

    let mut model = GoalModel { system_name, events, measures, goals: vec![], tasks: vec![], refinements: vec![] };
    loop {
        let kind = match p.peek() {
            Tok::Ident(w) if w == "functional_goal" => Some(GoalKind::Functional),
            Tok::Ident(w) if w == "normative_goal" => Some(GoalKind::Normative),
            Tok::Ident(w) if w == "adaptation_goal" => Some(GoalKind::Adaptation),
            _ => None,
        };
        if let Some(kind) = kind {
            p.advance();
            model.goals.push(goal(&mut p, kind)?);
        } else if p.eat_kw("task") {
            model.tasks.push(task(&mut p)?);
        } else if p.eat_kw("refine") {
            model.refinements.push(refinement(&mut p)?);
        } else if *p.peek() == Tok::Eof {
            return Ok(model);
        } else {
            return Err(p
                .unexpected(&[
                    "`functional_goal`",
                    "`normative_goal`",
                    "`adaptation_goal`",
                    "`task`",
                    "`refine`",
                    "end of input",
                ])
                .into());
        }
    }
}

enum Value {
    Text(String),
    List(Vec<String>),
    Classes(Vec<NormClass>),
    Cond(Condition),
    Event(Ident),
    Duration(Duration),
    GoalType(GoalType),
}

/// Reads `{ key: value ... }`, parsing each value according to its key.
fn attributes(p: &mut Cursor, allowed: &[&str]) -> Result<Vec<(String, Span, Value)>, ParseError> {
    p.expect(Tok::LBrace, "`{`")?;
    let mut out: Vec<(String, Span, Value)> = Vec::new();
    loop {
        if p.eat(&Tok::RBrace) {
            return Ok(out);
        }
        let span = p.span();
        let key = match p.peek() {
            Tok::Ident(k) if allowed.contains(&k.as_str()) => k.clone(),
            Tok::Ident(k)
                if GOAL_KEYS.contains(&k.as_str())
                    || NORMATIVE_KEYS.contains(&k.as_str())
                    || TASK_KEYS.contains(&k.as_str()) =>
            {
                return Err(ParseError::at(span, format!("attribute `{k}` is not allowed here")));
            }
            _ => {
                let mut exp: Vec<String> = allowed.iter().map(|k| format!("`{k}`")).collect();
                exp.push("`}`".into());
                let exp: Vec<&str> = exp.iter().map(String::as_str).collect();
                return Err(p.unexpected(&exp));
            }
        };
        if out.iter().any(|(k, _, _)| *k == key) {
            return Err(ParseError::at(span, format!("attribute `{key}` given twice")));
        }
        p.advance();
        p.expect(Tok::Colon, "`:`")?;
        let value = match key.as_str() {
            "type" => {
                if p.eat_kw("achieve") {
                    Value::GoalType(GoalType::Achieve)
                } else if p.eat_kw("maintain") {
                    Value::GoalType(GoalType::Maintain)
                } else {
                    return Err(p.unexpected(&["`achieve`", "`maintain`"]));
                }
            }
            "condition" | "pre_cond" | "post_cond" => Value::Cond(parse_condition_at(p, true)?),
            "event" | "context_event" | "triggering_event" | "obstacle_event" => {
                Value::Event(parse_ident_at(p, "event name")?)
            }
            "temporal_constraint" => Value::Duration(parse_duration_at(p)?),
            "source" => Value::List(separated(p, text)?),
            "class" => Value::Classes(separated(p, norm_class)?),
            _ => Value::Text(text(p)?),
        };
        out.push((key, span, value));
    }
}

fn text(p: &mut Cursor) -> Result<String, ParseError> {
    match p.peek().clone() {
        Tok::Str(s) => {
            p.advance();
            Ok(s)
        }
        Tok::Ident(s) => {
            p.advance();
            Ok(s)
        }
        _ => Err(p.unexpected(&["string"])),
    }
}

fn norm_class(p: &mut Cursor) -> Result<NormClass, ParseError> {
    let span = p.span();
    let word = text(p)?;
    NormClass::from_word(&word).ok_or_else(|| {
        ParseError::at(
            span,
            format!("unknown norm class `{word}`; expected Social, Legal, Ethical, Empathetic or Cultural"),
        )
    })
}

/// One or more items separated by `;` or `,`.
fn separated<T>(
    p: &mut Cursor,
    mut item: impl FnMut(&mut Cursor) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    let mut out = vec![item(p)?];
    while p.eat(&Tok::Semi) || p.eat(&Tok::Comma) {
        out.push(item(p)?);
    }
    Ok(out)
}

struct Attrs {
    element: &'static str,
    id: String,
    span: Span,
    values: Vec<(String, Span, Value)>,
}

impl Attrs {
    fn take(&mut self, key: &str) -> Option<Value> {
        let i = self.values.iter().position(|(k, _, _)| k == key)?;
        Some(self.values.remove(i).2)
    }

    fn missing(&self, attribute: &'static str) -> GoalParseError {
        GoalParseError::MissingAttribute {
            element: self.element,
            id: self.id.clone(),
            attribute,
            line: self.span.line,
            col: self.span.col,
        }
    }

    fn text(&mut self, key: &'static str) -> Result<String, GoalParseError> {
        match self.take(key) {
            Some(Value::Text(s)) => Ok(s),
            _ => Err(self.missing(key)),
        }
    }

    fn cond(&mut self, key: &'static str) -> Result<Condition, GoalParseError> {
        match self.take(key) {
            Some(Value::Cond(c)) => Ok(c),
            _ => Err(self.missing(key)),
        }
    }

    fn event(&mut self, key: &'static str) -> Result<Ident, GoalParseError> {
        match self.take(key) {
            Some(Value::Event(e)) => Ok(e),
            _ => Err(self.missing(key)),
        }
    }
}

fn goal(p: &mut Cursor, kind: GoalKind) -> Result<Goal, GoalParseError> {
    let id = parse_ident_at(p, "goal id")?;
    let mut allowed = GOAL_KEYS.to_vec();
    if kind == GoalKind::Normative {
        allowed.extend_from_slice(NORMATIVE_KEYS);
    }
    let values = attributes(p, &allowed)?;
    let span = id.span.to(p.prev_span());
    let mut a = Attrs { element: "goal", id: id.name.clone(), span: id.span, values };

    let goal_type = match a.take("type") {
        Some(Value::GoalType(t)) => t,
        _ => return Err(a.missing("type")),
    };
    let condition = a.cond("condition")?;
    let event = a.event("event")?;
    let context_event = a.event("context_event")?;
    let def = a.text("def")?;
    let formal_def = a.take("formal_def").map(|v| match v {
        Value::Text(s) => s,
        _ => unreachable!(),
    });

    // Normative attributes that are partly present are left for validation
    // to report, so a model with several omissions gets one list of them.
    let normative = if kind == GoalKind::Normative {
        let mut n = NormativeAttrs::default();
        if let Some(Value::List(s)) = a.take("source") {
            n.source = s;
        }
        if let Some(Value::Classes(c)) = a.take("class") {
            n.class = c;
        }
        n.norm_principle = a.text("norm_principle").unwrap_or_default();
        n.proxy = a.text("proxy").unwrap_or_default();
        n.added_value = a.text("added_value").unwrap_or_default();
        Some(n)
    } else {
        None
    };

    Ok(Goal { id, kind, goal_type, condition, event, context_event, def, formal_def, normative, span })
}

fn task(p: &mut Cursor) -> Result<Task, GoalParseError> {
    let id = parse_ident_at(p, "task id")?;
    let values = attributes(p, TASK_KEYS)?;
    let span = id.span.to(p.prev_span());
    let mut a = Attrs { element: "task", id: id.name.clone(), span: id.span, values };

    let def = a.text("def")?;
    let pre_cond = match a.take("pre_cond") {
        Some(Value::Cond(c)) => c,
        _ => Condition::Lit(true),
    };
    let triggering_event = a.event("triggering_event")?;
    let temporal_constraint = match a.take("temporal_constraint") {
        Some(Value::Duration(d)) => d,
        _ => return Err(a.missing("temporal_constraint")),
    };
    let post_cond = a.cond("post_cond")?;
    let obstacle_event = match a.take("obstacle_event") {
        Some(Value::Event(e)) => Some(e),
        _ => None,
    };
    Ok(Task { id, def, pre_cond, triggering_event, temporal_constraint, post_cond, obstacle_event, index: 0, span })
}

fn refinement(p: &mut Cursor) -> Result<Refinement, ParseError> {
    let parent = parse_ident_at(p, "goal id")?;
    let mode = if p.eat_kw("AND") {
        RefineMode::And
    } else if p.eat_kw("OR") {
        RefineMode::Or
    } else {
        return Err(p.unexpected(&["`AND`", "`OR`"]));
    };
    p.expect(Tok::LBrace, "`{`")?;
    let mut children = vec![parse_ident_at(p, "goal or task id")?];
    while p.eat(&Tok::Comma) {
        children.push(parse_ident_at(p, "goal or task id")?);
    }
    p.expect(Tok::RBrace, "`}`")?;
    let span = parent.span.to(p.prev_span());
    Ok(Refinement { parent, mode, children, span })
}

impl fmt::Display for RefineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefineMode::And => "AND",
            RefineMode::Or => "OR",
        })
    }
}
