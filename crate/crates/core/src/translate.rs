//! Compilation of goal models into SLEEC specifications.
//!
//! Achieve goals become rules, maintain goals become purposes, and every
//! task becomes a start/pursue/achieve rule chain plus an optional
//! obstacle prohibition. A [`TraceabilityMap`] records where each
//! generated rule came from.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::goal::{Goal, GoalModel, GoalType, Task, TaskEvents};
use crate::sleec::{
    print_sleec, CmpOp, Condition, Defeater, EventDef, Literal, Polarity, Purpose, Response, Rule, SleecSpec,
};
use crate::span::{Ident, Span};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("generated name `{name}` (from {source_element}) collides with an existing name")]
    NameCollision { name: String, source_element: String },
    #[error("task `{0}` has no index; number the tasks before translating")]
    UnindexedTask(String),
}

/// Task fluent: holds from `Start<Id>` until `Achieved<Id>`, initially false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FluentDecl {
    pub task_id: String,
    pub initiating_event: String,
    pub terminating_event: String,
    pub initially: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Template {
    P1,
    P2,
    T1,
    T2,
    T3,
    Obstacle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Generated rule or purpose id.
    pub generated: String,
    /// Goal or task id it was generated from.
    pub source: String,
    /// Attribute of the source element the template is keyed on.
    pub attribute: String,
    pub template: Template,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_principle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proxy: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceabilityMap {
    pub entries: Vec<TraceEntry>,
}

impl TraceabilityMap {
    pub fn lookup(&self, generated: &str) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.generated == generated)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("traceability map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalArtifact {
    Rule(Rule),
    Purpose(Purpose),
}

/// Rewrites `m = true` to `m`, `m = false` to `not m`, and the `<>` forms
/// accordingly.
pub fn normalize_condition(c: Condition) -> Condition {
    match c {
        Condition::Cmp { measure, op, value: Literal::Bool(b) } if matches!(op, CmpOp::Eq | CmpOp::Ne) => {
            if b == (op == CmpOp::Eq) {
                Condition::Atom(measure)
            } else {
                Condition::negate(Condition::Atom(measure))
            }
        }
        Condition::Not(inner) => Condition::negate(normalize_condition(*inner)),
        Condition::And(a, b) => Condition::and(normalize_condition(*a), normalize_condition(*b)),
        Condition::Or(a, b) => Condition::or(normalize_condition(*a), normalize_condition(*b)),
        other => other,
    }
}

fn guard(c: &Condition) -> Option<Condition> {
    match normalize_condition(c.clone()) {
        Condition::Lit(true) => None,
        other => Some(other),
    }
}

fn ident(name: impl Into<String>) -> Ident {
    Ident::new(name)
}

fn require(event: &str) -> Response {
    Response { polarity: Polarity::Require, event: ident(event), deadline: None }
}

/// `P<seq>`: a rule for achieve goals, a purpose for maintain goals.
pub fn translate_goal(goal: &Goal, seq: usize) -> GoalArtifact {
    let id = ident(format!("P{seq}"));
    match goal.goal_type {
        GoalType::Achieve => GoalArtifact::Rule(Rule {
            id,
            trigger_event: goal.context_event.clone(),
            trigger_cond: guard(&goal.condition),
            response: require(goal.event.as_str()),
            defeaters: vec![],
            span: Span::default(),
        }),
        GoalType::Maintain => GoalArtifact::Purpose(Purpose {
            id,
            exists_event: goal.event.clone(),
            cond: guard(&goal.condition),
            while_event: Some(goal.context_event.clone()),
            span: Span::default(),
        }),
    }
}

/// The three lifecycle rules of a task, the obstacle rule when the task
/// has an obstacle event, its four events and its fluent.
pub fn translate_task(task: &Task) -> Result<(Vec<Rule>, Vec<EventDef>, FluentDecl), TranslateError> {
    if task.index == 0 {
        return Err(TranslateError::UnindexedTask(task.id.name.clone()));
    }
    let k = task.index;
    let ev = TaskEvents::for_task(task.id.as_str());
    let rule = |suffix: &str, trigger: Ident, cond: Option<Condition>, response: Response, defeaters| Rule {
        id: ident(format!("RuleT{k}_{suffix}")),
        trigger_event: trigger,
        trigger_cond: cond,
        response,
        defeaters,
        span: Span::default(),
    };

    let post = normalize_condition(task.post_cond.clone());
    let mut rules = vec![
        rule("1", task.triggering_event.clone(), guard(&task.pre_cond), require(&ev.start), vec![]),
        rule(
            "2",
            ident(&ev.start),
            None,
            Response {
                polarity: Polarity::Require,
                event: ident(&ev.pursuing),
                deadline: Some(task.temporal_constraint),
            },
            vec![],
        ),
        rule(
            "3",
            ident(&ev.pursuing),
            guard(&post),
            require(&ev.achieved),
            vec![Defeater { cond: Condition::negate(post.clone()), response: Some(require(&ev.report_failure)) }],
        ),
    ];
    if let Some(obstacle) = &task.obstacle_event {
        rules.push(rule(
            "Obstacle",
            obstacle.clone(),
            None,
            Response { polarity: Polarity::Forbid, event: ident(&ev.pursuing), deadline: None },
            vec![],
        ));
    }
    let events = ev.all().iter().map(|e| EventDef { name: ident(*e) }).collect();
    let fluent = FluentDecl {
        task_id: task.id.name.clone(),
        initiating_event: ev.start.clone(),
        terminating_event: ev.achieved.clone(),
        initially: false,
    };
    Ok((rules, events, fluent))
}

/// Result of [`translate_model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub spec: SleecSpec,
    pub traceability: TraceabilityMap,
    pub fluents: Vec<FluentDecl>,
}

impl Translation {
    /// The spec as `.sleec` text, with fluent declarations as leading comments.
    pub fn to_sleec(&self) -> String {
        let mut out = String::new();
        for f in &self.fluents {
            let _ = writeln!(
                out,
                "// fluent {}: <{{{}}}, {{{}}}> initially {}",
                f.task_id, f.initiating_event, f.terminating_event, f.initially
            );
        }
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&print_sleec(&self.spec));
        out
    }
}

pub fn translate_model(model: &GoalModel) -> Result<Translation, TranslateError> {
    let mut spec =
        SleecSpec { events: model.events.clone(), measures: model.measures.clone(), rules: vec![], purposes: vec![] };
    let mut taken: HashSet<String> = model
        .events
        .iter()
        .map(|e| e.name.name.clone())
        .chain(model.measures.iter().map(|m| m.name.name.clone()))
        .collect();

    for (i, g) in model.goals.iter().enumerate() {
        match translate_goal(g, i + 1) {
            GoalArtifact::Rule(r) => spec.rules.push(r),
            GoalArtifact::Purpose(p) => spec.purposes.push(p),
        }
    }
    let mut fluents = Vec::new();
    for t in &model.tasks {
        let (rules, events, fluent) = translate_task(t)?;
        for e in events {
            if !taken.insert(e.name.name.clone()) {
                return Err(TranslateError::NameCollision {
                    name: e.name.name,
                    source_element: format!("task {}", t.id),
                });
            }
            spec.events.push(e);
        }
        spec.rules.extend(rules);
        fluents.push(fluent);
    }
    let traceability = build_traceability(model, &spec);
    Ok(Translation { spec, traceability, fluents })
}

/// Maps every generated rule and purpose back to its goal or task, with
/// the norm principle and proxy of the nearest normative ancestor.
pub fn build_traceability(model: &GoalModel, spec: &SleecSpec) -> TraceabilityMap {
    let mut entries = Vec::new();
    let mut push = |generated: &str, source: &str, attribute: &str, template: Template| {
        let norm = model.normative_ancestor(source).and_then(|g| g.normative.as_ref());
        entries.push(TraceEntry {
            generated: generated.to_string(),
            source: source.to_string(),
            attribute: attribute.to_string(),
            template,
            norm_principle: norm.map(|n| n.norm_principle.clone()),
            proxy: norm.map(|n| n.proxy.clone()),
        });
    };

    let goal_for = |id: &str| -> Option<&Goal> {
        let seq: usize = id.strip_prefix('P')?.parse().ok()?;
        model.goals.get(seq.checked_sub(1)?)
    };
    for r in &spec.rules {
        let id = r.id.as_str();
        if let Some(g) = goal_for(id) {
            push(id, g.id.as_str(), "event", Template::P2);
        } else if let Some((task, template)) = task_for(model, id) {
            let attribute = match template {
                Template::T1 => "triggering_event",
                Template::T2 => "temporal_constraint",
                Template::T3 => "post_cond",
                _ => "obstacle_event",
            };
            push(id, task.id.as_str(), attribute, template);
        }
    }
    for p in &spec.purposes {
        if let Some(g) = goal_for(p.id.as_str()) {
            push(p.id.as_str(), g.id.as_str(), "event", Template::P1);
        }
    }
    TraceabilityMap { entries }
}

fn task_for<'a>(model: &'a GoalModel, rule_id: &str) -> Option<(&'a Task, Template)> {
    let rest = rule_id.strip_prefix("RuleT")?;
    let (k, suffix) = rest.split_once('_')?;
    let k: usize = k.parse().ok()?;
    let template = match suffix {
        "1" => Template::T1,
        "2" => Template::T2,
        "3" => Template::T3,
        "Obstacle" => Template::Obstacle,
        _ => return None,
    };
    model.tasks.iter().find(|t| t.index == k).map(|t| (t, template))
}
