use std::collections::{HashMap, HashSet};
use std::fmt;

use super::model::*;
use crate::sleec::{SemanticErrorKind, Vocabulary};
use crate::span::{Ident, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValidationErrorKind {
    CyclicRefinement,
    /// A root goal with no refinement.
    UnrefinedGoal,
    /// A refined-into goal that is itself never refined.
    NonTaskLeaf,
    UndeclaredIdentifier,
    MissingNormativeAttrs,
    SortMismatch,
    DuplicateDefinition,
    /// A task outside every refinement.
    OrphanTask,
    /// A goal or task refining more than one parent.
    MultipleParents,
    /// Task used as a refinement parent, or a child listed twice.
    InvalidRefinement,
}

impl fmt::Display for ValidationErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub kind: ValidationErrorKind,
    /// Goal, task or identifier the error is about.
    pub subject: String,
    pub message: String,
    pub span: Span,
}

impl ValidationError {
    fn new(kind: ValidationErrorKind, subject: &Ident, message: impl Into<String>) -> Self {
        ValidationError { kind, subject: subject.name.clone(), message: message.into(), span: subject.span }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.span.line, self.span.col, self.kind, self.message)
    }
}

/// Vocabulary plus the lifecycle events generated for every task.
pub fn model_vocabulary(model: &GoalModel) -> Vocabulary {
    let mut v = Vocabulary::new();
    for e in &model.events {
        v.add_event(e.name.as_str());
    }
    for m in &model.measures {
        v.add_measure(m.name.as_str(), m.sort.clone());
    }
    for t in &model.tasks {
        for e in TaskEvents::for_task(t.id.as_str()).all() {
            v.add_event(e);
        }
    }
    v
}

/// All problems found, sorted by position. Empty means the model is valid.
pub fn validate_goal_model(model: &GoalModel) -> Vec<ValidationError> {
    use ValidationErrorKind::*;
    let mut errs = Vec::new();

    // Declarations.
    let mut seen: HashMap<&str, &Ident> = HashMap::new();
    let names = model
        .events
        .iter()
        .map(|e| &e.name)
        .chain(model.measures.iter().map(|m| &m.name))
        .chain(model.goals.iter().map(|g| &g.id))
        .chain(model.tasks.iter().map(|t| &t.id));
    for id in names {
        if let Some(prev) = seen.insert(id.as_str(), id) {
            errs.push(ValidationError::new(
                DuplicateDefinition,
                id,
                format!("`{id}` is already defined at {}", prev.span),
            ));
        }
    }

    // Attribute references.
    let vocab = model_vocabulary(model);
    let mut sem = Vec::new();
    for g in &model.goals {
        let ctx = Some(g.id.as_str());
        vocab.check_event(&g.event, ctx, &mut sem);
        vocab.check_event(&g.context_event, ctx, &mut sem);
        vocab.check_condition(&g.condition, ctx, &mut sem);
        if let Some(n) = &g.normative {
            let mut missing = Vec::new();
            if n.source.is_empty() {
                missing.push("source");
            }
            if n.class.is_empty() {
                missing.push("class");
            }
            if n.norm_principle.is_empty() {
                missing.push("norm_principle");
            }
            if n.proxy.is_empty() {
                missing.push("proxy");
            }
            if n.added_value.is_empty() {
                missing.push("added_value");
            }
            if !missing.is_empty() {
                errs.push(ValidationError::new(
                    MissingNormativeAttrs,
                    &g.id,
                    format!("normative goal `{}` lacks {}", g.id, missing.join(", ")),
                ));
            }
        }
    }
    for t in &model.tasks {
        let ctx = Some(t.id.as_str());
        vocab.check_event(&t.triggering_event, ctx, &mut sem);
        vocab.check_condition(&t.pre_cond, ctx, &mut sem);
        vocab.check_condition(&t.post_cond, ctx, &mut sem);
        if let Some(o) = &t.obstacle_event {
            vocab.check_event(o, ctx, &mut sem);
        }
    }
    for e in sem {
        let kind = match e.kind {
            SemanticErrorKind::UndeclaredIdentifier => UndeclaredIdentifier,
            SemanticErrorKind::SortMismatch => SortMismatch,
            SemanticErrorKind::DuplicateDefinition => DuplicateDefinition,
        };
        errs.push(ValidationError { kind, subject: e.ident, message: e.message, span: e.span });
    }

    // Refinement structure.
    let is_goal = |id: &str| model.goal(id).is_some();
    let is_task = |id: &str| model.task(id).is_some();
    let mut parent_of: HashMap<&str, &str> = HashMap::new();
    let mut children_of: HashMap<&str, Vec<&str>> = HashMap::new();
    for r in &model.refinements {
        if is_task(r.parent.as_str()) {
            errs.push(ValidationError::new(
                InvalidRefinement,
                &r.parent,
                format!("task `{}` cannot be refined", r.parent),
            ));
        } else if !is_goal(r.parent.as_str()) {
            errs.push(ValidationError::new(UndeclaredIdentifier, &r.parent, format!("unknown goal `{}`", r.parent)));
        }
        let mut local: HashSet<&str> = HashSet::new();
        for c in &r.children {
            if !local.insert(c.as_str()) {
                errs.push(ValidationError::new(
                    InvalidRefinement,
                    c,
                    format!("`{c}` is listed twice in the refinement of `{}`", r.parent),
                ));
                continue;
            }
            if !is_goal(c.as_str()) && !is_task(c.as_str()) {
                errs.push(ValidationError::new(UndeclaredIdentifier, c, format!("unknown goal or task `{c}`")));
                continue;
            }
            if let Some(prev) = parent_of.insert(c.as_str(), r.parent.as_str()) {
                if prev != r.parent.as_str() {
                    errs.push(ValidationError::new(
                        MultipleParents,
                        c,
                        format!("`{c}` refines both `{prev}` and `{}`", r.parent),
                    ));
                }
            }
            children_of.entry(r.parent.as_str()).or_default().push(c.as_str());
        }
    }

    // Cycles: report each goal that can reach itself, once per cycle.
    let mut reported: HashSet<&str> = HashSet::new();
    for g in &model.goals {
        if reported.contains(g.id.as_str()) {
            continue;
        }
        if let Some(cycle) = find_cycle(g.id.as_str(), &children_of) {
            let path = cycle.join(" -> ");
            reported.extend(cycle.iter().copied());
            errs.push(ValidationError::new(CyclicRefinement, &g.id, format!("refinement cycle {path}")));
        }
    }

    for g in &model.goals {
        if children_of.contains_key(g.id.as_str()) {
            continue;
        }
        if parent_of.contains_key(g.id.as_str()) {
            errs.push(ValidationError::new(
                NonTaskLeaf,
                &g.id,
                format!("goal `{}` is a leaf of the refinement tree; leaves must be tasks", g.id),
            ));
        } else {
            errs.push(ValidationError::new(
                UnrefinedGoal,
                &g.id,
                format!("goal `{}` is never refined into tasks", g.id),
            ));
        }
    }
    for t in &model.tasks {
        if !parent_of.contains_key(t.id.as_str()) {
            errs.push(ValidationError::new(OrphanTask, &t.id, format!("task `{}` does not refine any goal", t.id)));
        }
    }

    errs.sort_by_key(|e| (e.span.line, e.span.col, e.kind));
    errs
}

fn find_cycle<'a>(start: &'a str, children_of: &HashMap<&'a str, Vec<&'a str>>) -> Option<Vec<&'a str>> {
    fn dfs<'a>(
        node: &'a str,
        start: &'a str,
        children_of: &HashMap<&'a str, Vec<&'a str>>,
        path: &mut Vec<&'a str>,
        visited: &mut HashSet<&'a str>,
    ) -> bool {
        for &c in children_of.get(node).map(Vec::as_slice).unwrap_or(&[]) {
            if c == start {
                path.push(c);
                return true;
            }
            if visited.insert(c) {
                path.push(c);
                if dfs(c, start, children_of, path, visited) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = vec![start];
    let mut visited = HashSet::new();
    dfs(start, start, children_of, &mut path, &mut visited).then_some(path)
}

/// Numbers tasks 1..n in declaration order.
pub fn assign_task_indices(mut model: GoalModel) -> GoalModel {
    for (i, t) in model.tasks.iter_mut().enumerate() {
        t.index = i + 1;
    }
    model
}
