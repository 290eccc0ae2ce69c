use std::fmt;

use crate::sleec::{Condition, Duration, EventDef, MeasureDef};
use crate::span::{Ident, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalModel {
    pub system_name: Ident,
    pub events: Vec<EventDef>,
    pub measures: Vec<MeasureDef>,
    pub goals: Vec<Goal>,
    pub tasks: Vec<Task>,
    pub refinements: Vec<Refinement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoalKind {
    Functional,
    Normative,
    Adaptation,
}

impl GoalKind {
    pub fn keyword(self) -> &'static str {
        match self {
            GoalKind::Functional => "functional_goal",
            GoalKind::Normative => "normative_goal",
            GoalKind::Adaptation => "adaptation_goal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoalType {
    Maintain,
    Achieve,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub id: Ident,
    pub kind: GoalKind,
    pub goal_type: GoalType,
    pub condition: Condition,
    pub event: Ident,
    pub context_event: Ident,
    pub def: String,
    /// Carried verbatim; never interpreted.
    pub formal_def: Option<String>,
    pub normative: Option<NormativeAttrs>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormClass {
    Social,
    Legal,
    Ethical,
    Empathetic,
    Cultural,
}

impl NormClass {
    pub const ALL: [NormClass; 5] =
        [NormClass::Social, NormClass::Legal, NormClass::Ethical, NormClass::Empathetic, NormClass::Cultural];

    pub fn from_word(w: &str) -> Option<NormClass> {
        NormClass::ALL.into_iter().find(|c| c.to_string() == w)
    }
}

impl fmt::Display for NormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormativeAttrs {
    pub source: Vec<String>,
    pub class: Vec<NormClass>,
    pub norm_principle: String,
    pub proxy: String,
    pub added_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: Ident,
    pub def: String,
    pub pre_cond: Condition,
    pub triggering_event: Ident,
    pub temporal_constraint: Duration,
    pub post_cond: Condition,
    pub obstacle_event: Option<Ident>,
    /// 1-based position in declaration order; 0 until
    /// [`assign_task_indices`](super::assign_task_indices) runs.
    pub index: usize,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefineMode {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub parent: Ident,
    pub mode: RefineMode,
    pub children: Vec<Ident>,
    pub span: Span,
}

impl GoalModel {
    pub fn goal(&self, id: &str) -> Option<&Goal> {
        self.goals.iter().find(|g| g.id.name == id)
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id.name == id)
    }

    /// Parent goal of a goal or task, following refinement edges upwards.
    pub fn parent_of(&self, id: &str) -> Option<&str> {
        self.refinements.iter().find(|r| r.children.iter().any(|c| c.name == id)).map(|r| r.parent.as_str())
    }

    /// Nearest normative goal at or above `id` in the refinement forest.
    pub fn normative_ancestor(&self, id: &str) -> Option<&Goal> {
        let mut cur = Some(id);
        let mut steps = 0;
        while let Some(c) = cur {
            if let Some(g) = self.goal(c) {
                if g.kind == GoalKind::Normative && g.normative.is_some() {
                    return Some(g);
                }
            }
            cur = self.parent_of(c);
            steps += 1;
            if steps > self.goals.len() + self.tasks.len() {
                // cyclic refinements; validation reports these
                return None;
            }
        }
        None
    }
}

/// `apply_consent-protocol` → `ApplyConsentProtocol`; already camel-cased
/// ids only get their first letter raised.
pub fn upper_camel(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    let mut raise = true;
    for c in id.chars() {
        if c == '_' || c == '-' {
            raise = true;
        } else if raise {
            out.extend(c.to_uppercase());
            raise = false;
        } else {
            out.push(c);
        }
    }
    out
}

/// The four lifecycle events generated for a task:
/// `Start<Id>`, `Pursuing<Id>`, `Achieved<Id>`, `ReportFailure<Id>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskEvents {
    pub start: String,
    pub pursuing: String,
    pub achieved: String,
    pub report_failure: String,
}

impl TaskEvents {
    pub fn for_task(id: &str) -> TaskEvents {
        let base = upper_camel(id);
        TaskEvents {
            start: format!("Start{base}"),
            pursuing: format!("Pursuing{base}"),
            achieved: format!("Achieved{base}"),
            report_failure: format!("ReportFailure{base}"),
        }
    }

    pub fn all(&self) -> [&str; 4] {
        [&self.start, &self.pursuing, &self.achieved, &self.report_failure]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn camel_case() {
        assert_eq!(upper_camel("ApplyConsentPartialTrackingProtocol"), "ApplyConsentPartialTrackingProtocol");
        assert_eq!(upper_camel("track_patient_outdoors"), "TrackPatientOutdoors");
        assert_eq!(upper_camel("inform"), "Inform");
    }

    #[test]
    fn lifecycle_names() {
        let ev = TaskEvents::for_task("obtain_consent");
        assert_eq!(
            ev.all(),
            ["StartObtainConsent", "PursuingObtainConsent", "AchievedObtainConsent", "ReportFailureObtainConsent"]
        );
    }
}
