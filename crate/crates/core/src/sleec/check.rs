//! Name resolution and sort checking.

use std::collections::HashMap;
use std::fmt;

use super::ast::*;
use crate::span::{Ident, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemanticErrorKind {
    UndeclaredIdentifier,
    SortMismatch,
    DuplicateDefinition,
}

impl fmt::Display for SemanticErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemanticErrorKind::UndeclaredIdentifier => "undeclared identifier",
            SemanticErrorKind::SortMismatch => "sort mismatch",
            SemanticErrorKind::DuplicateDefinition => "duplicate definition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticError {
    pub kind: SemanticErrorKind,
    /// The offending identifier.
    pub ident: String,
    /// Rule or purpose the reference occurs in, if any.
    pub context: Option<String>,
    pub span: Span,
    pub message: String,
}

impl fmt::Display for SemanticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)?;
        if let Some(ctx) = &self.context {
            write!(f, " (in {ctx})")?;
        }
        Ok(())
    }
}

/// Declared events and measures, looked up by name.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    events: HashMap<String, ()>,
    measures: HashMap<String, Sort>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_spec(spec: &SleecSpec) -> Self {
        let mut v = Vocabulary::new();
        for e in &spec.events {
            v.add_event(e.name.as_str());
        }
        for m in &spec.measures {
            v.add_measure(m.name.as_str(), m.sort.clone());
        }
        v
    }

    pub fn add_event(&mut self, name: &str) {
        self.events.insert(name.to_string(), ());
    }

    pub fn add_measure(&mut self, name: &str, sort: Sort) {
        self.measures.insert(name.to_string(), sort);
    }

    pub fn is_event(&self, name: &str) -> bool {
        self.events.contains_key(name)
    }

    pub fn sort_of(&self, name: &str) -> Option<&Sort> {
        self.measures.get(name)
    }

    /// Errors for `ident` used where an event is expected.
    pub fn check_event(&self, ident: &Ident, context: Option<&str>, out: &mut Vec<SemanticError>) {
        if self.is_event(ident.as_str()) {
            return;
        }
        let (kind, message) = if self.measures.contains_key(ident.as_str()) {
            (SemanticErrorKind::SortMismatch, format!("`{ident}` is a measure, expected an event"))
        } else {
            (SemanticErrorKind::UndeclaredIdentifier, format!("event `{ident}` is not declared"))
        };
        out.push(SemanticError {
            kind,
            ident: ident.name.clone(),
            context: context.map(str::to_string),
            span: ident.span,
            message,
        });
    }

    pub fn check_condition(&self, cond: &Condition, context: Option<&str>, out: &mut Vec<SemanticError>) {
        let err = |kind, ident: &Ident, message: String| SemanticError {
            kind,
            ident: ident.name.clone(),
            context: context.map(str::to_string),
            span: ident.span,
            message,
        };
        match cond {
            Condition::Lit(_) => {}
            Condition::Not(c) => self.check_condition(c, context, out),
            Condition::And(a, b) | Condition::Or(a, b) => {
                self.check_condition(a, context, out);
                self.check_condition(b, context, out);
            }
            Condition::Atom(m) => match self.lookup_measure(m) {
                Err(e) => out.push(err(e.0, m, e.1)),
                Ok(Sort::Boolean) => {}
                Ok(s) => out.push(err(
                    SemanticErrorKind::SortMismatch,
                    m,
                    format!("`{m}` is {}, only boolean measures can stand alone", s.describe()),
                )),
            },
            Condition::Cmp { measure, op, value } => {
                let sort = match self.lookup_measure(measure) {
                    Err(e) => {
                        out.push(err(e.0, measure, e.1));
                        return;
                    }
                    Ok(s) => s,
                };
                match (sort, value) {
                    (Sort::Boolean, Literal::Bool(_)) if !op.is_ordering() => {}
                    (Sort::Boolean, Literal::Bool(_)) => out.push(err(
                        SemanticErrorKind::SortMismatch,
                        measure,
                        format!("ordering comparison `{}` on boolean measure `{measure}`", op.symbol()),
                    )),
                    (Sort::Numeric, Literal::Int(_)) => {}
                    (Sort::Scale(vals), Literal::Name(v)) => {
                        if !vals.iter().any(|x| x.name == v.name) {
                            out.push(err(
                                SemanticErrorKind::UndeclaredIdentifier,
                                v,
                                format!("`{v}` is not a value of the scale of `{measure}`"),
                            ));
                        }
                    }
                    (sort, lit) => out.push(err(
                        SemanticErrorKind::SortMismatch,
                        measure,
                        format!(
                            "`{measure}` is {} but is compared with {}",
                            sort.describe(),
                            match lit {
                                Literal::Bool(_) => "a boolean literal".to_string(),
                                Literal::Int(_) => "a numeric literal".to_string(),
                                Literal::Name(n) => format!("`{n}`"),
                            }
                        ),
                    )),
                }
            }
        }
    }

    fn lookup_measure(&self, m: &Ident) -> Result<&Sort, (SemanticErrorKind, String)> {
        if let Some(s) = self.measures.get(m.as_str()) {
            return Ok(s);
        }
        if self.is_event(m.as_str()) {
            Err((SemanticErrorKind::SortMismatch, format!("`{m}` is an event, expected a measure")))
        } else {
            Err((SemanticErrorKind::UndeclaredIdentifier, format!("measure `{m}` is not declared")))
        }
    }
}

/// Resolves every reference in `spec` and checks condition sorts. An empty
/// result means the spec is well-formed.
pub fn check_names_and_types(spec: &SleecSpec) -> Vec<SemanticError> {
    let mut errors = Vec::new();
    let mut seen: HashMap<&str, &'static str> = HashMap::new();
    let dup = |name: &Ident, what: &str, prev: &str| SemanticError {
        kind: SemanticErrorKind::DuplicateDefinition,
        ident: name.name.clone(),
        context: None,
        span: name.span,
        message: format!("{what} `{name}` is already defined as {prev}"),
    };
    for e in &spec.events {
        if let Some(prev) = seen.insert(e.name.as_str(), "an event") {
            errors.push(dup(&e.name, "event", prev));
        }
    }
    for m in &spec.measures {
        if let Some(prev) = seen.insert(m.name.as_str(), "a measure") {
            errors.push(dup(&m.name, "measure", prev));
        }
    }
    let mut ids: HashMap<&str, ()> = HashMap::new();
    for id in spec.rules.iter().map(|r| &r.id).chain(spec.purposes.iter().map(|p| &p.id)) {
        if ids.insert(id.as_str(), ()).is_some() {
            errors.push(dup(id, "rule", "another rule or purpose"));
        }
    }

    let vocab = Vocabulary::from_spec(spec);
    for r in &spec.rules {
        let ctx = Some(r.id.as_str());
        vocab.check_event(&r.trigger_event, ctx, &mut errors);
        if let Some(c) = &r.trigger_cond {
            vocab.check_condition(c, ctx, &mut errors);
        }
        vocab.check_event(&r.response.event, ctx, &mut errors);
        for d in &r.defeaters {
            vocab.check_condition(&d.cond, ctx, &mut errors);
            if let Some(resp) = &d.response {
                vocab.check_event(&resp.event, ctx, &mut errors);
            }
        }
    }
    for p in &spec.purposes {
        let ctx = Some(p.id.as_str());
        vocab.check_event(&p.exists_event, ctx, &mut errors);
        if let Some(c) = &p.cond {
            vocab.check_condition(c, ctx, &mut errors);
        }
        if let Some(w) = &p.while_event {
            vocab.check_event(w, ctx, &mut errors);
        }
    }
    errors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sleec::parse_sleec;

    fn errors(src: &str) -> Vec<SemanticError> {
        check_names_and_types(&parse_sleec(src).unwrap())
    }

    #[test]
    fn table_one_as_printed_has_two_unresolved_measures() {
        let src = "def_start
            event UserAsksStopTracking event StopTracking event CallCaregiver
            event AdaptationExecuted event ExplainAdaptation event UserRequestsPrivacy
            measure trackVitals: boolean
            measure riskLevel: scale(low, medium, high)
          def_end
          rule_start
            r1 := when UserAsksStopTracking and {trackVital} then StopTracking within 5 minutes
                  unless (riskLevel > medium) then CallCaregiver within 5 minutes
            r2 := when AdaptationExecuted then ExplainAdaptation within 2 minutes
            r3 := when UserRequestsPrivacy and (not userConsent) then not CallCaregiver within 5 minutes
          rule_end";
        let errs = errors(src);
        assert_eq!(errs.len(), 2, "{errs:?}");
        assert!(errs.iter().all(|e| e.kind == SemanticErrorKind::UndeclaredIdentifier));
        let pairs: Vec<(&str, &str)> = errs.iter().map(|e| (e.ident.as_str(), e.context.as_deref().unwrap())).collect();
        assert!(pairs.contains(&("trackVital", "r1")));
        assert!(pairs.contains(&("userConsent", "r3")));
    }

    #[test]
    fn no_rules_no_errors() {
        assert!(errors("def_start event A def_end rule_start rule_end").is_empty());
    }

    #[test]
    fn scale_against_number() {
        let errs = errors(
            "def_start event A measure riskLevel: scale(low, medium, high) def_end
             rule_start r := when A and riskLevel > 3 then A rule_end",
        );
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].kind, SemanticErrorKind::SortMismatch);
        assert_eq!(errs[0].ident, "riskLevel");
    }

    #[test]
    fn sort_rules() {
        let base =
            "def_start event A measure b: boolean measure n: numeric measure s: scale(lo, hi) def_end rule_start ";
        let ok = ["b", "b = true", "b <> false", "n >= -2", "s < hi", "not (b or s = lo)"];
        for c in ok {
            let errs = errors(&format!("{base} r := when A and {c} then A rule_end"));
            assert!(errs.is_empty(), "{c}: {errs:?}");
        }
        let bad = ["n", "s", "b < true", "n = true", "s = mid", "b = lo", "A"];
        for c in bad {
            let errs = errors(&format!("{base} r := when A and {c} then A rule_end"));
            assert_eq!(errs.len(), 1, "{c}: {errs:?}");
        }
    }

    #[test]
    fn duplicates_and_namespace_clash() {
        let errs = errors(
            "def_start event A event A measure a: boolean def_end
             rule_start r := when A then A r := when A then A rule_end",
        );
        let dups = errs.iter().filter(|e| e.kind == SemanticErrorKind::DuplicateDefinition).count();
        assert_eq!(dups, 2);
    }

    #[test]
    fn measure_used_as_event() {
        let errs = errors("def_start event A measure m: boolean def_end rule_start r := when m then A rule_end");
        assert_eq!(errs[0].kind, SemanticErrorKind::SortMismatch);
    }
}
