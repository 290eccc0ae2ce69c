//! Canonical text form of a [`SleecSpec`].

use std::fmt::Write as _;
use std::ops::Range;

use super::ast::*;

/// Which response of a rule an obligation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    Base,
    Defeater(usize),
}

pub fn print_sleec(spec: &SleecSpec) -> String {
    let mut out = String::new();
    out.push_str("def_start\n");
    for e in &spec.events {
        let _ = writeln!(out, "  event {}", e.name);
    }
    for m in &spec.measures {
        let _ = writeln!(out, "  measure {}: {}", m.name, print_sort(&m.sort));
    }
    out.push_str("def_end\n\nrule_start\n");
    for r in &spec.rules {
        let _ = writeln!(out, "  {}", print_rule(r));
    }
    out.push_str("rule_end\n");
    if !spec.purposes.is_empty() {
        out.push_str("\npurpose_start\n");
        for p in &spec.purposes {
            let _ = writeln!(out, "  {}", print_purpose(p));
        }
        out.push_str("purpose_end\n");
    }
    out
}

pub fn print_sort(sort: &Sort) -> String {
    match sort {
        Sort::Boolean => "boolean".into(),
        Sort::Numeric => "numeric".into(),
        Sort::Scale(vals) => {
            let names: Vec<&str> = vals.iter().map(|v| v.as_str()).collect();
            format!("scale({})", names.join(", "))
        }
    }
}

pub fn print_rule(rule: &Rule) -> String {
    render_rule(rule).text
}

/// A rule's single-line text along with the byte range of each response
/// clause, so reports can point at the clause that produced an obligation.
#[derive(Debug, Clone)]
pub struct RenderedRule {
    pub text: String,
    pub clauses: Vec<(Clause, Range<usize>)>,
}

impl RenderedRule {
    pub fn clause_range(&self, clause: Clause) -> Option<Range<usize>> {
        self.clauses.iter().find(|(c, _)| *c == clause).map(|(_, r)| r.clone())
    }
}

pub fn render_rule(rule: &Rule) -> RenderedRule {
    let mut text = format!("{} := when {}", rule.id, rule.trigger_event);
    if let Some(c) = &rule.trigger_cond {
        text.push_str(" and ");
        text.push_str(&print_guard(c));
    }
    text.push_str(" then ");
    let mut clauses = Vec::new();
    let start = text.len();
    text.push_str(&print_response(&rule.response));
    clauses.push((Clause::Base, start..text.len()));
    for (i, d) in rule.defeaters.iter().enumerate() {
        let _ = write!(text, " unless ({})", print_condition(&d.cond));
        if let Some(resp) = &d.response {
            text.push_str(" then ");
            let start = text.len();
            text.push_str(&print_response(resp));
            clauses.push((Clause::Defeater(i), start..text.len()));
        }
    }
    RenderedRule { text, clauses }
}

pub fn print_response(resp: &Response) -> String {
    let mut s = String::new();
    if resp.polarity == Polarity::Forbid {
        s.push_str("not ");
    }
    s.push_str(resp.event.as_str());
    if let Some(d) = &resp.deadline {
        let _ = write!(s, " within {}", print_duration(d));
    }
    s
}

pub fn print_duration(d: &Duration) -> String {
    format!("{} {}", d.magnitude, d.unit.word(d.magnitude))
}

pub fn print_purpose(p: &Purpose) -> String {
    let mut s = format!("{} := exists {}", p.id, p.exists_event);
    if let Some(c) = &p.cond {
        s.push_str(" and ");
        s.push_str(&print_guard(c));
    }
    if let Some(w) = &p.while_event {
        let _ = write!(s, " while {w}");
    }
    s
}

/// Conditions following `when E and`: simple ones bare, compound ones
/// parenthesized.
fn print_guard(c: &Condition) -> String {
    match c {
        Condition::Lit(_) | Condition::Atom(_) | Condition::Cmp { .. } => print_condition(c),
        _ => format!("({})", print_condition(c)),
    }
}

pub fn print_condition(c: &Condition) -> String {
    let mut s = String::new();
    write_cond(&mut s, c, 0);
    s
}

// or = 1, and = 2, not = 3
fn write_cond(out: &mut String, c: &Condition, min_prec: u8) {
    match c {
        Condition::Lit(b) => out.push_str(if *b { "true" } else { "false" }),
        Condition::Atom(m) => out.push_str(m.as_str()),
        Condition::Cmp { measure, op, value } => {
            let _ = write!(out, "{} {} ", measure, op.symbol());
            match value {
                Literal::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
                Literal::Int(n) => {
                    let _ = write!(out, "{n}");
                }
                Literal::Name(n) => out.push_str(n.as_str()),
            }
        }
        Condition::Not(inner) => {
            out.push_str("not ");
            write_cond(out, inner, 3);
        }
        Condition::And(a, b) => {
            let paren = min_prec > 2;
            if paren {
                out.push('(');
            }
            write_cond(out, a, 2);
            out.push_str(" and ");
            // Right operand nests strictly tighter so left association survives.
            write_cond(out, b, 3);
            if paren {
                out.push(')');
            }
        }
        Condition::Or(a, b) => {
            let paren = min_prec > 1;
            if paren {
                out.push('(');
            }
            write_cond(out, a, 1);
            out.push_str(" or ");
            write_cond(out, b, 2);
            if paren {
                out.push(')');
            }
        }
    }
}
