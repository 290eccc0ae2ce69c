//! Recursive-descent parser for `.sleec` documents.
//!
//! ```text
//! def_start
//!   event UserAsksStopTracking
//!   measure riskLevel: scale(low, medium, high)
//! def_end
//! rule_start
//!   r1 := when UserAsksStopTracking and trackVitals then StopTracking within 5 minutes
//!         unless (riskLevel > medium) then CallCaregiver within 5 minutes
//! rule_end
//! purpose_start
//!   P1 := exists ExplainAdaptation and trackVitals while AdaptationExecuted
//! purpose_end
//! ```

use super::ast::*;
use crate::lex::{tokenize, Cursor, ParseError, Tok};
use crate::span::Ident;

pub fn parse_sleec(src: &str) -> Result<SleecSpec, ParseError> {
    let mut p = Cursor::new(tokenize(src)?);
    let mut spec = SleecSpec::default();

    p.expect_kw("def_start")?;
    (spec.events, spec.measures) = declarations(&mut p, "def_end")?;

    p.expect_kw("rule_start")?;
    while !p.eat_kw("rule_end") {
        spec.rules.push(rule(&mut p)?);
    }

    if p.eat_kw("purpose_start") {
        while !p.eat_kw("purpose_end") {
            spec.purposes.push(purpose(&mut p)?);
        }
    }

    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&["`purpose_start`", "end of input"]));
    }
    Ok(spec)
}

/// Parses `event`/`measure` declarations up to and including `end_kw`.
pub(crate) fn declarations(p: &mut Cursor, end_kw: &str) -> Result<(Vec<EventDef>, Vec<MeasureDef>), ParseError> {
    let mut events = Vec::new();
    let mut measures = Vec::new();
    loop {
        if p.eat_kw(end_kw) {
            return Ok((events, measures));
        }
        if p.eat_kw("event") {
            let name = ident(p, "event name")?;
            if !name.name.starts_with(|c: char| c.is_ascii_uppercase()) {
                return Err(ParseError::at(
                    name.span,
                    format!("event name `{name}` must begin with an uppercase letter"),
                ));
            }
            events.push(EventDef { name });
        } else if p.eat_kw("measure") {
            let name = ident(p, "measure name")?;
            if !name.name.starts_with(|c: char| c.is_ascii_lowercase()) {
                return Err(ParseError::at(
                    name.span,
                    format!("measure name `{name}` must begin with a lowercase letter"),
                ));
            }
            p.expect(Tok::Colon, "`:`")?;
            let sort = sort(p)?;
            measures.push(MeasureDef { name, sort });
        } else {
            let end = format!("`{end_kw}`");
            return Err(p.unexpected(&["`event`", "`measure`", &end]));
        }
    }
}

pub(crate) fn ident(p: &mut Cursor, what: &str) -> Result<Ident, ParseError> {
    match p.peek().clone() {
        Tok::Ident(name) if is_reserved(&name) => {
            Err(ParseError::at(p.span(), format!("reserved word `{name}` cannot be used as {what}")))
        }
        Tok::Ident(name) => {
            let span = p.advance().span;
            Ok(Ident::with_span(name, span))
        }
        _ => Err(p.unexpected(&[what])),
    }
}

fn sort(p: &mut Cursor) -> Result<Sort, ParseError> {
    if p.eat_kw("boolean") {
        return Ok(Sort::Boolean);
    }
    if p.eat_kw("numeric") {
        return Ok(Sort::Numeric);
    }
    if p.at_kw("scale") {
        let start = p.advance().span;
        p.expect(Tok::LParen, "`(`")?;
        let mut values = vec![ident(p, "scale value")?];
        while p.eat(&Tok::Comma) {
            values.push(ident(p, "scale value")?);
        }
        p.expect(Tok::RParen, "`)`")?;
        if values.len() < 2 {
            return Err(ParseError::at(start, "a scale needs at least two values"));
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].iter().any(|w| w.name == v.name) {
                return Err(ParseError::at(v.span, format!("duplicate scale value `{v}`")));
            }
        }
        return Ok(Sort::Scale(values));
    }
    Err(p.unexpected(&["`boolean`", "`numeric`", "`scale`"]))
}

fn rule(p: &mut Cursor) -> Result<Rule, ParseError> {
    let id = ident(p, "rule id")?;
    p.expect(Tok::Assign, "`:=`")?;
    p.expect_kw("when")?;
    let trigger_event = ident(p, "trigger event")?;
    let trigger_cond = if p.eat_kw("and") { Some(condition(p, false)?) } else { None };
    if !p.eat_kw("then") {
        let expected: &[&str] = if trigger_cond.is_some() { &["`then`"] } else { &["`and`", "`then`"] };
        return Err(p.unexpected(expected));
    }
    let response = response(p)?;
    let mut defeaters = Vec::new();
    while p.eat_kw("unless") {
        let cond = condition(p, false)?;
        let response = if p.eat_kw("then") { Some(self::response(p)?) } else { None };
        defeaters.push(Defeater { cond, response });
    }
    let span = id.span.to(p.prev_span());
    Ok(Rule { id, trigger_event, trigger_cond, response, defeaters, span })
}

fn response(p: &mut Cursor) -> Result<Response, ParseError> {
    let polarity = if p.eat_kw("not") { Polarity::Forbid } else { Polarity::Require };
    let event = ident(p, "response event")?;
    let deadline = if p.eat_kw("within") { Some(duration(p)?) } else { None };
    Ok(Response { polarity, event, deadline })
}

pub(crate) fn duration(p: &mut Cursor) -> Result<Duration, ParseError> {
    let span = p.span();
    let magnitude = match *p.peek() {
        Tok::Int(n) => {
            p.advance();
            n
        }
        _ => return Err(p.unexpected(&["duration magnitude"])),
    };
    if magnitude <= 0 {
        return Err(ParseError::at(span, "deadline magnitude must be a positive integer"));
    }
    let unit = match p.peek() {
        Tok::Ident(w) => TimeUnit::from_word(w),
        _ => None,
    };
    let Some(unit) = unit else {
        return Err(p.unexpected(&["`seconds`", "`minutes`", "`hours`", "`days`"]));
    };
    p.advance();
    Ok(Duration::new(magnitude as u64, unit))
}

fn purpose(p: &mut Cursor) -> Result<Purpose, ParseError> {
    let id = ident(p, "purpose id")?;
    p.expect(Tok::Assign, "`:=`")?;
    p.expect_kw("exists")?;
    let exists_event = ident(p, "event")?;
    let cond = if p.eat_kw("and") { Some(condition(p, false)?) } else { None };
    let while_event = if p.eat_kw("while") { Some(ident(p, "context event")?) } else { None };
    let span = id.span.to(p.prev_span());
    Ok(Purpose { id, exists_event, cond, while_event, span })
}

/// Parses a condition. `allow_amp` admits `&` as a conjunction.
pub(crate) fn condition(p: &mut Cursor, allow_amp: bool) -> Result<Condition, ParseError> {
    let mut lhs = conjunction(p, allow_amp)?;
    while p.eat_kw("or") {
        let rhs = conjunction(p, allow_amp)?;
        lhs = Condition::or(lhs, rhs);
    }
    Ok(lhs)
}

fn conjunction(p: &mut Cursor, allow_amp: bool) -> Result<Condition, ParseError> {
    let mut lhs = unary(p, allow_amp)?;
    loop {
        if p.at_kw("and") || (allow_amp && *p.peek() == Tok::Amp) {
            p.advance();
            let rhs = unary(p, allow_amp)?;
            lhs = Condition::and(lhs, rhs);
        } else {
            return Ok(lhs);
        }
    }
}

fn unary(p: &mut Cursor, allow_amp: bool) -> Result<Condition, ParseError> {
    if p.eat_kw("not") {
        return Ok(Condition::negate(unary(p, allow_amp)?));
    }
    match p.peek().clone() {
        Tok::LParen => {
            p.advance();
            let c = condition(p, allow_amp)?;
            p.expect(Tok::RParen, "`)`")?;
            Ok(c)
        }
        // `{trackVital}` style grouping.
        Tok::LBrace => {
            p.advance();
            let c = condition(p, allow_amp)?;
            p.expect(Tok::RBrace, "`}`")?;
            Ok(c)
        }
        Tok::Ident(w) if w == "true" || w == "false" => {
            p.advance();
            Ok(Condition::Lit(w == "true"))
        }
        Tok::Ident(_) => {
            let measure = ident(p, "measure")?;
            let op = match p.peek() {
                Tok::Eq => CmpOp::Eq,
                Tok::Ne => CmpOp::Ne,
                Tok::Lt => CmpOp::Lt,
                Tok::Le => CmpOp::Le,
                Tok::Gt => CmpOp::Gt,
                Tok::Ge => CmpOp::Ge,
                _ => return Ok(Condition::Atom(measure)),
            };
            p.advance();
            let value = literal(p)?;
            Ok(Condition::Cmp { measure, op, value })
        }
        _ => Err(p.unexpected(&["`(`", "`{`", "`not`", "`true`", "`false`", "measure"])),
    }
}

fn literal(p: &mut Cursor) -> Result<Literal, ParseError> {
    match p.peek().clone() {
        Tok::Int(n) => {
            p.advance();
            Ok(Literal::Int(n))
        }
        Tok::Ident(w) if w == "true" || w == "false" => {
            p.advance();
            Ok(Literal::Bool(w == "true"))
        }
        Tok::Ident(_) => Ok(Literal::Name(ident(p, "scale value")?)),
        _ => Err(p.unexpected(&["integer", "`true`", "`false`", "scale value"])),
    }
}
