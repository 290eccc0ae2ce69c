//! Goal-oriented requirements models compiled to SLEEC rules, with a
//! discrete-trace semantics and a bounded checker for vacuous and
//! situational conflicts.
//!
//! The pipeline is: parse a goal model ([`goal`]), validate it, translate
//! it to a rule spec ([`translate`]), then check the spec ([`checker`])
//! against the trace semantics in [`semantics`].

pub mod checker;
pub mod goal;
pub mod lex;
pub mod semantics;
pub mod sleec;
pub mod span;
pub mod translate;

pub use lex::ParseError;
pub use span::{Ident, Span};
