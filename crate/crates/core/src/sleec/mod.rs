//! The SLEEC rule language: syntax tree, parser, checker, tick
//! normalisation and canonical printer.

pub mod ast;
mod check;
mod parser;
mod printer;
mod ticks;

pub use ast::*;
pub use check::{check_names_and_types, SemanticError, SemanticErrorKind, Vocabulary};
pub use parser::parse_sleec;
pub(crate) use parser::{
    condition as parse_condition_at, declarations as parse_declarations, duration as parse_duration_at,
    ident as parse_ident_at,
};
pub use printer::{
    print_condition, print_duration, print_purpose, print_response, print_rule, print_sleec, print_sort, render_rule,
    Clause, RenderedRule,
};
pub use ticks::{normalize_durations, DeadlineTicks, TickScale};
