//! Goal models: functional, normative and adaptation goals refined into
//! tasks, written in the `.gsl` format.

mod model;
mod parser;
mod validate;

pub use model::*;
pub use parser::{parse_goal_model, GoalParseError};
pub use validate::{assign_task_indices, model_vocabulary, validate_goal_model, ValidationError, ValidationErrorKind};
