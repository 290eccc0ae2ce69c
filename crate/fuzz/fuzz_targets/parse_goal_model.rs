#![no_main]
use libfuzzer_sys::fuzz_target;

use sleecgo_core::goal::{assign_task_indices, parse_goal_model, validate_goal_model};
use sleecgo_core::sleec::check_names_and_types;
use sleecgo_core::translate::translate_model;

fuzz_target!(|data: &str| {
    let Ok(model) = parse_goal_model(data) else { return };
    if !validate_goal_model(&model).is_empty() {
        return;
    }
    // a valid model translates into a well-typed spec, or reports a name clash
    if let Ok(t) = translate_model(&assign_task_indices(model)) {
        assert!(check_names_and_types(&t.spec).is_empty());
    }
});
