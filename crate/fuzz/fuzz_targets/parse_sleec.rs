#![no_main]
use libfuzzer_sys::fuzz_target;

use sleecgo_core::sleec::{check_names_and_types, parse_sleec};

fuzz_target!(|data: &str| {
    if let Ok(spec) = parse_sleec(data) {
        let _ = check_names_and_types(&spec);
    }
});
