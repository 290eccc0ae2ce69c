#![no_main]
use libfuzzer_sys::fuzz_target;

use sleecgo_core::sleec::{parse_sleec, print_sleec};

fuzz_target!(|data: &str| {
    if let Ok(spec) = parse_sleec(data) {
        let printed = print_sleec(&spec);
        let again = parse_sleec(&printed).expect("printed spec must parse");
        assert_eq!(again, spec);
        assert_eq!(print_sleec(&again), printed);
    }
});
