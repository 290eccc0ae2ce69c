#![no_main]
use libfuzzer_sys::fuzz_target;

use sleecgo_core::translate::TraceabilityMap;

fuzz_target!(|data: &str| {
    if let Ok(map) = TraceabilityMap::from_json(data) {
        assert_eq!(TraceabilityMap::from_json(&map.to_json()).unwrap(), map);
    }
});
