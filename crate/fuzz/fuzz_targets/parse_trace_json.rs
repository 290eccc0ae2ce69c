#![no_main]
use libfuzzer_sys::fuzz_target;

use sleecgo_core::semantics::{is_compliant, Trace};
use sleecgo_core::sleec::parse_sleec;

const SPEC: &str = "def_start
  event AdaptationExecuted event ExplainAdaptation event CallCaregiver
  measure riskLevel: scale(low, medium, high)
  measure trackVitals: boolean
def_end
rule_start
  r2 := when AdaptationExecuted then ExplainAdaptation within 2 minutes
    unless (riskLevel > medium) then not CallCaregiver
rule_end";

fuzz_target!(|data: &str| {
    if let Ok(trace) = Trace::from_json(data) {
        let spec = parse_sleec(SPEC).unwrap();
        let _ = is_compliant(&spec, &trace);
        assert_eq!(Trace::from_json(&trace.to_json()).unwrap(), trace);
    }
});
