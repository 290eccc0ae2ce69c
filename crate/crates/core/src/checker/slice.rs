//! Cone-of-influence reduction.
//!
//! Rules interact only through shared events: a rule whose trigger and
//! responses are all outside a slice can never be activated by a trace
//! over the slice's events, and never constrains them.

use std::collections::BTreeSet;

use crate::semantics::Model;
use crate::sleec::SleecSpec;

/// Rule indices reachable from `seed_events` through shared events, in
/// declaration order, and the events they mention together with the seed.
pub(crate) fn slice_indices(model: &Model, seed_events: &[usize]) -> (Vec<usize>, BTreeSet<usize>) {
    let mut events: BTreeSet<usize> = seed_events.iter().copied().collect();
    let mut in_slice = vec![false; model.rules.len()];
    loop {
        let mut grew = false;
        for (i, r) in model.rules.iter().enumerate() {
            if in_slice[i] {
                continue;
            }
            let touches = events.contains(&r.trigger) || r.responses().any(|resp| events.contains(&resp.event));
            if touches {
                in_slice[i] = true;
                events.insert(r.trigger);
                events.extend(r.responses().map(|resp| resp.event));
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let rules = (0..model.rules.len()).filter(|&i| in_slice[i]).collect();
    (rules, events)
}

/// Events mentioned by rule `i` as trigger or response.
pub(crate) fn rule_events(model: &Model, i: usize) -> Vec<usize> {
    let r = &model.rules[i];
    std::iter::once(r.trigger).chain(r.responses().map(|resp| resp.event)).collect()
}

/// The rules sharing events, transitively, with `focus`. With `slicing`
/// off the spec is returned unchanged. Declarations and purposes are kept.
pub fn slice_relevant_rules(spec: &SleecSpec, focus: &[&str], slicing: bool) -> Result<SleecSpec, super::CheckError> {
    let model = Model::new(spec)?;
    if !slicing {
        return Ok(spec.clone());
    }
    let mut seed = Vec::new();
    for id in focus {
        let i = model.rule(id).ok_or_else(|| super::CheckError::UnknownRule(id.to_string()))?;
        seed.extend(rule_events(&model, i));
    }
    let (rules, _) = slice_indices(&model, &seed);
    Ok(SleecSpec { rules: rules.into_iter().map(|i| spec.rules[i].clone()).collect(), ..spec.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sleec::parse_sleec;

    const BSN_RULES: &str = "def_start
      event UserAsksStopTracking event StopTracking event CallCaregiver
      event AdaptationExecuted event ExplainAdaptation event UserRequestsPrivacy
      measure trackVitals: boolean measure riskLevel: scale(low, medium, high) measure userConsent: boolean
    def_end
    rule_start
      r1 := when UserAsksStopTracking and trackVitals then StopTracking within 5 minutes
            unless (riskLevel > medium) then CallCaregiver within 5 minutes
      r2 := when AdaptationExecuted then ExplainAdaptation within 2 minutes
      r3 := when UserRequestsPrivacy and (not userConsent) then not CallCaregiver within 5 minutes
    rule_end";

    fn ids(spec: &SleecSpec) -> Vec<&str> {
        spec.rules.iter().map(|r| r.id.as_str()).collect()
    }

    #[test]
    fn bsn_rules_slices() {
        let spec = parse_sleec(BSN_RULES).unwrap();
        assert_eq!(ids(&slice_relevant_rules(&spec, &["r1"], true).unwrap()), ["r1", "r3"]);
        assert_eq!(ids(&slice_relevant_rules(&spec, &["r3"], true).unwrap()), ["r1", "r3"]);
        assert_eq!(ids(&slice_relevant_rules(&spec, &["r2"], true).unwrap()), ["r2"]);
        assert_eq!(slice_relevant_rules(&spec, &["r2"], false).unwrap(), spec);
        assert!(slice_relevant_rules(&spec, &["r9"], true).is_err());
    }

    #[test]
    fn transitive_closure() {
        let spec = parse_sleec(
            "def_start event A event B event C event D event X def_end rule_start
             p := when A then B  q := when B then C  s := when C then not D  t := when X then X rule_end",
        )
        .unwrap();
        assert_eq!(ids(&slice_relevant_rules(&spec, &["p"], true).unwrap()), ["p", "q", "s"]);
        assert_eq!(ids(&slice_relevant_rules(&spec, &["t"], true).unwrap()), ["t"]);
    }
}
