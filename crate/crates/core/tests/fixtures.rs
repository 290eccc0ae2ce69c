mod common;

use common::*;
use sleecgo_core::checker::{check_purpose, check_spec, CheckConfig, DiagnosisKind};
use sleecgo_core::goal::{assign_task_indices, parse_goal_model, validate_goal_model};
use sleecgo_core::sleec::{check_names_and_types, parse_sleec};
use sleecgo_core::translate::{translate_model, Template, TraceabilityMap};

#[test]
fn uncorrected_bsn_rules_names_both_mistakes() {
    let spec = parse_sleec(&fixture("bsn.sleec")).unwrap();
    let errors = check_names_and_types(&spec);
    let names: Vec<&str> = errors.iter().map(|e| e.ident.as_str()).collect();
    assert_eq!(names, ["trackVital", "userConsent"]);
    assert!(check_names_and_types(&parse_sleec(&fixture("bsn_fixed.sleec")).unwrap()).is_empty());
}

#[test]
fn goal_fixtures_validate() {
    for name in ["bsn.gsl", "bsn_negotiated.gsl", "single_task.gsl"] {
        let model = parse_goal_model(&fixture(name)).unwrap();
        assert_eq!(validate_goal_model(&model), [], "{name}");
    }
}

#[test]
fn bsn_task_order_gives_t6() {
    let model = assign_task_indices(parse_goal_model(&fixture("bsn.gsl")).unwrap());
    let t = model.task("ApplyConsentPartialTrackingProtocol").unwrap();
    assert_eq!(t.index, 6);
    let spec = translate_model(&model).unwrap().spec;
    for id in ["RuleT6_1", "RuleT6_2", "RuleT6_3", "RuleT6_Obstacle"] {
        assert!(spec.rules.iter().any(|r| r.id.as_str() == id), "{id}");
    }
}

#[test]
fn golden_trace_map() {
    let map = TraceabilityMap::from_json(&fixture("bsn_translated.trace.json")).unwrap();
    let obstacle = map.lookup("RuleT6_Obstacle").unwrap();
    assert_eq!(obstacle.source, "ApplyConsentPartialTrackingProtocol");
    assert_eq!(obstacle.template, Template::Obstacle);
    assert_eq!(obstacle.norm_principle.as_deref(), Some("Autonomy"));
    assert_eq!(obstacle.proxy.as_deref(), Some("Assent/Consent"));
    let monitored = map.lookup("RuleT4_2").unwrap();
    assert_eq!(monitored.norm_principle, None);
    let model = assign_task_indices(parse_goal_model(&fixture("bsn.gsl")).unwrap());
    assert_eq!(translate_model(&model).unwrap().traceability, map);
}

#[test]
fn translated_bsn_fixtures_check() {
    let spec = parse_sleec(&fixture("bsn_translated.sleec")).unwrap();
    let found = check_spec(&spec, &CheckConfig::new(8), None).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(
        (found[0].kind, found[0].rules.as_slice()),
        (DiagnosisKind::Situational, &["RuleT6_2".to_string(), "RuleT6_Obstacle".to_string()][..])
    );
    let witness = found[0].witness.as_ref().unwrap();
    assert!(witness.ticks.last().unwrap().events.contains("PursuingTrackPatientOutdoors"));

    // the maintain goal's purpose can be exhibited
    let w = check_purpose(&spec, "P2", &CheckConfig::new(8)).unwrap().unwrap();
    assert!(w.ticks.iter().any(|t| t.events.contains("AchievedCollectVitalSigns")));

    let negotiated = parse_sleec(&fixture("bsn_negotiated_translated.sleec")).unwrap();
    assert!(check_spec(&negotiated, &CheckConfig::new(8), None).unwrap().is_empty());
    let unsliced = CheckConfig { slicing: false, ..CheckConfig::new(8) };
    assert!(check_spec(&negotiated, &unsliced, None).unwrap().is_empty());
}

#[test]
fn single_task_golden() {
    let model = assign_task_indices(parse_goal_model(&fixture("single_task.gsl")).unwrap());
    let t = translate_model(&model).unwrap();
    assert_eq!(t.to_sleec(), fixture("single_task.sleec"));
    assert_eq!(t.traceability, TraceabilityMap::from_json(&fixture("single_task.trace.json")).unwrap());
}
