//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p sleecgo-core --test acceptance`. Timing limits
//! assume an optimised build; debug builds print the measured time too.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use sleecgo_core::checker::{
    check_spec, exhaustive_verdicts, find_situational_conflict, find_trigger_witness, minimum_bound, CheckConfig,
    Diagnosis, DiagnosisKind,
};
use sleecgo_core::goal::{assign_task_indices, parse_goal_model, validate_goal_model};
use sleecgo_core::semantics::{
    activations, effective_response, is_compliant, obligation_clash, EffectiveResponse, Obligation, Trace, Valuation,
    Value, Verdict,
};
use sleecgo_core::sleec::{parse_sleec, print_rule, print_sleec, Polarity, SleecSpec};
use sleecgo_core::translate::{translate_model, Translation};

/// Criterion 1 wall-clock limit.
const BSN_RULES_LIMIT: Duration = Duration::from_secs(10);
/// Criterion 4 wall-clock limit, for all 200 specs.
const AGREEMENT_LIMIT: Duration = Duration::from_secs(60);
const AGREEMENT_SPECS: usize = 200;
const MONOTONICITY_CASES: usize = 500;
const TEMPLATE_MODELS: usize = 50;
const SEED: u64 = 0x5EEC_60A1;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 situational conflict r1/r3", bsn_rules),
        ("2 translation template fidelity", templates),
        ("3 BSN reconstruction conflict and negotiation", bsn),
        ("4 search agrees with exhaustive oracle", agreement),
        ("5 monotonicity, witness replay, defeater order", monotonicity),
        ("6 round trips and translation determinism", round_trips),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.2} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2} s): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn translate(text: &str) -> Translation {
    let model = parse_goal_model(text).unwrap();
    assert!(validate_goal_model(&model).is_empty());
    translate_model(&assign_task_indices(model)).unwrap()
}

fn bsn_rules() -> Outcome {
    let spec = parse_sleec(&fixture("bsn_fixed.sleec")).unwrap();
    let started = Instant::now();
    let found = check_spec(&spec, &CheckConfig::new(6), None).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure!(elapsed < BSN_RULES_LIMIT, "took {elapsed:?}");
    ensure!(found.len() == 1, "{} diagnoses", found.len());
    let d = &found[0];
    ensure!(d.kind == DiagnosisKind::Situational && d.rules == ["r1", "r3"], "got {:?} {:?}", d.kind, d.rules);
    let w = d.witness.as_ref().ok_or("no witness")?;
    let t0 = &w.ticks[0];
    ensure!(
        t0.events.contains("UserAsksStopTracking") && t0.events.contains("UserRequestsPrivacy"),
        "tick 0 events {:?}",
        t0.events
    );
    let expect = [
        ("trackVitals", Value::Bool(true)),
        ("riskLevel", Value::Scale("high".into())),
        ("userConsent", Value::Bool(false)),
    ];
    for (m, v) in expect {
        ensure!(t0.measures[m] == v, "{m} = {}", t0.measures[m]);
    }
    let clash = d.clash.as_ref().ok_or("no clash")?;
    ensure!(clash.event == "CallCaregiver", "clash on {}", clash.event);
    ensure!(
        clash.forbid_window[0] <= clash.require_window[0] && clash.require_window[1] <= clash.forbid_window[1],
        "require {:?} not inside forbid {:?}",
        clash.require_window,
        clash.forbid_window
    );
    ensure!(obligation_clash(&clash.require, &clash.forbid), "obligations do not clash");
    ensure!(!is_compliant(&spec, w).unwrap().is_violated(), "witness is violated");

    // Exhaustive certification at a bound the oracle can reach. Witnesses
    // found there stay witnesses at bound 6, so every rule is triggerable.
    // Clashes need opposite polarities on one event, and r1/r3 on
    // CallCaregiver is the only such pair, so no other pair can clash at
    // any bound.
    let small = CheckConfig { max_events_per_tick: 2, ..CheckConfig::new(2) };
    let oracle = exhaustive_verdicts(&spec, &small).map_err(|e| e.to_string())?;
    ensure!(oracle.triggerable.iter().all(|&t| t), "oracle: some rule not triggerable");
    ensure!(oracle.clashes == BTreeSet::from([(0, 2)]), "oracle clashes {:?}", oracle.clashes);
    let mut opposed = Vec::new();
    for (i, a) in spec.rules.iter().enumerate() {
        for b in &spec.rules[i + 1..] {
            let ra: Vec<_> =
                std::iter::once(&a.response).chain(a.defeaters.iter().filter_map(|d| d.response.as_ref())).collect();
            let rb: Vec<_> =
                std::iter::once(&b.response).chain(b.defeaters.iter().filter_map(|d| d.response.as_ref())).collect();
            if ra.iter().any(|x| rb.iter().any(|y| x.event == y.event && x.polarity != y.polarity)) {
                opposed.push((a.id.name.clone(), b.id.name.clone()));
            }
        }
    }
    ensure!(opposed == [("r1".to_string(), "r3".to_string())], "opposed pairs {opposed:?}");
    Ok(format!(
        "one situational {{r1, r3}}, clash {:?} in {:?}, {elapsed:.2?}",
        clash.require_window, clash.forbid_window
    ))
}

/// Token sequence with grouping parentheses dropped.
fn tokens(s: &str) -> Vec<String> {
    s.replace(['(', ')'], " ").split_whitespace().map(str::to_string).collect()
}

fn templates() -> Outcome {
    let t = translate(&fixture("single_task.gsl"));
    ensure!(t.spec.rules.len() == 4, "{} rules", t.spec.rules.len());
    ensure!(t.to_sleec() == fixture("single_task.sleec"), "differs from golden single_task.sleec");
    let names = [
        ("RuleT1_1 :=", "T1"),
        ("RuleT1_2 :=", "T2"),
        ("RuleT1_3 :=", "T3"),
        ("RuleT1_Obstacle :=", "Obstacle"),
        ("MedicationDue", "TriggeringEvent"),
        ("StartRemindMedication", "StartTask"),
        ("PursuingRemindMedication", "PursuingTask"),
        ("ReportFailureRemindMedication", "ReportFailureTask"),
        ("AchievedRemindMedication", "AchievedTask"),
        ("10 minutes", "TemporalConstraint"),
        ("UserAsleep", "ObstacleEvent"),
        ("reminded", "PostCond"),
    ];
    let expected = [
        "T1 when TriggeringEvent and PreCond then StartTask",
        "T2 when StartTask then PursuingTask within TemporalConstraint",
        "T3 when PursuingTask and PostCond then AchievedTask unless not PostCond then ReportFailureTask",
        "Obstacle when ObstacleEvent then not PursuingTask",
    ];
    for (rule, template) in t.spec.rules.iter().zip(expected) {
        let printed = print_rule(rule);
        // the pre-condition is the one written `not reminded`
        let mut generic = printed.replacen("(not reminded)", "PreCond", usize::from(rule.id.name == "RuleT1_1"));
        for (concrete, placeholder) in names {
            generic = generic.replace(concrete, placeholder);
        }
        ensure!(tokens(&generic) == tokens(template), "`{printed}` does not match `{template}`");
    }
    let purpose = t.spec.purposes.first().ok_or("no purpose")?;
    let p = sleecgo_core::sleec::print_purpose(purpose)
        .replace("P1 :=", "P1")
        .replace("AchievedRemindMedication", "Event")
        .replace("reminded", "Condition")
        .replace("MedicationDue", "ContextEvent");
    ensure!(tokens(&p) == tokens("P1 exists Event and Condition while ContextEvent"), "purpose `{p}`");

    let mut rng = StdRng::seed_from_u64(SEED);
    for i in 0..TEMPLATE_MODELS {
        let m = random_goal_model(&mut rng);
        let t = translate(&m.text);
        let want = m.achieve_goals + 3 * m.tasks + m.obstacles;
        ensure!(
            t.spec.rules.len() == want,
            "model {i}: {} rules, formula gives {want}\n{}",
            t.spec.rules.len(),
            m.text
        );
        ensure!(t.spec.purposes.len() == m.maintain_goals, "model {i}: purpose count");
    }
    Ok(format!("4 rules match templates and golden file; g_a + 3t + t_o holds on {TEMPLATE_MODELS} random models"))
}

fn pair(d: &Diagnosis) -> Vec<&str> {
    d.rules.iter().map(String::as_str).collect()
}

fn bsn() -> Outcome {
    let before = translate(&fixture("bsn.gsl"));
    ensure!(before.to_sleec() == fixture("bsn_translated.sleec"), "differs from golden bsn_translated.sleec");
    let found =
        check_spec(&before.spec, &CheckConfig::new(8), Some(&before.traceability)).map_err(|e| e.to_string())?;
    let hit = found
        .iter()
        .find(|d| d.kind == DiagnosisKind::Situational && pair(d) == ["RuleT6_2", "RuleT6_Obstacle"])
        .ok_or_else(|| format!("no RuleT6_2/RuleT6_Obstacle conflict in {found:?}"))?;
    ensure!(!hit.value_context.is_empty(), "no value context");

    let after = translate(&fixture("bsn_negotiated.gsl"));
    ensure!(
        after.to_sleec() == fixture("bsn_negotiated_translated.sleec"),
        "differs from golden negotiated translation"
    );
    let found_after = check_spec(&after.spec, &CheckConfig::new(8), None).map_err(|e| e.to_string())?;
    ensure!(
        !found_after.iter().any(|d| d.rules.iter().any(|r| r == "RuleT6_Obstacle")),
        "conflict still reported after negotiation"
    );
    Ok(format!(
        "{} finding(s) before negotiation incl. {{RuleT6_2, RuleT6_Obstacle}}, {} after (reconstructed model)",
        found.len(),
        found_after.len()
    ))
}

fn opposite_pairs(spec: &SleecSpec) -> usize {
    let mut n = 0;
    for (i, a) in spec.rules.iter().enumerate() {
        for b in &spec.rules[i + 1..] {
            let ra = std::iter::once(&a.response).chain(a.defeaters.iter().filter_map(|d| d.response.as_ref()));
            let rb: Vec<_> =
                std::iter::once(&b.response).chain(b.defeaters.iter().filter_map(|d| d.response.as_ref())).collect();
            n += ra.into_iter().any(|x| rb.iter().any(|y| x.event == y.event && x.polarity != y.polarity)) as usize;
        }
    }
    n
}

/// Trigger witnesses are compliant and activate the rule; conflict
/// witnesses are not violated and show the reported clash.
fn validate_witnesses(
    spec: &SleecSpec,
    rule: &str,
    trigger: Option<&Trace>,
    conflict: Option<&Diagnosis>,
) -> Result<(), String> {
    if let Some(w) = trigger {
        ensure!(is_compliant(spec, w).unwrap() == Verdict::Compliant, "{rule}: trigger witness not compliant");
        let acts = activations(spec, w).unwrap();
        ensure!(acts.iter().any(|a| a.rule == rule && a.effective.is_some()), "{rule}: witness does not activate it");
    }
    if let Some(d) = conflict {
        let w = d.witness.as_ref().ok_or("no witness")?;
        ensure!(!is_compliant(spec, w).unwrap().is_violated(), "{rule}: conflict witness violated");
        let c = d.clash.as_ref().ok_or("no clash")?;
        ensure!(obligation_clash(&c.require, &c.forbid), "{rule}: reported obligations do not clash");
        // open-ended windows are displayed up to the bound, so compare
        // their ends only when they are closed
        let key = |o: &Obligation| {
            (
                o.source_rule.clone(),
                o.clause,
                o.polarity,
                o.event.clone(),
                o.window.start,
                (!o.open_ended).then_some(o.window.end),
            )
        };
        let obligations: Vec<_> =
            activations(spec, w).unwrap().iter().filter_map(|a| a.effective.as_ref()).map(key).collect();
        ensure!(
            obligations.contains(&key(&c.require)) && obligations.contains(&key(&c.forbid)),
            "{rule}: clash obligations {:?} / {:?} not produced by the witness: {obligations:?}",
            c.require,
            c.forbid
        );
    }
    Ok(())
}

fn agreement() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 4);
    let started = Instant::now();
    let (mut vacuous, mut clashing, mut prefixes) = (0, 0, 0u64);
    for i in 0..AGREEMENT_SPECS {
        let spec = random_spec(&mut rng, SMALL);
        let min = minimum_bound(&spec).unwrap();
        let cfg = CheckConfig {
            max_events_per_tick: rng.gen_range(1..=2),
            ..CheckConfig::new(rng.gen_range(min..=4.max(min)))
        };
        let oracle = exhaustive_verdicts(&spec, &cfg).map_err(|e| e.to_string())?;
        prefixes += oracle.prefixes;
        let ctx = || {
            format!("spec {i} at bound {} (K = {}):\n{}", cfg.bound_ticks, cfg.max_events_per_tick, print_sleec(&spec))
        };
        for (r, rule) in spec.rules.iter().enumerate() {
            let id = rule.id.as_str();
            let trigger = find_trigger_witness(&spec, id, &cfg).unwrap();
            ensure!(
                trigger.is_some() == oracle.triggerable[r],
                "{id} triggerable: search {} oracle {}; {}",
                trigger.is_some(),
                oracle.triggerable[r],
                ctx()
            );
            let conflict = find_situational_conflict(&spec, id, &cfg).unwrap();
            let partners = oracle.clash_partners(id);
            ensure!(
                conflict.is_some() == !partners.is_empty(),
                "{id} conflict: search {:?} oracle {partners:?}; {}",
                conflict.as_ref().map(|d| &d.rules),
                ctx()
            );
            if let Some(d) = &conflict {
                let other = d.rules.iter().find(|x| *x != id).unwrap();
                ensure!(
                    partners.contains(&other.as_str()),
                    "{id}: partner {other} not in oracle {partners:?}; {}",
                    ctx()
                );
            }
            validate_witnesses(&spec, id, trigger.as_ref(), conflict.as_ref())
                .map_err(|e| format!("{e}; {}", ctx()))?;
        }
        let found = check_spec(&spec, &cfg, None).unwrap();
        let reported: BTreeSet<(usize, usize)> = found
            .iter()
            .filter(|d| d.kind == DiagnosisKind::Situational)
            .map(|d| {
                let ix = |id: &str| spec.rules.iter().position(|r| r.id.as_str() == id).unwrap();
                (ix(&d.rules[0]).min(ix(&d.rules[1])), ix(&d.rules[0]).max(ix(&d.rules[1])))
            })
            .collect();
        ensure!(reported == oracle.clashes, "check_spec pairs {reported:?} oracle {:?}; {}", oracle.clashes, ctx());
        ensure!(opposite_pairs(&spec) >= reported.len(), "clash without opposed responses");
        vacuous += found.iter().filter(|d| d.kind == DiagnosisKind::Vacuous).count();
        clashing += reported.len();
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < AGREEMENT_LIMIT, "took {elapsed:?}");
    Ok(format!(
        "{AGREEMENT_SPECS} specs agree ({vacuous} vacuous rules, {clashing} clashing pairs, {prefixes} oracle prefixes) in {elapsed:.2?}"
    ))
}

/// The effective response by direct reading: the last defeater whose
/// condition holds wins.
fn last_matching(spec: &SleecSpec, rule: &sleecgo_core::sleec::Rule, v: &Valuation) -> EffectiveResponse {
    let mut out = EffectiveResponse::Respond(rule.response.clone());
    for d in &rule.defeaters {
        if sleecgo_core::semantics::evaluate_condition(spec, &d.cond, v).unwrap() {
            out = d.response.clone().map_or(EffectiveResponse::Cancelled, EffectiveResponse::Respond);
        }
    }
    out
}

fn monotonicity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 5);
    let mut violated = 0;
    for i in 0..MONOTONICITY_CASES {
        let spec = random_spec(&mut rng, SMALL);
        let trace = random_trace(&mut rng, &spec, 7);
        let mut seen_violation = false;
        for len in 0..=trace.len() {
            let v = is_compliant(&spec, &trace.prefix(len)).unwrap();
            ensure!(!seen_violation || v.is_violated(), "case {i}: violation lost at length {len}");
            seen_violation = v.is_violated();
        }
        violated += seen_violation as usize;
        if i % 10 == 0 {
            let cfg = CheckConfig::new(minimum_bound(&spec).unwrap() + 1);
            for rule in &spec.rules {
                let id = rule.id.as_str();
                let trigger = find_trigger_witness(&spec, id, &cfg).unwrap();
                let conflict = find_situational_conflict(&spec, id, &cfg).unwrap();
                validate_witnesses(&spec, id, trigger.as_ref(), conflict.as_ref())
                    .map_err(|e| format!("case {i}: {e}"))?;
            }
        }
    }

    let chain = parse_sleec(
        "def_start event S event A event B event C measure x: boolean measure y: boolean measure z: boolean def_end
         rule_start
           r := when S then A within 1 minutes
             unless x then B within 1 minutes
             unless y
             unless z then C within 2 minutes
         rule_end",
    )
    .unwrap();
    let rule = &chain.rules[0];
    let mut cancelled = 0;
    for bits in 0..8u8 {
        let v: Valuation =
            ["x", "y", "z"].iter().enumerate().map(|(k, m)| (m.to_string(), Value::Bool(bits >> k & 1 == 1))).collect();
        let got = effective_response(&chain, rule, &v).unwrap();
        ensure!(got == last_matching(&chain, rule, &v), "defeater chain under {v:?}: {got:?}");
        cancelled += (got == EffectiveResponse::Cancelled) as usize;
        if let EffectiveResponse::Respond(resp) = got {
            ensure!(resp.polarity == Polarity::Require, "unexpected polarity");
        }
    }
    ensure!(cancelled == 2, "expected y-without-z to cancel twice, got {cancelled}");
    Ok(format!("{MONOTONICITY_CASES} traces ({violated} violated) monotone; witnesses replay; chain of 3 resolved by last match"))
}

fn round_trips() -> Outcome {
    let corpus = sleec_fixtures();
    ensure!(corpus.len() >= 6, "only {} fixtures", corpus.len());
    for (name, text) in &corpus {
        let ast = parse_sleec(text).map_err(|e| format!("{name}: {e}"))?;
        let printed = print_sleec(&ast);
        let again = parse_sleec(&printed).map_err(|e| format!("{name} reprinted: {e}"))?;
        ensure!(again == ast, "{name}: round trip changed the AST");
        ensure!(print_sleec(&again) == printed, "{name}: printing is not idempotent");
    }
    let mut rng = StdRng::seed_from_u64(SEED + 6);
    for _ in 0..200 {
        let ast = random_spec(&mut rng, SMALL);
        ensure!(parse_sleec(&print_sleec(&ast)).unwrap() == ast, "random spec round trip failed");
    }
    for gsl in ["bsn.gsl", "bsn_negotiated.gsl", "single_task.gsl"] {
        let text = fixture(gsl);
        let first = translate(&text);
        let outputs: BTreeSet<(String, String)> =
            (0..5).map(|_| translate(&text)).map(|t| (t.to_sleec(), t.traceability.to_json())).collect();
        ensure!(outputs.len() == 1, "{gsl}: translation not deterministic");
        ensure!(outputs.contains(&(first.to_sleec(), first.traceability.to_json())), "{gsl}: differs from first run");
    }
    Ok(format!("{} fixtures and 200 random specs round-trip; 3 goal models translate byte-identically", corpus.len()))
}
