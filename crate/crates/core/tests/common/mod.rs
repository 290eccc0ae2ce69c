//! Random specs, traces and goal models shared by the integration tests
//! and the acceptance suite.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;

use sleecgo_core::semantics::{Tick, Trace, Value};
use sleecgo_core::sleec::{parse_sleec, SleecSpec, Sort};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).unwrap()
}

/// Every `.sleec` file in the fixture pack, by name.
pub fn sleec_fixtures() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sleec"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

/// Shape limits for [`random_spec`].
#[derive(Debug, Clone, Copy)]
pub struct SpecShape {
    pub max_rules: usize,
    pub max_events: usize,
    pub max_measures: usize,
    pub max_defeaters: usize,
}

pub const SMALL: SpecShape = SpecShape { max_rules: 3, max_events: 4, max_measures: 2, max_defeaters: 2 };

fn guard(rng: &mut StdRng, measures: usize) -> String {
    let m = |rng: &mut StdRng| format!("b{}", rng.gen_range(0..measures));
    match rng.gen_range(0..5) {
        0 => m(rng),
        1 => format!("not {}", m(rng)),
        2 => format!("{} = false", m(rng)),
        3 => format!("{} and {}", m(rng), m(rng)),
        _ => format!("{} or not {}", m(rng), m(rng)),
    }
}

fn response(rng: &mut StdRng, events: usize) -> String {
    let mut s = String::new();
    if rng.gen_bool(0.5) {
        s.push_str("not ");
    }
    s.push_str(&format!("E{}", rng.gen_range(0..events)));
    if rng.gen_bool(0.7) {
        s.push_str(&format!(" within {} minutes", rng.gen_range(1..=2)));
    }
    s
}

/// Source text of a random well-typed spec: boolean measures `b0..`,
/// events `E0..`, deadlines of one or two minutes.
pub fn random_spec_text(rng: &mut StdRng, shape: SpecShape) -> String {
    let events = rng.gen_range(1..=shape.max_events);
    let measures = rng.gen_range(0..=shape.max_measures);
    let mut s = String::from("def_start\n");
    for e in 0..events {
        s.push_str(&format!("  event E{e}\n"));
    }
    for m in 0..measures {
        s.push_str(&format!("  measure b{m}: boolean\n"));
    }
    s.push_str("def_end\nrule_start\n");
    for r in 0..rng.gen_range(1..=shape.max_rules) {
        s.push_str(&format!("  R{r} := when E{}", rng.gen_range(0..events)));
        if measures > 0 && rng.gen_bool(0.5) {
            s.push_str(&format!(" and ({})", guard(rng, measures)));
        }
        s.push_str(&format!(" then {}", response(rng, events)));
        if measures > 0 {
            for _ in 0..rng.gen_range(0..=shape.max_defeaters) {
                s.push_str(&format!(" unless ({})", guard(rng, measures)));
                if rng.gen_bool(0.7) {
                    s.push_str(&format!(" then {}", response(rng, events)));
                }
            }
        }
        s.push('\n');
    }
    s.push_str("rule_end\n");
    s
}

pub fn random_spec(rng: &mut StdRng, shape: SpecShape) -> SleecSpec {
    let text = random_spec_text(rng, shape);
    parse_sleec(&text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

/// A random trace over the spec's declarations with a total valuation at
/// every tick.
pub fn random_trace(rng: &mut StdRng, spec: &SleecSpec, max_len: usize) -> Trace {
    let len = rng.gen_range(0..=max_len);
    let ticks = (0..len)
        .map(|_| Tick {
            events: spec.events.iter().filter(|_| rng.gen_bool(0.3)).map(|e| e.name.name.clone()).collect(),
            measures: spec
                .measures
                .iter()
                .map(|m| {
                    let v = match &m.sort {
                        Sort::Boolean => Value::Bool(rng.gen()),
                        Sort::Numeric => Value::Num(rng.gen_range(0..10)),
                        Sort::Scale(values) => Value::Scale(values[rng.gen_range(0..values.len())].name.clone()),
                    };
                    (m.name.name.clone(), v)
                })
                .collect(),
        })
        .collect();
    Trace { ticks }
}

/// A random valid goal model, with the expected numbers of achieve goals,
/// tasks and obstacle-bearing tasks.
pub struct RandomGoalModel {
    pub text: String,
    pub achieve_goals: usize,
    pub maintain_goals: usize,
    pub tasks: usize,
    pub obstacles: usize,
}

pub fn random_goal_model(rng: &mut StdRng) -> RandomGoalModel {
    let goals = rng.gen_range(1..=3);
    let tasks = rng.gen_range(goals..=goals + 4);
    let mut out = RandomGoalModel { text: String::new(), achieve_goals: 0, maintain_goals: 0, tasks, obstacles: 0 };
    let mut s = String::from(
        "system Random\nvocabulary_start\n  event Ctx\n  event Obs\n  measure m0: boolean\n  measure m1: boolean\nvocabulary_end\n",
    );
    for g in 0..goals {
        let achieve = rng.gen_bool(0.5);
        if achieve {
            out.achieve_goals += 1;
        } else {
            out.maintain_goals += 1;
        }
        let kind = ["functional_goal", "adaptation_goal", "normative_goal"][rng.gen_range(0..3)];
        s.push_str(&format!(
            "{kind} G{g} {{\n  type: {}\n  condition: m{} = true\n  event: AchievedT{g}\n  context_event: Ctx\n  def: \"goal {g}\"\n",
            if achieve { "achieve" } else { "maintain" },
            rng.gen_range(0..2),
        ));
        if kind == "normative_goal" {
            s.push_str("  source: \"policy\"\n  class: Ethical\n  norm_principle: \"Autonomy\"\n  proxy: \"Consent\"\n  added_value: \"trust\"\n");
        }
        s.push_str("}\n");
    }
    let mut children = vec![Vec::new(); goals];
    for t in 0..tasks {
        let obstacle = rng.gen_bool(0.5);
        out.obstacles += obstacle as usize;
        s.push_str(&format!(
            "task T{t} {{\n  def: \"task {t}\"\n  pre_cond: m{}\n  triggering_event: Ctx\n  temporal_constraint: {} minutes\n  post_cond: m{}\n{}}}\n",
            rng.gen_range(0..2),
            rng.gen_range(1..=5),
            rng.gen_range(0..2),
            if obstacle { "  obstacle_event: Obs\n" } else { "" },
        ));
        let parent = if t < goals { t } else { rng.gen_range(0..goals) };
        children[parent].push(format!("T{t}"));
    }
    for (g, kids) in children.iter().enumerate() {
        let mode = if rng.gen_bool(0.5) { "AND" } else { "OR" };
        s.push_str(&format!("refine G{g} {mode} {{ {} }}\n", kids.join(", ")));
    }
    out.text = s;
    out
}
