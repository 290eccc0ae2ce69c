//! Breadth-first search over abstract states.
//!
//! A state records, per event of the alphabet, the tightest open
//! requirement and the longest open prohibition (split by origin when a
//! rule pair is under test). Two traces reaching the same state have the
//! same futures, so each state is expanded once; the first goal reached is
//! a shortest witness. Per-tick choices are the event subsets of the
//! alphabet up to the simultaneity limit, each paired with one valuation
//! per distinct rule outcome.

use std::collections::{HashMap, HashSet};

use crate::semantics::{Effective, IndexedTick, IndexedTrace, Model};
use crate::sleec::{Clause, Polarity};

const NONE: u16 = 0;
const OPEN: u16 = u16::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Goal {
    /// A compliant, fully discharged trace in which the rule activates.
    Trigger(usize),
    /// A non-violated prefix in which one rule of the pair requires an
    /// event the other forbids over a covering window.
    Clash(usize, usize),
    /// A compliant, fully discharged trace exhibiting the purpose.
    Purpose(usize),
}

struct Act {
    rule: usize,
    polarity: Polarity,
    event: usize,
    /// Encoded remaining ticks: `d + 1`, or `OPEN`.
    rem: u16,
}

struct Step {
    events: Vec<usize>,
    local_events: Vec<usize>,
    values: Vec<i64>,
    acts: Vec<Act>,
    focus_active: bool,
    while_hit: bool,
    exists_hit: bool,
}

pub(crate) struct Search<'m> {
    model: &'m Model,
    goal: Goal,
    n: usize,
    classes: usize,
    steps: Vec<Step>,
}

fn encode(deadline: Option<u64>) -> u16 {
    match deadline {
        Some(d) => u16::try_from(d + 1).unwrap_or(OPEN - 1).min(OPEN - 1),
        None => OPEN,
    }
}

/// All subsets of `0..n` with at most `k` elements, by size and then
/// lexicographically.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn combos(n: usize, size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            cur.push(i);
            combos(n, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 0..=k.min(n) {
        combos(n, size, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Steps a mixed-radix counter, last digit fastest. False once it wraps.
pub(crate) fn advance(digits: &mut [usize], sizes: &[usize]) -> bool {
    for slot in (0..digits.len()).rev() {
        digits[slot] += 1;
        if digits[slot] < sizes[slot] {
            return true;
        }
        digits[slot] = 0;
    }
    false
}

impl<'m> Search<'m> {
    pub fn new(
        model: &'m Model,
        domains: &[Vec<i64>],
        rules: &[usize],
        alphabet: &[usize],
        max_events: usize,
        goal: Goal,
    ) -> Self {
        let local: HashMap<usize, usize> = alphabet.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let purpose = match goal {
            Goal::Purpose(p) => Some(&model.purposes[p]),
            _ => None,
        };
        let focus = match goal {
            Goal::Trigger(r) => Some(r),
            _ => None,
        };
        let defaults: Vec<i64> = domains.iter().map(|d| d[0]).collect();

        let mut steps = Vec::new();
        for subset in subsets(alphabet.len(), max_events) {
            let events: Vec<usize> = subset.iter().map(|&i| alphabet[i]).collect();
            let triggered: Vec<usize> =
                rules.iter().copied().filter(|&r| events.contains(&model.rules[r].trigger)).collect();
            let exists_here = purpose.is_some_and(|p| events.contains(&p.exists_event));
            let mut read: Vec<usize> = triggered.iter().flat_map(|&r| model.rules[r].measures()).collect();
            if exists_here {
                if let Some(c) = &purpose.unwrap().cond {
                    c.measures(&mut read);
                }
            }
            read.sort_unstable();
            read.dedup();

            let mut seen: HashSet<Vec<u32>> = HashSet::new();
            let mut values = defaults.clone();
            let mut odometer = vec![0usize; read.len()];
            loop {
                for (slot, &m) in read.iter().enumerate() {
                    values[m] = domains[m][odometer[slot]];
                }
                let mut key = Vec::with_capacity(triggered.len() + 1);
                let mut acts = Vec::new();
                let mut focus_active = false;
                for &r in &triggered {
                    let rule = &model.rules[r];
                    if !rule.is_triggered(&events, &values) {
                        key.push(0);
                        continue;
                    }
                    match rule.effective(&values) {
                        Effective::Cancelled { .. } => key.push(1),
                        Effective::Respond { clause, response } => {
                            key.push(match clause {
                                Clause::Base => 2,
                                Clause::Defeater(i) => 3 + i as u32,
                            });
                            focus_active |= focus == Some(r);
                            acts.push(Act {
                                rule: r,
                                polarity: response.polarity,
                                event: local[&response.event],
                                rem: encode(response.deadline),
                            });
                        }
                    }
                }
                let exists_hit = exists_here && purpose.unwrap().cond.as_ref().is_none_or(|c| c.eval(&values));
                key.push(exists_hit as u32);
                if seen.insert(key) {
                    steps.push(Step {
                        local_events: subset.clone(),
                        events: events.clone(),
                        values: values.clone(),
                        acts,
                        focus_active,
                        while_hit: purpose.is_some_and(|p| p.while_event.is_some_and(|w| events.contains(&w))),
                        exists_hit,
                    });
                }
                let sizes: Vec<usize> = read.iter().map(|&m| domains[m].len()).collect();
                if !advance(&mut odometer, &sizes) {
                    break;
                }
            }
        }

        let classes = if matches!(goal, Goal::Clash(..)) { 3 } else { 1 };
        Search { model, goal, n: alphabet.len(), classes, steps }
    }

    fn class_of(&self, rule: usize) -> usize {
        match self.goal {
            Goal::Clash(a, _) if rule == a => 0,
            Goal::Clash(_, b) if rule == b => 1,
            Goal::Clash(..) => 2,
            _ => 0,
        }
    }

    fn initial(&self) -> Box<[u16]> {
        let mut s = vec![NONE; self.n * (1 + self.classes) + 1];
        if let Goal::Purpose(p) = self.goal {
            if self.model.purposes[p].while_event.is_none() {
                *s.last_mut().unwrap() = 1;
            }
        }
        s.into_boxed_slice()
    }

    /// Successor state, or `None` when the tick violates an obligation.
    /// The flag reports whether the goal is met by this transition.
    fn apply(&self, st: &[u16], step: &Step) -> Option<(Box<[u16]>, bool)> {
        let n = self.n;
        let forb = |class: usize, e: usize| n * (1 + class) + e;
        let mut s: Box<[u16]> = st.into();

        let mut clash = false;
        if let Goal::Clash(a, b) = self.goal {
            for req in step.acts.iter().filter(|x| x.polarity == Polarity::Require && (x.rule == a || x.rule == b)) {
                let partner = if req.rule == a { b } else { a };
                let pc = self.class_of(partner);
                let existing = st[forb(pc, req.event)];
                let fresh = step
                    .acts
                    .iter()
                    .filter(|x| x.rule == partner && x.polarity == Polarity::Forbid && x.event == req.event)
                    .map(|x| x.rem)
                    .max()
                    .unwrap_or(NONE);
                let cover = existing.max(fresh);
                if cover != NONE && cover >= req.rem {
                    clash = true;
                }
            }
        }

        for act in &step.acts {
            match act.polarity {
                Polarity::Require => {
                    let cur = s[act.event];
                    s[act.event] = if cur == NONE { act.rem } else { cur.min(act.rem) };
                }
                Polarity::Forbid => {
                    let i = forb(self.class_of(act.rule), act.event);
                    s[i] = s[i].max(act.rem);
                }
            }
        }
        for &e in &step.local_events {
            if (0..self.classes).any(|c| s[forb(c, e)] != NONE) {
                return None;
            }
            s[e] = NONE;
        }
        for e in 0..n {
            match s[e] {
                NONE | OPEN => {}
                1 => return None,
                r => s[e] = r - 1,
            }
            for c in 0..self.classes {
                let i = forb(c, e);
                if s[i] != NONE && s[i] != OPEN {
                    s[i] -= 1;
                }
            }
        }

        let flag = s.len() - 1;
        let discharged = (0..n).all(|e| s[e] == NONE);
        let hit = match self.goal {
            Goal::Clash(..) => clash,
            Goal::Trigger(_) => {
                if step.focus_active {
                    s[flag] = 1;
                }
                s[flag] == 1 && discharged
            }
            Goal::Purpose(_) => {
                if s[flag] == 0 && step.while_hit {
                    s[flag] = 1;
                }
                if s[flag] == 1 && step.exists_hit {
                    s[flag] = 2;
                }
                s[flag] == 2 && discharged
            }
        };
        Some((s, hit))
    }

    /// Shortest witness of at most `bound` ticks.
    pub fn run(&self, bound: usize) -> Option<IndexedTrace> {
        // (parent node, step) per node; node 0 is the empty trace
        let mut nodes: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
        let mut states: Vec<Box<[u16]>> = vec![self.initial()];
        let mut visited: HashSet<Box<[u16]>> = states.iter().cloned().collect();
        let mut layer = vec![0usize];
        for _ in 0..bound {
            let mut next = Vec::new();
            for &node in &layer {
                for (si, step) in self.steps.iter().enumerate() {
                    let Some((succ, hit)) = self.apply(&states[node], step) else { continue };
                    if hit {
                        return Some(self.witness(&nodes, node, si));
                    }
                    if visited.insert(succ.clone()) {
                        nodes.push((node, si));
                        states.push(succ);
                        next.push(nodes.len() - 1);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        None
    }

    fn witness(&self, nodes: &[(usize, usize)], mut node: usize, last: usize) -> IndexedTrace {
        let mut steps = vec![last];
        while node != 0 {
            steps.push(nodes[node].1);
            node = nodes[node].0;
        }
        steps.reverse();
        IndexedTrace {
            ticks: steps
                .into_iter()
                .map(|si| IndexedTick { events: self.steps[si].events.clone(), values: self.steps[si].values.clone() })
                .collect(),
        }
    }
}
