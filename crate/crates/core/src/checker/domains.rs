//! Finite value domains for measures.
//!
//! Conditions only compare a measure against constants, so one value per
//! order-equivalence class of those constants is enough to exhibit every
//! behaviour of every condition.

use std::collections::BTreeMap;

use crate::semantics::{Expr, Model, Value};
use crate::sleec::{SleecSpec, Sort};

/// Raw (model-encoded) domain of every measure, in declaration order.
pub(crate) fn raw_domains(model: &Model, overrides: &BTreeMap<String, Vec<i64>>) -> Vec<Vec<i64>> {
    let mut referenced = vec![false; model.measures.len()];
    let mut constants: Vec<Vec<i64>> = vec![Vec::new(); model.measures.len()];
    let mut visit = |e: &Expr| walk(e, &mut referenced, &mut constants);
    for r in &model.rules {
        if let Some(c) = &r.cond {
            visit(c);
        }
        for d in &r.defeaters {
            visit(&d.cond);
        }
    }
    for p in &model.purposes {
        if let Some(c) = &p.cond {
            visit(c);
        }
    }

    model
        .measures
        .iter()
        .enumerate()
        .map(|(m, info)| {
            if let Some(vals) = overrides.get(&info.name) {
                if matches!(info.sort, Sort::Numeric) && !vals.is_empty() {
                    let mut vals = vals.clone();
                    vals.sort_unstable();
                    vals.dedup();
                    return vals;
                }
            }
            if !referenced[m] {
                return vec![info.default_value()];
            }
            match &info.sort {
                Sort::Boolean => vec![0, 1],
                Sort::Scale(vals) => (0..vals.len() as i64).collect(),
                Sort::Numeric => numeric_representatives(&constants[m]),
            }
        })
        .collect()
}

fn walk(e: &Expr, referenced: &mut [bool], constants: &mut [Vec<i64>]) {
    match e {
        Expr::Const(_) => {}
        Expr::Atom(m) => referenced[*m] = true,
        Expr::Cmp(m, _, k) => {
            referenced[*m] = true;
            constants[*m].push(*k);
        }
        Expr::Not(x) => walk(x, referenced, constants),
        Expr::And(a, b) | Expr::Or(a, b) => {
            walk(a, referenced, constants);
            walk(b, referenced, constants);
        }
    }
}

/// `{c1-1, c1, mid, c2, ..., ck, ck+1}` for sorted distinct constants, with
/// a midpoint only where a gap has room for one.
pub fn numeric_representatives(constants: &[i64]) -> Vec<i64> {
    let mut cs = constants.to_vec();
    cs.sort_unstable();
    cs.dedup();
    let Some((&first, &last)) = cs.first().zip(cs.last()) else {
        return vec![0];
    };
    let mut out = vec![first.saturating_sub(1)];
    for w in cs.windows(2) {
        out.push(w[0]);
        let (lo, hi) = (w[0] as i128, w[1] as i128);
        if hi - lo >= 2 {
            out.push((lo + (hi - lo) / 2) as i64);
        }
    }
    out.push(last);
    out.push(last.saturating_add(1));
    out.dedup();
    out
}

/// The abstract domain of every measure of a well-typed spec, by name in
/// declaration order.
pub fn abstract_measure_domains(spec: &SleecSpec) -> Result<Vec<(String, Vec<Value>)>, super::CheckError> {
    let model = Model::new(spec)?;
    Ok(raw_domains(&model, &BTreeMap::new())
        .into_iter()
        .enumerate()
        .map(|(m, dom)| (model.measures[m].name.clone(), dom.into_iter().map(|v| model.value_of(m, v)).collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sleec::parse_sleec;

    fn domains(src: &str) -> Vec<(String, Vec<Value>)> {
        abstract_measure_domains(&parse_sleec(src).unwrap()).unwrap()
    }

    #[test]
    fn numeric_classes() {
        assert_eq!(numeric_representatives(&[7, 3]), vec![2, 3, 5, 7, 8]);
        assert_eq!(numeric_representatives(&[3, 4]), vec![2, 3, 4, 5]);
        assert_eq!(numeric_representatives(&[0]), vec![-1, 0, 1]);
        assert_eq!(numeric_representatives(&[]), vec![0]);
    }

    #[test]
    fn per_sort() {
        let d = domains(
            "def_start event A measure riskLevel: scale(low, medium, high) measure x: numeric
             measure b: boolean measure unused: boolean measure s2: scale(p, q)
             def_end rule_start r := when A and riskLevel > low and x > 3 and x < 7 and b then A rule_end",
        );
        let vals = |i: usize| d[i].1.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        assert_eq!(vals(0), "low,medium,high");
        assert_eq!(vals(1), "2,3,5,7,8");
        assert_eq!(vals(2), "false,true");
        assert_eq!(vals(3), "false");
        assert_eq!(vals(4), "p");
    }
}
