//! Random small integer models and an exhaustive reference solver.

#![allow(dead_code)]

use obstruct_core::model::{Model, Relation, Row, RowFamily, VarKind};
use rand::Rng;

/// At most 12 variables with bounds inside [−2, 2] and at most 20 rows of up
/// to 4 terms. Right-hand sides are taken near the value of a random point so
/// both verdicts show up often.
pub fn random_model(rng: &mut impl Rng) -> Model {
    let mut m = Model::empty();
    let n = rng.random_range(1..=12);
    for i in 0..n {
        let lo = rng.random_range(-2..=2);
        let hi = rng.random_range(lo..=2);
        m.add_variable(format!("x{i}"), lo, hi, VarKind::Free).unwrap();
    }
    let point: Vec<i64> = m.variables().iter().map(|v| rng.random_range(v.lower..=v.upper)).collect();
    for _ in 0..rng.random_range(0..=20) {
        let k = rng.random_range(1..=n.min(4));
        let terms: Vec<(usize, i64)> = (0..k)
            .map(|_| {
                let c = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
                (rng.random_range(0..n), c)
            })
            .collect();
        let at: i64 = terms.iter().map(|&(v, c)| c * point[v]).sum();
        let relation = match rng.random_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Le,
            _ => Relation::Ge,
        };
        // mostly rows the point satisfies, with some that may cut it off
        let slack = if rng.random_bool(0.9) { rng.random_range(0..=2) } else { rng.random_range(-2..=0) };
        let rhs = match relation {
            Relation::Le => at + slack,
            Relation::Ge => at - slack,
            Relation::Eq if slack >= 0 => at,
            Relation::Eq => at + slack,
        };
        m.add_row(Row::new(terms, relation, rhs, RowFamily::Other)).unwrap();
    }
    m
}

/// Depth-first enumeration of every point in the bounds box, cutting a branch
/// once some row cannot hold whatever the unassigned variables take.
pub fn brute_force(model: &Model) -> Option<Vec<i64>> {
    let vars = model.variables();
    let mut values: Vec<i64> = vars.iter().map(|v| v.lower).collect();
    fn possible(model: &Model, values: &[i64], fixed: usize) -> bool {
        model.rows().iter().all(|r| {
            let (mut lo, mut hi) = (0i128, 0i128);
            for &(v, c) in &r.terms {
                let c = i128::from(c);
                if v < fixed {
                    lo += c * i128::from(values[v]);
                    hi += c * i128::from(values[v]);
                } else {
                    let (a, b) = (model.variables()[v].lower, model.variables()[v].upper);
                    let (x, y) = (c * i128::from(a), c * i128::from(b));
                    lo += x.min(y);
                    hi += x.max(y);
                }
            }
            let rhs = i128::from(r.rhs);
            match r.relation {
                Relation::Le => lo <= rhs,
                Relation::Ge => hi >= rhs,
                Relation::Eq => lo <= rhs && rhs <= hi,
            }
        })
    }
    fn go(model: &Model, values: &mut Vec<i64>, i: usize) -> bool {
        if !possible(model, values, i) {
            return false;
        }
        if i == values.len() {
            return true;
        }
        let v = &model.variables()[i];
        for x in v.lower..=v.upper {
            values[i] = x;
            if go(model, values, i + 1) {
                return true;
            }
        }
        false
    }
    go(model, &mut values, 0).then_some(values)
}
