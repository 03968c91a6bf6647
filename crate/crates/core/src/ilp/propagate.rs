//! Interval propagation over linear rows with a trail for backtracking.

use std::collections::HashMap;

use crate::model::{Model, Relation};

/// `lo ≤ Σ c·x ≤ hi`; either side may be absent.
#[derive(Clone, Debug)]
pub(crate) struct RangeRow {
    pub terms: Vec<(usize, i64)>,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

/// Solver-side view of a model: bounds plus range rows. Rows with identical
/// (or negated) terms are merged into one range.
#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub rows: Vec<RangeRow>,
    pub rows_of: Vec<Vec<usize>>,
}

fn tighter_max(a: Option<i64>, b: i64) -> Option<i64> {
    Some(a.map_or(b, |a| a.max(b)))
}

fn tighter_min(a: Option<i64>, b: i64) -> Option<i64> {
    Some(a.map_or(b, |a| a.min(b)))
}

impl Problem {
    pub fn from_model(model: &Model) -> Problem {
        let mut rows: Vec<RangeRow> = Vec::new();
        let mut index: HashMap<Vec<(usize, i64)>, usize> = HashMap::new();
        for r in model.rows() {
            let flip = r.terms.first().is_some_and(|&(_, c)| c < 0);
            let terms: Vec<(usize, i64)> =
                if flip { r.terms.iter().map(|&(v, c)| (v, -c)).collect() } else { r.terms.clone() };
            let (rel, rhs) = if flip {
                let rel = match r.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (rel, -r.rhs)
            } else {
                (r.relation, r.rhs)
            };
            let k = *index.entry(terms.clone()).or_insert_with(|| {
                rows.push(RangeRow { terms, lo: None, hi: None });
                rows.len() - 1
            });
            let row = &mut rows[k];
            if rel != Relation::Le {
                row.lo = tighter_max(row.lo, rhs);
            }
            if rel != Relation::Ge {
                row.hi = tighter_min(row.hi, rhs);
            }
        }
        let n = model.variables().len();
        let mut rows_of = vec![Vec::new(); n];
        for (i, r) in rows.iter().enumerate() {
            for &(v, _) in &r.terms {
                rows_of[v].push(i);
            }
        }
        Problem {
            lo: model.variables().iter().map(|v| v.lower).collect(),
            hi: model.variables().iter().map(|v| v.upper).collect(),
            rows,
            rows_of,
        }
    }
}

/// Mutable bound state over a [`Problem`].
#[derive(Clone)]
pub(crate) struct Propagator<'a> {
    pub problem: &'a Problem,
    lo: Vec<i64>,
    hi: Vec<i64>,
    trail: Vec<(usize, i64, i64)>,
    queue: Vec<usize>,
    queued: Vec<bool>,
}

impl<'a> Propagator<'a> {
    pub fn new(problem: &'a Problem) -> Self {
        Propagator {
            problem,
            lo: problem.lo.clone(),
            hi: problem.hi.clone(),
            trail: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; problem.rows.len()],
        }
    }

    pub fn bounds(&self, v: usize) -> (i64, i64) {
        (self.lo[v], self.hi[v])
    }

    pub fn values(&self) -> &[i64] {
        &self.lo
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, lo, hi) = self.trail.pop().expect("nonempty");
            self.lo[v] = lo;
            self.hi[v] = hi;
        }
    }

    fn set(&mut self, v: usize, lo: i64, hi: i64) -> bool {
        if lo == self.lo[v] && hi == self.hi[v] {
            return true;
        }
        self.trail.push((v, self.lo[v], self.hi[v]));
        self.lo[v] = lo;
        self.hi[v] = hi;
        for &r in &self.problem.rows_of[v] {
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
        lo <= hi
    }

    /// Fixes `v = value` and propagates. `false` on conflict.
    pub fn assign(&mut self, v: usize, value: i64) -> bool {
        self.set(v, value, value) && self.run()
    }

    pub fn propagate_all(&mut self) -> bool {
        for r in 0..self.problem.rows.len() {
            if !self.queued[r] {
                self.queued[r] = true;
                self.queue.push(r);
            }
        }
        self.run()
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r] = false;
        }
    }

    fn run(&mut self) -> bool {
        while let Some(r) = self.queue.pop() {
            self.queued[r] = false;
            if !self.row(r) {
                self.clear_queue();
                return false;
            }
        }
        true
    }

    fn row(&mut self, r: usize) -> bool {
        let row = &self.problem.rows[r];
        let (mut min_act, mut max_act) = (0i128, 0i128);
        for &(v, c) in &row.terms {
            let (a, b) = (i128::from(c) * i128::from(self.lo[v]), i128::from(c) * i128::from(self.hi[v]));
            min_act += a.min(b);
            max_act += a.max(b);
        }
        let lo = row.lo.map(i128::from);
        let hi = row.hi.map(i128::from);
        if hi.is_some_and(|h| min_act > h) || lo.is_some_and(|l| max_act < l) {
            return false;
        }
        for &(v, c) in &row.terms {
            let c = i128::from(c);
            let (vl, vh) = (i128::from(self.lo[v]), i128::from(self.hi[v]));
            let own_min = (c * vl).min(c * vh);
            let own_max = (c * vl).max(c * vh);
            let (mut nl, mut nh) = (vl, vh);
            if let Some(h) = hi {
                // c·x ≤ h − (min_act − own_min)
                let slack = h - (min_act - own_min);
                if c > 0 {
                    nh = nh.min(floor_div(slack, c));
                } else {
                    nl = nl.max(ceil_div(slack, c));
                }
            }
            if let Some(l) = lo {
                // c·x ≥ l − (max_act − own_max)
                let need = l - (max_act - own_max);
                if c > 0 {
                    nl = nl.max(ceil_div(need, c));
                } else {
                    nh = nh.min(floor_div(need, c));
                }
            }
            if nl != vl || nh != vh {
                let (nl, nh) = (nl as i64, nh as i64);
                if !self.set(v, nl, nh) {
                    return false;
                }
            }
        }
        true
    }
}

/// `⌊a / b⌋` for `b ≠ 0`.
fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Row, RowFamily, VarKind};

    #[test]
    fn floor_division() {
        assert_eq!(floor_div(7, 2), 3);
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(floor_div(7, -2), -4);
        assert_eq!(floor_div(-7, -2), 3);
        assert_eq!(floor_div(-6, -2), 3);
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(7, -2), -3);
    }

    #[test]
    fn merges_opposite_rows() {
        let mut m = Model::empty();
        let x = m.add_variable("x", -3, 3, VarKind::Free).unwrap();
        let y = m.add_variable("y", -3, 3, VarKind::Free).unwrap();
        m.add_row(Row::new([(x, 1), (y, -1)], Relation::Le, 2, RowFamily::Other)).unwrap();
        m.add_row(Row::new([(x, -1), (y, 1)], Relation::Le, 1, RowFamily::Other)).unwrap();
        let p = Problem::from_model(&m);
        assert_eq!(p.rows.len(), 1);
        assert_eq!((p.rows[0].lo, p.rows[0].hi), (Some(-1), Some(2)));
    }

    #[test]
    fn negative_coefficients_tighten() {
        // −2x ≥ 3 ⇒ x ≤ −2 ; −2x ≤ −1 ⇒ x ≥ 1: conflict.
        let mut m = Model::empty();
        let x = m.add_variable("x", -5, 5, VarKind::Free).unwrap();
        m.add_row(Row::new([(x, -2)], Relation::Ge, 3, RowFamily::Other)).unwrap();
        let p = Problem::from_model(&m);
        let mut prop = Propagator::new(&p);
        assert!(prop.propagate_all());
        assert_eq!(prop.bounds(x), (-5, -2));
        let mut m2 = m.clone();
        m2.add_row(Row::new([(x, -2)], Relation::Le, -1, RowFamily::Other)).unwrap();
        let p = Problem::from_model(&m2);
        assert!(!Propagator::new(&p).propagate_all());
    }

    #[test]
    fn undo_restores() {
        let mut m = Model::empty();
        let x = m.add_variable("x", 0, 2, VarKind::Free).unwrap();
        let y = m.add_variable("y", 0, 2, VarKind::Free).unwrap();
        m.add_row(Row::new([(x, 1), (y, 1)], Relation::Eq, 2, RowFamily::Other)).unwrap();
        let p = Problem::from_model(&m);
        let mut prop = Propagator::new(&p);
        let mark = prop.mark();
        assert!(prop.assign(x, 0));
        assert_eq!(prop.bounds(y), (2, 2));
        prop.undo(mark);
        assert_eq!(prop.bounds(y), (0, 2));
    }
}
