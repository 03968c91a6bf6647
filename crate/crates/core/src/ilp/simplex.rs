//! Exact bounded-variable simplex (phase one only) over Q, with Gomory
//! mixed-integer cuts read off the final dictionary.
//!
//! Every row `r` of the problem gets a slack `s_r = Σ a x` carrying the row
//! range as its bounds, so all constraints become variable bounds. The
//! dictionary expresses each basic variable as its current value plus a
//! linear form in the displacements of the nonbasic ones.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::propagate::Problem;

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LpStatus {
    Feasible,
    Infeasible,
    /// Iteration budget exhausted; nothing was proven.
    Stalled,
}

#[derive(Clone, Debug)]
pub(crate) struct Simplex {
    n: usize,
    lo: Vec<Option<Q>>,
    hi: Vec<Option<Q>>,
    val: Vec<Q>,
    integer: Vec<bool>,
    row_var: Vec<usize>,
    col_var: Vec<usize>,
    var_pos: Vec<Pos>,
    tab: Vec<Vec<Q>>,
    pub iterations: u64,
    deadline: Option<Instant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pos {
    Row(usize),
    Col(usize),
    Dropped,
}

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// Largest `rows × columns` for which the dense tableau is built.
pub(crate) const MAX_TABLEAU: usize = 2_000_000;

impl Simplex {
    pub fn fits(problem: &Problem) -> bool {
        problem.rows.len().saturating_mul(problem.lo.len()) <= MAX_TABLEAU
    }

    pub fn new(problem: &Problem) -> Simplex {
        let n = problem.lo.len();
        let mut lo: Vec<Option<Q>> = problem.lo.iter().map(|&l| Some(q(l))).collect();
        let mut hi: Vec<Option<Q>> = problem.hi.iter().map(|&h| Some(q(h))).collect();
        let mut val: Vec<Q> = problem.lo.iter().map(|&l| q(l)).collect();
        let mut tab = Vec::with_capacity(problem.rows.len());
        let mut row_var = Vec::with_capacity(problem.rows.len());
        let mut var_pos: Vec<Pos> = (0..n).map(Pos::Col).collect();
        for (r, row) in problem.rows.iter().enumerate() {
            let mut coeffs = vec![Q::zero(); n];
            let mut activity = Q::zero();
            for &(v, c) in &row.terms {
                coeffs[v] = q(c);
                activity += q(c) * &val[v];
            }
            lo.push(row.lo.map(q));
            hi.push(row.hi.map(q));
            val.push(activity);
            tab.push(coeffs);
            row_var.push(n + r);
            var_pos.push(Pos::Row(r));
        }
        let total = lo.len();
        Simplex {
            n,
            lo,
            hi,
            val,
            integer: vec![true; total],
            row_var,
            col_var: (0..n).collect(),
            var_pos,
            tab,
            iterations: 0,
            deadline: None,
        }
    }

    /// Values of the structural variables.
    #[cfg(test)]
    pub fn point(&self) -> &[Q] {
        &self.val[..self.n]
    }

    pub fn num_rows(&self) -> usize {
        self.tab.len()
    }

    fn below(&self, v: usize) -> bool {
        self.lo[v].as_ref().is_some_and(|l| self.val[v] < *l)
    }

    fn above(&self, v: usize) -> bool {
        self.hi[v].as_ref().is_some_and(|h| self.val[v] > *h)
    }

    /// Moves nonbasic `col` by `delta`, carrying the basic variables along.
    fn shift(&mut self, col: usize, delta: &Q) {
        if delta.is_zero() {
            return;
        }
        let v = self.col_var[col];
        self.val[v] += delta;
        for r in 0..self.tab.len() {
            let c = &self.tab[r][col];
            if !c.is_zero() {
                let d = c * delta;
                self.val[self.row_var[r]] += d;
            }
        }
    }

    /// Replaces the bounds of a structural variable. A nonbasic variable is
    /// moved onto the nearest bound of its new range.
    #[cfg(test)]
    pub fn set_bounds(&mut self, v: usize, lo: i64, hi: i64) {
        self.lo[v] = Some(q(lo));
        self.hi[v] = Some(q(hi));
        if let Pos::Col(c) = self.var_pos[v] {
            let target = if self.val[v] <= q(lo) {
                q(lo)
            } else if self.val[v] >= q(hi) {
                q(hi)
            } else {
                // strictly inside: snap to the lower end
                q(lo)
            };
            let delta = target - &self.val[v];
            self.shift(c, &delta);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.tab[r][c].clone();
        let leaving = self.row_var[r];
        let entering = self.col_var[c];
        let inv = Q::one() / &p;
        let mut new_row: Vec<Q> = self.tab[r].iter().map(|x| -(x * &inv)).collect();
        new_row[c] = inv;
        for i in 0..self.tab.len() {
            if i == r || self.tab[i][c].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut self.tab[i][c], Q::zero());
            let row = &mut self.tab[i];
            for (j, x) in new_row.iter().enumerate() {
                if j == c {
                    row[j] = &f * x;
                } else if !x.is_zero() {
                    row[j] += &f * x;
                }
            }
        }
        self.tab[r] = new_row;
        self.row_var[r] = entering;
        self.col_var[c] = leaving;
        self.var_pos[entering] = Pos::Row(r);
        self.var_pos[leaving] = Pos::Col(c);
    }

    /// Phase one: drives the total bound violation of the basic variables to
    /// zero, or shows it cannot be.
    pub fn solve(&mut self, max_iterations: u64) -> LpStatus {
        let mut degenerate_run = 0u32;
        let mut budget = max_iterations;
        loop {
            let weights: Vec<(usize, i32)> = (0..self.tab.len())
                .filter_map(|r| {
                    let v = self.row_var[r];
                    if self.below(v) {
                        Some((r, -1))
                    } else if self.above(v) {
                        Some((r, 1))
                    } else {
                        None
                    }
                })
                .collect();
            if weights.is_empty() {
                return LpStatus::Feasible;
            }
            if budget == 0 || self.deadline.is_some_and(|d| Instant::now() >= d) {
                return LpStatus::Stalled;
            }
            budget -= 1;
            self.iterations += 1;
            let bland = degenerate_run > 20;
            let mut best: Option<(usize, i32, Q)> = None;
            for c in 0..self.col_var.len() {
                let v = self.col_var[c];
                let mut d = Q::zero();
                for &(r, w) in &weights {
                    let t = &self.tab[r][c];
                    if !t.is_zero() {
                        if w > 0 {
                            d += t;
                        } else {
                            d -= t;
                        }
                    }
                }
                let dir = if d.is_negative() && self.hi[v].as_ref().is_none_or(|h| self.val[v] < *h) {
                    1
                } else if d.is_positive() && self.lo[v].as_ref().is_none_or(|l| self.val[v] > *l) {
                    -1
                } else {
                    continue;
                };
                let better = match &best {
                    None => true,
                    Some((bc, _, bd)) => {
                        if bland {
                            v < self.col_var[*bc]
                        } else {
                            d.abs() > *bd
                        }
                    }
                };
                if better {
                    best = Some((c, dir, d.abs()));
                }
            }
            let Some((c, dir, _)) = best else {
                return LpStatus::Infeasible;
            };
            let v = self.col_var[c];
            // (step, leaving row or None for a bound flip, var index for ties)
            let mut limit: Option<(Q, Option<usize>, usize)> = None;
            let consider = |limit: &mut Option<(Q, Option<usize>, usize)>, t: Q, row: Option<usize>, var: usize| {
                let replace = match limit {
                    None => true,
                    Some((lt, _, lv)) => t < *lt || (t == *lt && var < *lv),
                };
                if replace {
                    *limit = Some((t, row, var));
                }
            };
            let own = if dir > 0 {
                self.hi[v].as_ref().map(|h| h - &self.val[v])
            } else {
                self.lo[v].as_ref().map(|l| &self.val[v] - l)
            };
            if let Some(t) = own {
                consider(&mut limit, t, None, v);
            }
            for r in 0..self.tab.len() {
                let a = &self.tab[r][c];
                if a.is_zero() {
                    continue;
                }
                let rate = if dir > 0 { a.clone() } else { -a };
                let b = self.row_var[r];
                let x = &self.val[b];
                let t = if rate.is_positive() {
                    if self.below(b) {
                        self.lo[b].as_ref().map(|l| (l - x) / &rate)
                    } else if self.above(b) {
                        None
                    } else {
                        self.hi[b].as_ref().map(|h| (h - x) / &rate)
                    }
                } else if self.above(b) {
                    self.hi[b].as_ref().map(|h| (h - x) / &rate)
                } else if self.below(b) {
                    None
                } else {
                    self.lo[b].as_ref().map(|l| (l - x) / &rate)
                };
                if let Some(t) = t {
                    consider(&mut limit, t, Some(r), b);
                }
            }
            let (t, row, _) = limit.expect("an improving direction reaches a breakpoint");
            degenerate_run = if t.is_zero() { degenerate_run + 1 } else { 0 };
            let delta = if dir > 0 { t } else { -t };
            self.shift(c, &delta);
            if let Some(r) = row {
                self.pivot(r, c);
            }
        }
    }

    /// Whether every integer variable has an integral value.
    pub fn is_integral(&self) -> bool {
        (0..self.n).all(|v| self.val[v].is_integer())
    }

    /// Adds up to `max_cuts` Gomory mixed-integer cuts from rows whose basic
    /// variable is integer but fractional. Returns how many were added.
    pub fn add_gomory_cuts(&mut self, max_cuts: usize) -> usize {
        let mut candidates: Vec<(Q, usize)> = (0..self.tab.len())
            .filter_map(|r| {
                let v = self.row_var[r];
                if !self.integer[v] {
                    return None;
                }
                let f = frac(&self.val[v]);
                if f.is_zero() {
                    return None;
                }
                // prefer values close to one half
                let dist = (f - Q::new(1.into(), 2.into())).abs();
                Some((dist, r))
            })
            .collect();
        candidates.sort();
        let mut added = 0;
        for (_, r) in candidates.into_iter().take(max_cuts) {
            if let Some(coeffs) = self.gmi_row(r) {
                self.push_cut(coeffs);
                added += 1;
            }
        }
        added
    }

    /// `Σ γ_c Δ_c ≥ 1` in the current nonbasic displacements, or `None` if a
    /// nonbasic variable sits strictly inside its range.
    fn gmi_row(&self, r: usize) -> Option<Vec<Q>> {
        let b = self.row_var[r];
        let f0 = frac(&self.val[b]);
        let one = Q::one();
        let mut out = Vec::with_capacity(self.col_var.len());
        for (c, a) in self.tab[r].iter().enumerate() {
            let v = self.col_var[c];
            // y = x − lo (sign +1) or hi − x (sign −1), y ≥ 0
            let sign = if self.lo[v].as_ref() == Some(&self.val[v]) {
                one.clone()
            } else if self.hi[v].as_ref() == Some(&self.val[v]) {
                -one.clone()
            } else {
                return None;
            };
            // x_b = val_b + Σ (a·sign) y  ⇒  x_b − Σ ā y = val_b with ā = a·sign
            let abar = a * &sign;
            let gamma = if self.integer[v] {
                let fj = frac(&-abar.clone());
                if fj <= f0 {
                    fj / &f0
                } else {
                    (&one - fj) / (&one - &f0)
                }
            } else if (-abar.clone()).is_positive() {
                -abar / &f0
            } else {
                abar / (&one - &f0)
            };
            out.push(gamma * sign);
        }
        Some(out)
    }

    fn push_cut(&mut self, coeffs: Vec<Q>) {
        // slack s = Σ γ Δ − 1 ≥ 0, continuous; currently at −1
        let v = self.val.len();
        self.lo.push(Some(Q::zero()));
        self.hi.push(None);
        self.val.push(-Q::one());
        self.integer.push(false);
        self.var_pos.push(Pos::Row(self.tab.len()));
        self.row_var.push(v);
        self.tab.push(coeffs);
    }

    /// Drops cut rows whose slack is basic and strictly positive.
    pub fn drop_slack_cuts(&mut self, first_cut_var: usize) {
        let mut r = 0;
        while r < self.tab.len() {
            let v = self.row_var[r];
            if v >= first_cut_var && self.val[v].is_positive() {
                self.tab.swap_remove(r);
                self.row_var.swap_remove(r);
                self.var_pos[v] = Pos::Dropped;
                if r < self.row_var.len() {
                    let moved = self.row_var[r];
                    self.var_pos[moved] = Pos::Row(r);
                }
            } else {
                r += 1;
            }
        }
    }

    /// Alternates solving and cutting. Stops on infeasibility, an integral
    /// point, no new cuts, `rounds`, or the deadline.
    pub fn cut_loop(&mut self, rounds: usize, cuts_per_round: usize, deadline: Option<Instant>) -> LpStatus {
        self.deadline = deadline;
        let first_cut = self.num_vars();
        for round in 0..rounds {
            let status = self.solve(20_000);
            tracing::debug!(round, ?status, rows = self.num_rows(), iterations = self.iterations, "cut round");
            if status != LpStatus::Feasible || self.is_integral() {
                return status;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return status;
            }
            self.drop_slack_cuts(first_cut);
            if self.add_gomory_cuts(cuts_per_round) == 0 {
                return status;
            }
        }
        self.solve(20_000)
    }

    /// Index the next cut slack will get.
    pub fn num_vars(&self) -> usize {
        self.val.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Model, Relation, Row, RowFamily, VarKind};

    fn problem(bounds: &[(i64, i64)], rows: &[(&[(usize, i64)], Relation, i64)]) -> Problem {
        let mut m = Model::empty();
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            m.add_variable(format!("x{i}"), lo, hi, VarKind::Free).unwrap();
        }
        for (terms, rel, rhs) in rows {
            m.add_row(Row::new(terms.iter().copied(), *rel, *rhs, RowFamily::Other)).unwrap();
        }
        Problem::from_model(&m)
    }

    #[test]
    fn finds_feasible_point() {
        let p = problem(&[(-2, 2), (-2, 2)], &[(&[(0, 1), (1, 1)], Relation::Eq, 3), (&[(0, 1), (1, -1)], Relation::Ge, 1)]);
        let mut s = Simplex::new(&p);
        assert_eq!(s.solve(1000), LpStatus::Feasible);
        let x = s.point();
        assert_eq!(&x[0] + &x[1], q(3));
        assert!(&x[0] - &x[1] >= q(1));
    }

    #[test]
    fn detects_rational_infeasibility() {
        let p = problem(&[(0, 1), (0, 1)], &[(&[(0, 1), (1, 1)], Relation::Ge, 3)]);
        assert_eq!(Simplex::new(&p).solve(1000), LpStatus::Infeasible);
    }

    #[test]
    fn cuts_close_parity_gap() {
        // 2x + 2y = 1 has the LP point x = 1/2, y = 0 but no integer point
        let p = problem(&[(-2, 2), (-2, 2)], &[(&[(0, 2), (1, 2)], Relation::Eq, 1)]);
        let mut s = Simplex::new(&p);
        assert_eq!(s.solve(1000), LpStatus::Feasible);
        assert!(!s.is_integral());
        let mut status = LpStatus::Feasible;
        for _ in 0..10 {
            if s.add_gomory_cuts(5) == 0 {
                break;
            }
            status = s.solve(1000);
            if status != LpStatus::Feasible {
                break;
            }
        }
        assert_eq!(status, LpStatus::Infeasible);
    }

    #[test]
    fn bound_changes_move_nonbasics() {
        let p = problem(&[(-2, 2), (-2, 2)], &[(&[(0, 1), (1, 1)], Relation::Le, 0)]);
        let mut s = Simplex::new(&p);
        assert_eq!(s.solve(100), LpStatus::Feasible);
        s.set_bounds(0, 1, 1);
        s.set_bounds(1, 0, 2);
        assert_eq!(s.solve(100), LpStatus::Infeasible);
        s.set_bounds(1, -2, 2);
        assert_eq!(s.solve(100), LpStatus::Feasible);
        assert_eq!(s.point()[0], q(1));
    }
}
