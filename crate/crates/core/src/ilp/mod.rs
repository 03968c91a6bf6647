//! Exact integer feasibility: presolve, search, verification and LP export.

mod lp;
mod presolve;
mod propagate;
mod search;
mod simplex;

use std::sync::atomic::AtomicBool;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use lp::export_lp;
pub use presolve::{presolve, PresolveStats, Presolved};

use crate::error::Result;
use crate::model::{Assignment, Model};
use propagate::Problem;
use search::{Budget, Outcome};
use simplex::{LpStatus, Simplex};

/// Nodes searched before the root LP is tried.
const PROBE_NODES: u64 = 2000;
/// Wall-clock cap on the root LP and its cut rounds.
const ROOT_LP_TIME: Duration = Duration::from_secs(60);

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
    /// Threads splitting the root branch; `0` and `1` both mean single-threaded.
    pub workers: usize,
    /// Rounds of Gomory cuts on the root relaxation before branching.
    pub cut_rounds: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { time: None, nodes: None, workers: 1, cut_rounds: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Assignment),
    Infeasible,
    Timeout(Duration),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Feasible(_) => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::Timeout(_) => "timeout",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed_ms: u128,
    pub presolve: PresolveStats,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub verdict: Verdict,
    pub stats: SolveStats,
}

/// `{"verdict": …, "assignment": {…}, "stats": {…}}`
#[derive(Serialize)]
pub struct VerdictReport<'a> {
    pub verdict: &'static str,
    pub assignment: Option<&'a Assignment>,
    pub stats: &'a SolveStats,
}

impl Solution {
    pub fn report(&self) -> VerdictReport<'_> {
        VerdictReport {
            verdict: self.verdict.label(),
            assignment: match &self.verdict {
                Verdict::Feasible(a) => Some(a),
                _ => None,
            },
            stats: &self.stats,
        }
    }
}

/// Decides whether `model` has an integer point.
///
/// `Infeasible` is only returned once the search tree is exhausted, and every
/// `Feasible` assignment has been re-checked against the original model.
pub fn solve(model: &Model, limits: Limits) -> Result<Solution> {
    let start = Instant::now();
    let pre = presolve(model)?;
    let mut stats = SolveStats { presolve: pre.stats.clone(), ..Default::default() };
    if pre.infeasible {
        stats.elapsed_ms = start.elapsed().as_millis();
        return Ok(Solution { verdict: Verdict::Infeasible, stats });
    }
    let problem = Problem::from_model(&pre.model);
    let deadline = limits.time.map(|t| start + t);
    let stop = AtomicBool::new(false);
    let mut nodes = 0;

    // A short dive first: easy feasible models are done before the LP is built.
    let probe_nodes = limits.nodes.map_or(PROBE_NODES, |n| n.min(PROBE_NODES));
    let probe = Budget { deadline, max_nodes: Some(probe_nodes), stop: &stop };
    let (mut outcome, used) = search::search(&problem, &probe, limits.workers);
    nodes += used;
    let budget_left = limits.nodes.is_none_or(|n| nodes < n) && deadline.is_none_or(|d| Instant::now() < d);

    if outcome == Outcome::Aborted && budget_left {
        if limits.cut_rounds > 0 && Simplex::fits(&problem) {
            let cap = Instant::now() + ROOT_LP_TIME;
            let lp_deadline = Some(deadline.map_or(cap, |d| d.min(cap)));
            let mut lp = Simplex::new(&problem);
            let root = lp.cut_loop(limits.cut_rounds, 20, lp_deadline);
            tracing::info!(?root, rows = lp.num_rows(), iterations = lp.iterations, ms = start.elapsed().as_millis(), "root relaxation");
            if root == LpStatus::Infeasible {
                outcome = Outcome::Exhausted;
            }
        } else if limits.cut_rounds > 0 {
            tracing::info!(rows = problem.rows.len(), columns = problem.lo.len(), "root relaxation skipped: tableau too large");
        }
        if outcome == Outcome::Aborted {
            let budget = Budget { deadline, max_nodes: limits.nodes.map(|n| n.saturating_sub(nodes)), stop: &stop };
            let (o, used) = search::search(&problem, &budget, limits.workers);
            outcome = o;
            nodes += used;
        }
    }

    stats.nodes = nodes;
    let verdict = match outcome {
        Outcome::Found(reduced) => {
            let values = pre.lift(&reduced)?;
            let (bad_rows, bad_vars) = model.violations(&values);
            assert!(
                bad_rows.is_empty() && bad_vars.is_empty(),
                "solver produced an invalid point: rows {bad_rows:?}, variables {bad_vars:?}"
            );
            Verdict::Feasible(Assignment::from_values(model, &values))
        }
        Outcome::Exhausted => Verdict::Infeasible,
        Outcome::Aborted => Verdict::Timeout(start.elapsed()),
    };
    stats.elapsed_ms = start.elapsed().as_millis();
    tracing::info!(verdict = verdict.label(), nodes, ms = stats.elapsed_ms, "solve finished");
    Ok(Solution { verdict, stats })
}

/// Exact check of every bound and row. Unassigned variables make the
/// assignment invalid; unknown names are an error.
pub fn verify(model: &Model, assignment: &Assignment) -> Result<bool> {
    let values = assignment.to_values(model)?;
    let Some(values) = values.into_iter().collect::<Option<Vec<i64>>>() else {
        return Ok(false);
    };
    let (bad_rows, bad_vars) = model.violations(&values);
    Ok(bad_rows.is_empty() && bad_vars.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Relation, Row, RowFamily, VarKind};

    #[test]
    fn unconstrained_variable_takes_zero() {
        let mut m = Model::empty();
        m.add_variable("x", 0, 1, VarKind::Free).unwrap();
        let s = solve(&m, Limits::default()).unwrap();
        let Verdict::Feasible(a) = s.verdict else { panic!("expected feasible") };
        assert_eq!(a.0["x"], 0);
    }

    #[test]
    fn contradictory_bounds() {
        let mut m = Model::empty();
        let x = m.add_variable("x", -3, 3, VarKind::Free).unwrap();
        m.add_row(Row::new([(x, 1)], Relation::Ge, 1, RowFamily::Other)).unwrap();
        m.add_row(Row::new([(x, 1)], Relation::Le, 0, RowFamily::Other)).unwrap();
        assert_eq!(solve(&m, Limits::default()).unwrap().verdict, Verdict::Infeasible);
    }

    #[test]
    fn parity_needs_search() {
        // 2x + 2y − 2z = 1 as two inequalities; presolve sees no equality.
        let mut m = Model::empty();
        let v: Vec<usize> = (0..3).map(|i| m.add_variable(format!("x{i}"), -2, 2, VarKind::Free).unwrap()).collect();
        m.add_row(Row::new([(v[0], 2), (v[1], 2), (v[2], -2)], Relation::Le, 1, RowFamily::Other)).unwrap();
        m.add_row(Row::new([(v[0], 2), (v[1], 2), (v[2], -2)], Relation::Ge, 1, RowFamily::Other)).unwrap();
        assert_eq!(solve(&m, Limits::default()).unwrap().verdict, Verdict::Infeasible);
    }

    #[test]
    fn verify_checks_bounds_and_names() {
        let mut m = Model::empty();
        let x = m.add_variable("x", -1, 1, VarKind::Free).unwrap();
        let y = m.add_variable("y", -1, 1, VarKind::Free).unwrap();
        m.add_row(Row::new([(x, 1), (y, 1)], Relation::Eq, 1, RowFamily::Other)).unwrap();
        let Verdict::Feasible(a) = solve(&m, Limits::default()).unwrap().verdict else { panic!() };
        assert!(verify(&m, &a).unwrap());
        let mut out = a.clone();
        out.0.insert("x".into(), 2);
        out.0.insert("y".into(), -1);
        assert!(!verify(&m, &out).unwrap());
        let mut missing = a.clone();
        missing.0.remove("y");
        assert!(!verify(&m, &missing).unwrap());
        let mut unknown = a;
        unknown.0.insert("z".into(), 0);
        assert!(verify(&m, &unknown).is_err());
    }

    #[test]
    fn node_budget_times_out() {
        let mut m = Model::empty();
        let v: Vec<usize> = (0..12).map(|i| m.add_variable(format!("x{i}"), 0, 1, VarKind::Free).unwrap()).collect();
        // Σ 2x = 13 is infeasible but only parity shows it.
        m.add_row(Row::new(v.iter().map(|&x| (x, 2)), Relation::Le, 13, RowFamily::Other)).unwrap();
        m.add_row(Row::new(v.iter().map(|&x| (x, 2)), Relation::Ge, 13, RowFamily::Other)).unwrap();
        let s = solve(&m, Limits { nodes: Some(5), cut_rounds: 0, ..Default::default() }).unwrap();
        assert!(matches!(s.verdict, Verdict::Timeout(_)));
        let s = solve(&m, Limits::default()).unwrap();
        assert_eq!(s.verdict, Verdict::Infeasible);
    }

    #[test]
    fn workers_agree() {
        let mut m = Model::empty();
        let v: Vec<usize> = (0..6).map(|i| m.add_variable(format!("x{i}"), -2, 2, VarKind::Free).unwrap()).collect();
        m.add_row(Row::new(v.iter().map(|&x| (x, 1)), Relation::Eq, 7, RowFamily::Other)).unwrap();
        m.add_row(Row::new([(v[0], 1), (v[1], -1)], Relation::Ge, 3, RowFamily::Other)).unwrap();
        for workers in [1, 2, 4] {
            let s = solve(&m, Limits { workers, ..Default::default() }).unwrap();
            let Verdict::Feasible(a) = s.verdict else { panic!("workers={workers}") };
            assert!(verify(&m, &a).unwrap());
        }
    }
}
