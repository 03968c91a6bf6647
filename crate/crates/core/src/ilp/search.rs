//! Depth-first search with propagation after every assignment.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::propagate::{Problem, Propagator};

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Found(Vec<i64>),
    Exhausted,
    Aborted,
}

pub(crate) struct Budget<'s> {
    pub deadline: Option<Instant>,
    pub max_nodes: Option<u64>,
    pub stop: &'s AtomicBool,
}

struct Dfs<'a, 's> {
    prop: Propagator<'a>,
    budget: &'a Budget<'s>,
    nodes: u64,
}

/// `0, −1, 1, −2, 2, …` restricted to `[lo, hi]`.
pub(crate) fn value_order(lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    let start = 0i64.clamp(lo, hi);
    let reach = (start - lo).max(hi - start);
    std::iter::once(start).chain((1..=reach).flat_map(move |d| [start - d, start + d])).filter(move |v| (lo..=hi).contains(v))
}

/// Unfixed variable with the smallest domain; ties go to the one in most
/// rows, then the lowest index.
pub(crate) fn pick(prop: &Propagator) -> Option<usize> {
    let p = prop.problem;
    (0..p.lo.len())
        .filter_map(|v| {
            let (lo, hi) = prop.bounds(v);
            (lo < hi).then(|| (hi - lo, std::cmp::Reverse(p.rows_of[v].len()), v))
        })
        .min()
        .map(|(_, _, v)| v)
}

impl Dfs<'_, '_> {
    fn out_of_budget(&self) -> bool {
        if self.budget.stop.load(Ordering::Relaxed) {
            return true;
        }
        if self.budget.max_nodes.is_some_and(|n| self.nodes >= n) {
            return true;
        }
        self.nodes.is_multiple_of(256) && self.budget.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn run(&mut self) -> Outcome {
        self.nodes += 1;
        if self.out_of_budget() {
            return Outcome::Aborted;
        }
        let Some(v) = pick(&self.prop) else {
            return Outcome::Found(self.prop.values().to_vec());
        };
        let (lo, hi) = self.prop.bounds(v);
        for val in value_order(lo, hi) {
            let mark = self.prop.mark();
            if self.prop.assign(v, val) {
                match self.run() {
                    Outcome::Exhausted => {}
                    other => return other,
                }
            }
            self.prop.undo(mark);
        }
        Outcome::Exhausted
    }
}

/// Searches `problem`; the root branching values are shared out among
/// `workers` threads when `workers > 1`. Returns the outcome and node count.
pub(crate) fn search(problem: &Problem, budget: &Budget, workers: usize) -> (Outcome, u64) {
    let mut root = Propagator::new(problem);
    if !root.propagate_all() {
        return (Outcome::Exhausted, 1);
    }
    let Some(v) = pick(&root) else {
        return (Outcome::Found(root.values().to_vec()), 1);
    };
    if workers <= 1 {
        let mut dfs = Dfs { prop: root, budget, nodes: 0 };
        let out = dfs.run();
        return (out, dfs.nodes);
    }

    let (lo, hi) = root.bounds(v);
    let values: Vec<i64> = value_order(lo, hi).collect();
    let next = AtomicUsize::new(0);
    let found: Mutex<Option<Vec<i64>>> = Mutex::new(None);
    let aborted = AtomicBool::new(false);
    let total_nodes = AtomicUsize::new(1);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(values.len()) {
            let root = root.clone();
            let (values, next, found, aborted, total_nodes) = (&values, &next, &found, &aborted, &total_nodes);
            scope.spawn(move || {
                let mut dfs = Dfs { prop: root, budget, nodes: 0 };
                loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(&val) = values.get(i) else { break };
                    let mark = dfs.prop.mark();
                    let outcome = if dfs.prop.assign(v, val) { dfs.run() } else { Outcome::Exhausted };
                    dfs.prop.undo(mark);
                    match outcome {
                        Outcome::Exhausted => {}
                        Outcome::Found(vals) => {
                            found.lock().expect("poisoned").get_or_insert(vals);
                            budget.stop.store(true, Ordering::SeqCst);
                            break;
                        }
                        Outcome::Aborted => {
                            aborted.store(true, Ordering::SeqCst);
                            break;
                        }
                    }
                }
                total_nodes.fetch_add(dfs.nodes as usize, Ordering::SeqCst);
            });
        }
    });
    let nodes = total_nodes.into_inner() as u64;
    if let Some(vals) = found.into_inner().expect("poisoned") {
        return (Outcome::Found(vals), nodes);
    }
    if aborted.into_inner() {
        (Outcome::Aborted, nodes)
    } else {
        (Outcome::Exhausted, nodes)
    }
}
