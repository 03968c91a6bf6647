//! Equality elimination and bound propagation.
//!
//! Equalities are eliminated through pivots with coefficient ±1, so every
//! substitution keeps integer coefficients and integer solutions of the
//! reduced model lift to integer solutions of the original. Equalities without
//! such a pivot stay in the model; they are still checked for rational
//! consistency and for the gcd condition.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::propagate::{Problem, Propagator};
use crate::error::{Error, Result};
use crate::model::{Model, Relation, Row, RowFamily};

/// `x = constant + Σ coef·y` over surviving variables (original indices).
#[derive(Clone, Debug)]
struct Substitution {
    var: usize,
    constant: i64,
    terms: BTreeMap<usize, i64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PresolveStats {
    pub variables_before: usize,
    pub rows_before: usize,
    pub eliminated: usize,
    pub variables_after: usize,
    pub rows_after: usize,
    pub fixed_after: usize,
}

/// Result of [`presolve`].
#[derive(Clone, Debug)]
pub struct Presolved {
    /// Surviving variables (original names, tightened bounds) and rewritten rows.
    pub model: Model,
    /// Set when presolve alone proved the model infeasible; `model` is then meaningless.
    pub infeasible: bool,
    pub stats: PresolveStats,
    kept: Vec<usize>,
    subs: Vec<Substitution>,
    original_vars: usize,
}

impl Presolved {
    /// Lifts values of the reduced model back to the original variables.
    pub fn lift(&self, reduced: &[i64]) -> Result<Vec<i64>> {
        let mut out = vec![0i64; self.original_vars];
        for (i, &orig) in self.kept.iter().enumerate() {
            out[orig] = reduced[i];
        }
        for s in &self.subs {
            let mut v = i128::from(s.constant);
            for (&y, &c) in &s.terms {
                v += i128::from(c) * i128::from(out[y]);
            }
            out[s.var] = i64::try_from(v).map_err(|_| Error::Overflow("lifting eliminated variable"))?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
struct SparseRow {
    terms: BTreeMap<usize, i64>,
    relation: Relation,
    rhs: i64,
    family: RowFamily,
}

fn ck(v: Option<i64>) -> Result<i64> {
    v.ok_or(Error::Overflow("presolve coefficient growth"))
}

/// `target += factor · (constant + Σ terms)`, moving the constant to `rhs`.
fn substitute(target: &mut BTreeMap<usize, i64>, rhs: Option<&mut i64>, factor: i64, sub: &Substitution) -> Result<()> {
    for (&y, &c) in &sub.terms {
        let e = target.entry(y).or_insert(0);
        *e = ck(e.checked_add(ck(factor.checked_mul(c))?))?;
        if *e == 0 {
            target.remove(&y);
        }
    }
    if let Some(rhs) = rhs {
        *rhs = ck(rhs.checked_sub(ck(factor.checked_mul(sub.constant))?))?;
    }
    Ok(())
}

/// Rational rank test: is the system of equalities solvable over Q?
fn rationally_consistent(rows: &[&SparseRow]) -> bool {
    let mut mat: Vec<(BTreeMap<usize, BigRational>, BigRational)> = rows
        .iter()
        .map(|r| {
            (
                r.terms.iter().map(|(&v, &c)| (v, BigRational::from_integer(c.into()))).collect(),
                BigRational::from_integer(r.rhs.into()),
            )
        })
        .collect();
    let mut done = vec![false; mat.len()];
    for i in 0..mat.len() {
        let Some((&p, pc)) = mat[i].0.iter().next() else {
            if !mat[i].1.is_zero() {
                return false;
            }
            done[i] = true;
            continue;
        };
        let pc = pc.clone();
        let (pivot_terms, pivot_rhs) = mat[i].clone();
        done[i] = true;
        for (j, row) in mat.iter_mut().enumerate() {
            if done[j] {
                continue;
            }
            let Some(c) = row.0.get(&p).cloned() else { continue };
            let f = c / &pc;
            for (v, a) in &pivot_terms {
                let e = row.0.entry(*v).or_insert_with(BigRational::zero);
                *e -= &f * a;
                if e.is_zero() {
                    row.0.remove(v);
                }
            }
            row.1 -= &f * &pivot_rhs;
        }
    }
    true
}

/// Eliminates equalities, then tightens bounds to a fixed point.
pub fn presolve(model: &Model) -> Result<Presolved> {
    let n = model.variables().len();
    let mut rows: Vec<Option<SparseRow>> = model
        .rows()
        .iter()
        .map(|r| {
            Some(SparseRow {
                terms: r.terms.iter().copied().collect(),
                relation: r.relation,
                rhs: r.rhs,
                family: r.family,
            })
        })
        .collect();
    let mut occ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for &v in r.as_ref().expect("fresh").terms.keys() {
            occ[v].insert(i);
        }
    }
    let mut subs: Vec<Substitution> = Vec::new();
    let mut sub_occ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut eliminated = vec![false; n];
    let mut infeasible = false;

    let mut progress = true;
    while progress && !infeasible {
        progress = false;
        for r in 0..rows.len() {
            let Some(row) = rows[r].as_ref() else { continue };
            if row.relation != Relation::Eq {
                continue;
            }
            if row.terms.is_empty() {
                if row.rhs != 0 {
                    infeasible = true;
                    break;
                }
                rows[r] = None;
                continue;
            }
            let Some(p) = row
                .terms
                .iter()
                .filter(|(_, c)| c.abs() == 1)
                .map(|(&v, _)| v)
                .min_by_key(|&v| (occ[v].len(), v))
            else {
                continue;
            };
            let row = rows[r].take().expect("checked");
            for &v in row.terms.keys() {
                occ[v].remove(&r);
            }
            // x_p = a·rhs − Σ_{j≠p} a·c_j x_j with a = ±1 = 1/a.
            let a = row.terms[&p];
            let sub = Substitution {
                var: p,
                constant: a * row.rhs,
                terms: row.terms.iter().filter(|(&v, _)| v != p).map(|(&v, &c)| (v, -a * c)).collect(),
            };
            for rid in std::mem::take(&mut occ[p]) {
                let target = rows[rid].as_mut().expect("occurrence lists track live rows");
                let c = target.terms.remove(&p).expect("occurrence");
                let before: Vec<usize> = target.terms.keys().copied().collect();
                substitute(&mut target.terms, Some(&mut target.rhs), c, &sub)?;
                for v in before {
                    if !target.terms.contains_key(&v) {
                        occ[v].remove(&rid);
                    }
                }
                for &v in target.terms.keys() {
                    occ[v].insert(rid);
                }
            }
            for sid in std::mem::take(&mut sub_occ[p]) {
                let target = &mut subs[sid];
                let c = target.terms.remove(&p).expect("occurrence");
                let before: Vec<usize> = target.terms.keys().copied().collect();
                let mut constant = 0i64;
                substitute(&mut target.terms, Some(&mut constant), c, &sub)?;
                target.constant = ck(target.constant.checked_sub(constant))?;
                for v in before {
                    if !target.terms.contains_key(&v) {
                        sub_occ[v].remove(&sid);
                    }
                }
                for &v in target.terms.keys() {
                    sub_occ[v].insert(sid);
                }
            }
            // The eliminated variable's bounds now constrain its substitute.
            let var = &model.variables()[p];
            for (relation, bound) in [(Relation::Ge, var.lower), (Relation::Le, var.upper)] {
                let rid = rows.len();
                for &v in sub.terms.keys() {
                    occ[v].insert(rid);
                }
                rows.push(Some(SparseRow {
                    terms: sub.terms.clone(),
                    relation,
                    rhs: ck(bound.checked_sub(sub.constant))?,
                    family: RowFamily::Eliminated,
                }));
            }
            let sid = subs.len();
            for &v in sub.terms.keys() {
                sub_occ[v].insert(sid);
            }
            subs.push(sub);
            eliminated[p] = true;
            progress = true;
        }
    }

    let live: Vec<&SparseRow> = rows.iter().flatten().collect();
    for r in &live {
        if r.terms.is_empty() && !r.relation.holds(0, r.rhs.into()) {
            infeasible = true;
        }
        if r.relation == Relation::Eq && !r.terms.is_empty() {
            let g = r.terms.values().fold(0i64, |g, c| g.gcd(c));
            if r.rhs % g != 0 {
                infeasible = true;
            }
        }
    }
    let equalities: Vec<&SparseRow> = live.iter().copied().filter(|r| r.relation == Relation::Eq).collect();
    if !infeasible && !rationally_consistent(&equalities) {
        infeasible = true;
    }

    let kept: Vec<usize> = (0..n).filter(|&v| !eliminated[v]).collect();
    let mut new_index = vec![usize::MAX; n];
    let mut reduced = Model::new(model.info.clone());
    for (i, &v) in kept.iter().enumerate() {
        let var = &model.variables()[v];
        new_index[v] = i;
        reduced.add_variable(var.name.clone(), var.lower, var.upper, var.kind.clone())?;
    }
    for r in live.iter().filter(|r| !r.terms.is_empty()) {
        reduced.add_row(Row::new(r.terms.iter().map(|(&v, &c)| (new_index[v], c)), r.relation, r.rhs, r.family))?;
    }

    if !infeasible {
        let problem = Problem::from_model(&reduced);
        let mut prop = Propagator::new(&problem);
        if prop.propagate_all() {
            for (i, var) in reduced.variables_mut().iter_mut().enumerate() {
                (var.lower, var.upper) = prop.bounds(i);
            }
        } else {
            infeasible = true;
        }
    }

    let stats = PresolveStats {
        variables_before: n,
        rows_before: model.rows().len(),
        eliminated: subs.len(),
        variables_after: reduced.variables().len(),
        rows_after: reduced.rows().len(),
        fixed_after: reduced.variables().iter().filter(|v| v.lower == v.upper).count(),
    };
    tracing::debug!(?stats, infeasible, "presolve");
    Ok(Presolved { model: reduced, infeasible, stats, kept, subs, original_vars: n })
}
