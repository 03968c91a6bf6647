//! Intersection numbers of complementary simplices and the intersection cocycle.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::linalg::{det, Matrix};
use super::map::PointMap;
use super::poly::sign;
use super::Q;
use crate::deleted_product::Cell;
use crate::error::{Error, Result};
use crate::simplicial::Simplex;

fn homogeneous(points: &[&[Q]]) -> Matrix {
    // columns (1, x); stored row-major
    let m = points[0].len();
    (0..=m).map(|r| points.iter().map(|p| if r == 0 { Q::one() } else { p[r - 1].clone() }).collect()).collect()
}

fn check_vertices(f: &PointMap, s: &Simplex) -> Result<()> {
    match s.vertices().iter().find(|&&v| v as usize >= f.len()) {
        Some(v) => Err(Error::VertexOutOfRange { vertex: i64::from(*v), num_vertices: f.len() }),
        None => Ok(()),
    }
}

/// Affine dependence `Σ c_i (1, x_i) = 0` of the `m + 2` points `f(support)`,
/// by signed maximal minors; unique up to scale.
pub(crate) fn dependence(f: &PointMap, support: &Simplex) -> Result<Vec<Q>> {
    let pts: Vec<&[Q]> = support.vertices().iter().map(|&v| f.point(v as usize)).collect();
    let full = homogeneous(&pts);
    let coeffs: Vec<Q> = (0..pts.len())
        .map(|i| {
            let minor: Matrix =
                full.iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect()).collect();
            let d = det(&minor);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    if coeffs.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate(format!("{support:?} is not in general position")));
    }
    Ok(coeffs)
}

fn validate(f: &PointMap, sigma: &Simplex, tau: &Simplex) -> Result<()> {
    let m = f.dim();
    if sigma.dim() + tau.dim() != m {
        return Err(Error::Dimension(format!("{sigma:?} and {tau:?} are not complementary in R^{m}")));
    }
    if !sigma.is_disjoint(tau) {
        return Err(Error::NotDisjoint(sigma.to_string(), tau.to_string()));
    }
    check_vertices(f, sigma)?;
    check_vertices(f, tau)
}

/// `0` when `f(σ)` and `f(τ)` miss each other; otherwise the orientation
/// of `(p, σ_1, …, σ_k, τ_1, …, τ_ℓ)` with `p` the crossing point.
pub fn intersection_number(f: &PointMap, sigma: &Simplex, tau: &Simplex) -> Result<i8> {
    validate(f, sigma, tau)?;
    let support = sigma.union(tau);
    crossing(f, sigma, tau, &support, &dependence(f, &support)?)
}

/// Evaluates `I(f(σ), f(τ))` from the dependence of `f(σ ∪ τ)`.
fn crossing(f: &PointMap, sigma: &Simplex, tau: &Simplex, support: &Simplex, coeffs: &[Q]) -> Result<i8> {
    let m = f.dim();
    let coeff = |v: &u32| &coeffs[support.vertices().binary_search(v).expect("vertex of the support")];
    let cs: Vec<&Q> = sigma.vertices().iter().map(coeff).collect();
    let one_sign = |s: &Simplex| {
        let first = sign(coeff(&s.vertices()[0]));
        s.vertices().iter().all(|v| sign(coeff(v)) == first)
    };
    if !one_sign(sigma) || !one_sign(tau) {
        return Ok(0);
    }
    let total: Q = cs.iter().copied().sum();
    let p: Vec<Q> = (0..m)
        .map(|r| {
            cs.iter().zip(sigma.vertices()).fold(Q::zero(), |acc, (c, &v)| acc + *c * &f.point(v as usize)[r]) / &total
        })
        .collect();
    let mut cols: Vec<&[Q]> = vec![&p];
    cols.extend(sigma.vertices()[1..].iter().map(|&v| f.point(v as usize)));
    cols.extend(tau.vertices()[1..].iter().map(|&v| f.point(v as usize)));
    match sign(&det(&homogeneous(&cols))) {
        0 => Err(Error::Degenerate(format!("crossing of {sigma:?} and {tau:?} is not transversal"))),
        s => Ok(s as i8),
    }
}

/// `φ_f` with the affine dependences of each support memoized.
pub struct Cocycle<'a> {
    f: &'a PointMap,
    deps: HashMap<Simplex, Vec<Q>>,
}

impl<'a> Cocycle<'a> {
    pub fn new(f: &'a PointMap) -> Self {
        Cocycle { f, deps: HashMap::new() }
    }

    pub fn phi(&mut self, c: &Cell) -> Result<i8> {
        validate(self.f, &c.first, &c.second)?;
        let support = c.support();
        if !self.deps.contains_key(&support) {
            let d = dependence(self.f, &support)?;
            self.deps.insert(support.clone(), d);
        }
        let i = crossing(self.f, &c.first, &c.second, &support, &self.deps[&support])?;
        Ok(if c.first.dim().is_multiple_of(2) { i } else { -i })
    }
}

/// The intersection cocycle `φ_f(σ×τ) = (−1)^{dim σ} I(f(σ), f(τ))`.
pub fn phi(f: &PointMap, c: &Cell) -> Result<i8> {
    let i = intersection_number(f, &c.first, &c.second)?;
    Ok(if c.first.dim().is_multiple_of(2) { i } else { -i })
}
