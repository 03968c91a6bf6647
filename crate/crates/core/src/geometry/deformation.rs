//! Deformation cochains of straight-line homotopies, computed per vertex set
//! `J` from the spectrum of the matrix `D` that the homotopy induces.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{charpoly_adjugate, det, inverse, mul, Matrix};
use super::map::{general_position, random_map_with, PointMap};
use super::poly::{isolate, root_bound, sign, sign_at_root, Poly, Sturm};
use super::Q;
use crate::deleted_product::{lambda_swap_sign, Cell};
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, VertexId};

/// Two general position maps of the same vertex set, agreeing on `0..=k`
/// when a shared prefix `k` is given.
#[derive(Clone, Debug)]
pub struct DeformationPair {
    f: PointMap,
    g: PointMap,
    prefix: Option<usize>,
}

impl DeformationPair {
    pub fn new(f: PointMap, g: PointMap, prefix: Option<usize>) -> Result<DeformationPair> {
        if f.dim() != g.dim() || f.len() != g.len() {
            return Err(Error::Dimension(format!(
                "maps of {} points in R^{} and {} points in R^{}",
                f.len(),
                f.dim(),
                g.len(),
                g.dim()
            )));
        }
        if let Some(k) = prefix {
            if k >= f.len() {
                return Err(Error::Dimension(format!("prefix {k} exceeds the vertex set")));
            }
            if let Some(i) = (0..=k).find(|&i| f.point(i) != g.point(i)) {
                return Err(Error::Degenerate(format!("f and g differ at prefix vertex {i}")));
            }
        }
        let pair = DeformationPair { f, g, prefix };
        if !pair.combined_general_position() {
            return Err(Error::Degenerate("f(0..N) ∪ g(k+1..N) is not in general position".into()));
        }
        Ok(pair)
    }

    /// Random `f` and `g` on `0..=n`. `g` defaults to a random map; `f`
    /// copies `g` on `0..=k` for a prefix `k`.
    pub fn random(n: usize, m: usize, seed: u64, prefix: Option<usize>, g: Option<&PointMap>) -> Result<DeformationPair> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = match g {
            Some(g) => g.clone(),
            None => random_map_with(n, m, &mut rng, None, |_| true)?,
        };
        let shared = prefix.map(|k| PointMap::new(m, g.points()[..=k].to_vec())).transpose()?;
        let f = random_map_with(n, m, &mut rng, shared.as_ref(), |f| {
            let extra = prefix.map_or(0, |k| k + 1);
            let pts: Vec<&Vec<Q>> = f.points().iter().chain(&g.points()[extra..]).collect();
            general_position(&pts, m)
        })?;
        DeformationPair::new(f, g, prefix)
    }

    fn combined_general_position(&self) -> bool {
        let extra = self.prefix.map_or(0, |k| k + 1);
        let pts: Vec<&Vec<Q>> = self.f.points().iter().chain(&self.g.points()[extra..]).collect();
        general_position(&pts, self.f.dim())
    }

    pub fn f(&self) -> &PointMap {
        &self.f
    }

    pub fn g(&self) -> &PointMap {
        &self.g
    }

    pub fn prefix(&self) -> Option<usize> {
        self.prefix
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// Largest vertex index `N`.
    pub fn max_vertex(&self) -> usize {
        self.f.len() - 1
    }
}

/// Everything the spectrum of `D_J` says about the cells supported on `J`.
#[derive(Clone, Debug)]
pub struct Family {
    pub support: Simplex,
    /// The vertex placed first; it always lies in the first factor of the cells in `values`.
    pub base: VertexId,
    /// Orientation of `g` on `J` listed base-first.
    pub eps_g: i64,
    pub det_d: i64,
    pub mult_one: usize,
    pub negative_roots: usize,
    /// Nonzero values only.
    pub values: BTreeMap<Cell, i64>,
}

impl Family {
    /// `λ` on a cell whose first factor holds `base`.
    pub fn get(&self, c: &Cell) -> i64 {
        self.values.get(c).copied().unwrap_or(0)
    }
}

fn perm_sign<T: Ord>(seq: &[T]) -> i64 {
    let inv = seq.iter().tuple_combinations().filter(|(a, b)| a > b).count();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn degenerate(j: &Simplex, what: &str) -> Error {
    Error::Degenerate(format!("{what} on {j:?}"))
}

/// The family of `J = support` with `base` listed first.
pub fn family_with_base(pair: &DeformationPair, support: &Simplex, base: VertexId) -> Result<Family> {
    let m = pair.dim();
    if support.len() != m + 1 {
        return Err(Error::Dimension(format!("{support:?} needs {} vertices in R^{m}", m + 1)));
    }
    if let Some(&v) = support.vertices().iter().find(|&&v| v as usize > pair.max_vertex()) {
        return Err(Error::VertexOutOfRange { vertex: i64::from(v), num_vertices: pair.f.len() });
    }
    if !support.contains(base) {
        return Err(Error::InvalidSimplex(format!("base {base} not in {support:?}")));
    }
    let order: Vec<VertexId> =
        std::iter::once(base).chain(support.vertices().iter().copied().filter(|&v| v != base)).collect();
    let columns = |map: &PointMap| -> Matrix {
        let o = map.point(order[0] as usize);
        (0..m).map(|r| order[1..].iter().map(|&v| &map.point(v as usize)[r] - &o[r]).collect()).collect()
    };
    let gm = columns(&pair.g);
    let eps_g = sign(&det(&gm)) as i64;
    let ginv = inverse(&gm).ok_or_else(|| degenerate(support, "g collapses"))?;
    let d = mul(&ginv, &columns(&pair.f));
    let det_d = sign(&det(&d)) as i64;
    if det_d == 0 {
        return Err(degenerate(support, "singular D"));
    }
    let (chi, adj) = charpoly_adjugate(&d);
    let mult_one = chi.multiplicity(&Q::from_integer(1.into()));
    let sqf = chi.squarefree();
    let bound = root_bound(&sqf);
    let (lo, hi) = (-bound, Q::zero());
    let repeated = chi.gcd(&chi.derivative());
    if repeated.degree().unwrap_or(0) > 0 && Sturm::new(&repeated.squarefree()).count(&lo, &hi) > 0 {
        return Err(degenerate(support, "repeated negative eigenvalue"));
    }
    let dchi = chi.derivative();
    let roots = isolate(&sqf, &lo, &hi);
    let mut values: BTreeMap<Cell, i64> = BTreeMap::new();
    for root in &roots {
        // any nonzero column of adj(uI − D) spans the eigenspace of a simple root
        let (col, signs) = (0..m)
            .map(|col| (col, (0..m).map(|i| sign_at_root(&adj[i][col], &sqf, root)).collect::<Vec<i32>>()))
            .find(|(_, v)| v.iter().any(|&s| s != 0))
            .ok_or_else(|| degenerate(support, "eigenvalue without eigenvector column"))?;
        if signs.contains(&0) {
            return Err(degenerate(support, "eigenvector with a zero component"));
        }
        let sum = (0..m).fold(Poly::zero(), |acc, i| acc.add(&adj[i][col]));
        let flip = match sign_at_root(&sum, &sqf, root) {
            0 => return Err(degenerate(support, "eigenvector with zero coordinate sum")),
            s => -s,
        };
        let mut plus = vec![0usize];
        let mut minus = Vec::new();
        for (i, &s) in signs.iter().enumerate() {
            if s * flip > 0 {
                plus.push(i + 1);
            } else {
                minus.push(i + 1);
            }
        }
        let positions: Vec<usize> = plus.iter().chain(&minus).copied().collect();
        let a: Vec<VertexId> = plus.iter().map(|&p| order[p]).collect();
        let b: Vec<VertexId> = minus.iter().map(|&p| order[p]).collect();
        let s = perm_sign(&positions) * perm_sign(&a) * perm_sign(&b) * i64::from(sign_at_root(&dchi, &sqf, root));
        let cell = Cell::new(Simplex::new(a)?, Simplex::new(b)?)?;
        *values.entry(cell).or_insert(0) += eps_g * s;
    }
    values.retain(|_, v| *v != 0);
    Ok(Family { support: support.clone(), base, eps_g, det_d, mult_one, negative_roots: roots.len(), values })
}

/// The family of `J` based at its minimum.
pub fn family(pair: &DeformationPair, support: &Simplex) -> Result<Family> {
    family_with_base(pair, support, support.min_vertex())
}

/// `λ_{f,g}` on an `(m−1)`-cell.
pub fn lambda(pair: &DeformationPair, c: &Cell) -> Result<i64> {
    let m = pair.dim();
    if c.dim() + 1 != m {
        return Err(Error::Dimension(format!("cell {c} has dimension {}, expected {}", c.dim(), m - 1)));
    }
    let fam = family(pair, &c.support())?;
    Ok(lambda_in(&fam, c))
}

/// Looks `c` up in a family of its support, swapping factors if needed.
pub fn lambda_in(fam: &Family, c: &Cell) -> i64 {
    if c.first.contains(fam.base) {
        fam.get(c)
    } else {
        lambda_swap_sign(&c.first, &c.second) * fam.get(&c.swapped())
    }
}

/// Families of every `(m+1)`-subset of `0..=N`.
pub fn all_families(pair: &DeformationPair) -> Result<BTreeMap<Simplex, Family>> {
    let m = pair.dim();
    let mut out = BTreeMap::new();
    for j in (0..=pair.max_vertex() as VertexId).combinations(m + 1) {
        let j = Simplex::new(j)?;
        out.insert(j.clone(), family(pair, &j)?);
    }
    Ok(out)
}

/// Draws pairs until one has only general eigenvalues; returns it, its
/// families and the number of rejected draws.
pub fn random_general_pair(
    n: usize,
    m: usize,
    rng: &mut impl Rng,
    prefix: Option<usize>,
    g: Option<&PointMap>,
) -> Result<(DeformationPair, BTreeMap<Simplex, Family>, usize)> {
    for rejected in 0..100 {
        let pair = DeformationPair::random(n, m, rng.random(), prefix, g)?;
        match all_families(&pair) {
            Ok(fams) => return Ok((pair, fams, rejected)),
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate("no pair with general eigenvalues after 100 draws".into()))
}
