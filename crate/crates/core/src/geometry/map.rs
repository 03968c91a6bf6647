//! Vertex maps into Q^m: the moment curve and seeded random maps.

use itertools::Itertools;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{rank, Matrix};
use super::Q;
use crate::error::{Error, Result};

const MAX_RESAMPLES: usize = 1000;

/// Image points of the vertices `0..=N`, all in Q^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    m: usize,
    points: Vec<Vec<Q>>,
}

impl PointMap {
    pub fn new(m: usize, points: Vec<Vec<Q>>) -> Result<PointMap> {
        if let Some(p) = points.iter().find(|p| p.len() != m) {
            return Err(Error::Dimension(format!("point with {} coordinates in R^{m}", p.len())));
        }
        Ok(PointMap { m, points })
    }

    pub fn from_integers(m: usize, points: &[&[i64]]) -> Result<PointMap> {
        PointMap::new(m, points.iter().map(|p| p.iter().map(|&x| Q::from_integer(x.into())).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Number of vertices, `N + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, v: usize) -> &[Q] {
        &self.points[v]
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    pub fn is_general_position(&self) -> bool {
        general_position(&self.points.iter().collect::<Vec<_>>(), self.m)
    }
}

/// `c(i) = (i, i², …, i^m)` for `i = 0..=n`.
pub fn moment_map(n: usize, m: usize) -> PointMap {
    let points = (0..=n)
        .map(|i| {
            let x = BigInt::from(i);
            (1..=m).map(|e| Q::from_integer(x.pow(e as u32))).collect()
        })
        .collect();
    PointMap { m, points }
}

fn affinely_independent(pts: &[&Vec<Q>]) -> bool {
    let Some((first, rest)) = pts.split_first() else { return true };
    let diffs: Matrix = rest.iter().map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect()).collect();
    rank(&diffs) == rest.len()
}

/// Every `m + 1` of the points (or all of them, if fewer) are affinely independent.
pub fn general_position(pts: &[&Vec<Q>], m: usize) -> bool {
    if pts.len() <= m + 1 {
        return affinely_independent(pts);
    }
    pts.iter().copied().combinations(m + 1).all(|subset| affinely_independent(&subset))
}

/// Draws one coordinate: an integer in `[−50, 50]` over a denominator in `1..=10`.
pub(crate) fn random_coord(rng: &mut impl Rng) -> Q {
    let num: i64 = rng.random_range(-50..=50);
    let den: i64 = rng.random_range(1..=10);
    Q::new(num.into(), den.into())
}

/// A general position map on `0..=n`. Vertices covered by `prefix` copy its
/// points; the rest are random. Degenerate candidates are redrawn.
pub fn random_map(n: usize, m: usize, seed: u64, prefix: Option<&PointMap>) -> Result<PointMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_map_with(n, m, &mut rng, prefix, |_| true)
}

pub(crate) fn random_map_with(
    n: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
    prefix: Option<&PointMap>,
    accept: impl Fn(&PointMap) -> bool,
) -> Result<PointMap> {
    let fixed: &[Vec<Q>] = prefix.map_or(&[], |p| &p.points[..p.len().min(n + 1)]);
    if prefix.is_some_and(|p| p.m != m) {
        return Err(Error::Dimension("prefix lives in a different dimension".into()));
    }
    for _ in 0..MAX_RESAMPLES {
        let mut points = fixed.to_vec();
        while points.len() <= n {
            points.push((0..m).map(|_| random_coord(rng)).collect());
        }
        let map = PointMap { m, points };
        if map.is_general_position() && accept(&map) {
            return Ok(map);
        }
    }
    Err(Error::Degenerate(format!("no general position map after {MAX_RESAMPLES} draws")))
}
