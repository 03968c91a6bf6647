//! Cells of the deleted product: ordered pairs of disjoint simplices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex, VertexId};

/// The product cell `first × second` of two disjoint simplices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub first: Simplex,
    pub second: Simplex,
}

impl Cell {
    pub fn new(first: Simplex, second: Simplex) -> Result<Self> {
        if !first.is_disjoint(&second) {
            return Err(Error::NotDisjoint(first.to_string(), second.to_string()));
        }
        Ok(Cell { first, second })
    }

    pub fn dim(&self) -> usize {
        self.first.dim() + self.second.dim()
    }

    /// Union of the two vertex sets.
    pub fn support(&self) -> Simplex {
        self.first.union(&self.second)
    }

    pub fn swapped(&self) -> Cell {
        Cell { first: self.second.clone(), second: self.first.clone() }
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}x{:?}", self.first, self.second)
    }
}

/// Text encoding used in variable names: `0_2x1_3` for `{0,2} × {1,3}`.
impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.first, self.second)
    }
}

impl FromStr for Cell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('x')
            .ok_or_else(|| Error::Parse(format!("cell `{s}` lacks `x` separator")))?;
        let parse = |part: &str| -> Result<Simplex> {
            let vs = part
                .split('_')
                .map(|v| v.parse::<VertexId>().map_err(|e| Error::Parse(format!("{part}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if vs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!("`{part}` is not strictly increasing")));
            }
            Simplex::new(vs)
        };
        Cell::new(parse(a)?, parse(b)?)
    }
}

/// All ordered pairs of disjoint faces of `k` with dimensions summing to `d`,
/// sorted lexicographically by `(first, second)`.
pub fn cells(k: &SimplicialComplex, d: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    for a in 0..=d {
        for first in k.faces_of_dim(a) {
            for second in k.faces_of_dim(d - a) {
                if first.is_disjoint(second) {
                    out.push(Cell { first: first.clone(), second: second.clone() });
                }
            }
        }
    }
    out.sort();
    out
}

/// Cells of dimension `d` in the deleted product of the `max_face_dim`-skeleton
/// of the simplex on vertices `0..=n`.
pub fn cells_full(n: usize, d: usize, max_face_dim: usize) -> Vec<Cell> {
    let skeleton = SimplicialComplex::full_skeleton(n + 1, max_face_dim)
        .expect("a full skeleton always has facets");
    cells(&skeleton, d)
}

/// Sign relating the deformation cochain on `a × b` to its value on `b × a`:
/// `(-1)^{(dim a + 1)(dim b + 1)}`.
pub fn lambda_swap_sign(a: &Simplex, b: &Simplex) -> i64 {
    if ((a.dim() + 1) * (b.dim() + 1)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Representative of `{c, swap(c)}` whose first factor holds the smaller
/// vertex, together with the sign `s` such that `λ(c) = s·λ(representative)`.
pub fn canonicalize(c: &Cell) -> (Cell, i64) {
    if c.first < c.second {
        (c.clone(), 1)
    } else {
        (c.swapped(), lambda_swap_sign(&c.first, &c.second))
    }
}

/// Formal integer combination of cells; terms distinct, coefficients nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedCellSum(Vec<(Cell, i64)>);

impl SignedCellSum {
    pub fn terms(&self) -> &[(Cell, i64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Merges duplicate cells and drops zero coefficients; result sorted by cell.
    pub fn from_terms<I: IntoIterator<Item = (Cell, i64)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Cell, i64> = BTreeMap::new();
        for (c, k) in terms {
            *acc.entry(c).or_insert(0) += k;
        }
        SignedCellSum(acc.into_iter().filter(|(_, k)| *k != 0).collect())
    }

    /// Applies `coboundary_row` termwise and collects the result.
    pub fn expand_faces(&self) -> SignedCellSum {
        SignedCellSum::from_terms(self.0.iter().flat_map(|(c, k)| {
            coboundary_row(c).0.into_iter().map(move |(f, j)| (f, k * j))
        }))
    }
}

/// The faces of `σ × τ` with the signs of the cochain coboundary:
///
/// `δλ(σ×τ) = Σ_i (-1)^i λ(σ^i×τ) + Σ_j (-1)^{dim σ + j} λ(σ×τ^j)`,
///
/// where `σ^i` drops the `i`-th vertex. Vertex factors contribute nothing.
/// Terms come out in the order of the formula.
pub fn coboundary_row(c: &Cell) -> SignedCellSum {
    let mut terms = Vec::with_capacity(c.first.len() + c.second.len());
    let alt = |i: usize| if i.is_multiple_of(2) { 1 } else { -1 };
    if c.first.dim() > 0 {
        for i in 0..c.first.len() {
            let face = c.first.delete(i).expect("dim > 0");
            terms.push((Cell { first: face, second: c.second.clone() }, alt(i)));
        }
    }
    if c.second.dim() > 0 {
        for j in 0..c.second.len() {
            let face = c.second.delete(j).expect("dim > 0");
            terms.push((Cell { first: c.first.clone(), second: face }, alt(c.first.dim() + j)));
        }
    }
    SignedCellSum(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::parse_complex;

    fn s(v: &[VertexId]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn cell(a: &[VertexId], b: &[VertexId]) -> Cell {
        Cell::new(s(a), s(b)).unwrap()
    }

    #[test]
    fn encoding_round_trip() {
        let c = cell(&[0, 2], &[1, 3]);
        assert_eq!(c.to_string(), "0_2x1_3");
        assert_eq!("0_2x1_3".parse::<Cell>().unwrap(), c);
        assert!("0_2x2_3".parse::<Cell>().is_err());
        assert!("0_2".parse::<Cell>().is_err());
    }

    #[test]
    fn triangle_vertex_pairs() {
        let k = parse_complex(r#"{"num_vertices":3,"facets":[[0,1,2]]}"#).unwrap();
        assert_eq!(cells(&k, 0).len(), 6);
        assert_eq!(cells_full(2, 0, 1).len(), 6);
    }

    #[test]
    fn full_simplex_counts() {
        assert_eq!(cells_full(8, 2, 3).len(), 1764);
        // 7 vertices: 2·7·C(6,3) vertex×triangle plus C(7,2)·C(5,2) edge×edge
        assert_eq!(cells_full(6, 2, 3).len(), 280 + 210);
    }

    #[test]
    fn canonical_signs() {
        let (rep, sign) = canonicalize(&cell(&[2, 3], &[0, 1]));
        assert_eq!((rep, sign), (cell(&[0, 1], &[2, 3]), 1));
        let (rep, sign) = canonicalize(&cell(&[1, 2, 3], &[0]));
        assert_eq!((rep, sign), (cell(&[0], &[1, 2, 3]), -1));
        let c = cell(&[0, 4], &[1]);
        assert_eq!(canonicalize(&c), (c, 1));
    }

    #[test]
    fn coboundary_expansion() {
        let row = coboundary_row(&cell(&[0, 1], &[2, 3]));
        assert_eq!(
            row.terms(),
            &[
                (cell(&[1], &[2, 3]), 1),
                (cell(&[0], &[2, 3]), -1),
                (cell(&[0, 1], &[3]), -1),
                (cell(&[0, 1], &[2]), 1),
            ]
        );
        let row = coboundary_row(&cell(&[4], &[1, 2]));
        assert_eq!(row.terms(), &[(cell(&[4], &[2]), 1), (cell(&[4], &[1]), -1)]);
    }

    #[test]
    fn coboundary_squares_to_zero() {
        for c in cells_full(6, 3, 3).into_iter().chain(cells_full(7, 4, 3)) {
            let row = SignedCellSum::from_terms(coboundary_row(&c).terms().iter().cloned());
            assert!(row.expand_faces().is_empty(), "{c}");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_stable() {
        let a = cells_full(5, 2, 3);
        let b = cells_full(5, 2, 3);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }
}
