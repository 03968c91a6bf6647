//! Finite abstract simplicial complexes on the vertex set `{0, ..., N}`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Vertex label, always 0-based.
pub type VertexId = u32;

/// An oriented simplex: a nonempty, strictly increasing list of vertices.
///
/// The orientation is the one induced by the increasing vertex order. The
/// derived `Ord` is lexicographic on the vertex list, which is the canonical
/// order used for every enumeration in this crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Simplex(SmallVec<[VertexId; 4]>);

impl Simplex {
    /// Builds a simplex from an arbitrary vertex list; sorts it and rejects
    /// empty or repeated input.
    pub fn new<I: IntoIterator<Item = VertexId>>(vertices: I) -> Result<Self> {
        let mut v: SmallVec<[VertexId; 4]> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidSimplex("empty vertex list".into()));
        }
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("repeated vertex in {v:?}")));
        }
        Ok(Simplex(v))
    }

    /// Builds a simplex from vertices already known to be strictly increasing.
    pub(crate) fn from_sorted(v: SmallVec<[VertexId; 4]>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_vertex(&self) -> VertexId {
        self.0[0]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// The facet opposite to the `i`-th vertex. `None` for a vertex.
    pub fn delete(&self, i: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(Simplex(v))
    }

    /// Sorted union of two disjoint simplices.
    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: SmallVec<[VertexId; 4]> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u32..(1u32 << n)).map(move |mask| {
            Simplex(
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }
}

impl TryFrom<Vec<VertexId>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<VertexId>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.0.into_vec()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Vertices joined by `_`, e.g. `0_2_5`.
impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "_")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Signed boundary of a simplex: the `i`-th entry deletes the `i`-th vertex and
/// carries sign `(-1)^i`. A vertex has empty boundary.
pub fn boundary(s: &Simplex) -> Vec<(Simplex, i64)> {
    if s.dim() == 0 {
        return Vec::new();
    }
    (0..s.len())
        .map(|i| (s.delete(i).expect("dim >= 1"), if i % 2 == 0 { 1 } else { -1 }))
        .collect()
}

/// Face counts by dimension, `(f_0, f_1, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<usize>);

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// On-disk complex description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default)]
    pub name: String,
    pub num_vertices: usize,
    pub facets: Vec<Vec<i64>>,
    #[serde(default)]
    pub one_based: bool,
}

/// A finite simplicial complex, closed under taking faces.
///
/// Immutable once built. Faces are grouped by dimension and sorted
/// lexicographically inside each group.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    name: String,
    num_vertices: usize,
    facets: Vec<Simplex>,
    faces: Vec<Vec<Simplex>>,
    face_set: HashSet<Simplex>,
}

impl SimplicialComplex {
    /// Builds the closure of a facet list on `num_vertices` vertices.
    ///
    /// Non-maximal entries of `facets` are dropped, so `facets()` always
    /// returns the inclusion-maximal simplices.
    pub fn from_facets(
        name: impl Into<String>,
        num_vertices: usize,
        facets: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self> {
        let mut set: BTreeSet<Simplex> = BTreeSet::new();
        for f in facets {
            if let Some(&v) = f.vertices().iter().find(|&&v| v as usize >= num_vertices) {
                return Err(Error::VertexOutOfRange { vertex: v as i64, num_vertices });
            }
            set.insert(f);
        }
        if set.is_empty() {
            return Err(Error::EmptyFacets);
        }

        let mut face_set = HashSet::new();
        for f in &set {
            face_set.extend(f.faces());
        }
        let max_dim = set.iter().map(Simplex::dim).max().unwrap_or(0);
        let mut faces = vec![Vec::new(); max_dim + 1];
        for f in &face_set {
            faces[f.dim()].push(f.clone());
        }
        for group in &mut faces {
            group.sort();
        }

        // keep only maximal simplices
        let facets: Vec<Simplex> = set
            .iter()
            .filter(|f| {
                !set.iter()
                    .any(|g| g.len() > f.len() && f.vertices().iter().all(|v| g.contains(*v)))
            })
            .cloned()
            .collect();

        let used: HashSet<VertexId> = faces[0].iter().map(|s| s.min_vertex()).collect();
        if used.len() < num_vertices {
            tracing::warn!(
                unused = num_vertices - used.len(),
                "complex declares vertices that no facet uses"
            );
        }

        Ok(SimplicialComplex { name: name.into(), num_vertices, facets, faces, face_set })
    }

    /// The full `max_dim`-skeleton of the simplex on `num_vertices` vertices.
    pub fn full_skeleton(num_vertices: usize, max_dim: usize) -> Result<Self> {
        let k = (max_dim + 1).min(num_vertices);
        let facets = itertools::Itertools::combinations(0..num_vertices as VertexId, k)
            .map(|c| Simplex::from_sorted(c.into_iter().collect()));
        Self::from_facets(format!("skeleton({num_vertices},{max_dim})"), num_vertices, facets)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Faces of dimension `d`, sorted; empty above the top dimension.
    pub fn faces_of_dim(&self, d: usize) -> &[Simplex] {
        self.faces.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All faces, by increasing dimension.
    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.face_set.contains(s)
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.faces.iter().map(Vec::len).collect())
    }
}

/// Parses the JSON complex schema `{"name", "num_vertices", "facets", "one_based"?}`.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    complex_from_file(file)
}

pub fn complex_from_file(file: ComplexFile) -> Result<SimplicialComplex> {
    if file.facets.is_empty() {
        return Err(Error::EmptyFacets);
    }
    let shift = i64::from(file.one_based);
    let mut facets = Vec::with_capacity(file.facets.len());
    for raw in &file.facets {
        let mut vs = Vec::with_capacity(raw.len());
        for &v in raw {
            let v0 = v - shift;
            if v0 < 0 || v0 >= file.num_vertices as i64 {
                return Err(Error::VertexOutOfRange { vertex: v, num_vertices: file.num_vertices });
            }
            vs.push(v0 as VertexId);
        }
        facets.push(Simplex::new(vs)?);
    }
    SimplicialComplex::from_facets(file.name, file.num_vertices, facets)
}

impl SimplicialComplex {
    /// Serializable description (0-based, maximal facets only).
    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            name: self.name.clone(),
            num_vertices: self.num_vertices,
            facets: self
                .facets
                .iter()
                .map(|f| f.vertices().iter().map(|&v| v as i64).collect())
                .collect(),
            one_based: false,
        }
    }
}
