//! Assembly of the obstruction system and its cheaper subsystems.
//!
//! Unknowns are the values of an integer cochain `λ` on the `(m−1)`-cells of a
//! deleted product, read as the deformation cochain from a hypothetical
//! embedding to the cyclic map. Every row below is a necessary condition on
//! such a cochain, so an infeasible model certifies non-embeddability.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cyclic::phi_c;
use crate::deleted_product::{canonicalize, cells, coboundary_row, lambda_swap_sign, Cell};
use crate::error::{Error, Result};
use crate::model::{Model, ModelInfo, Relation, Row, RowFamily, VarKind};
use crate::simplicial::{Simplex, SimplicialComplex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Every family over the deleted product of the full `m`-skeleton.
    Full,
    /// Coboundary equalities plus the uniform bound `|λ| ≤ ⌈m/2⌉`.
    Novik,
    /// Coboundary equalities, per-cell index bounds and linking rows.
    Minimal,
    /// `minimal` plus one slack variable per `J` standing in for the cells outside `K`.
    SubY,
    /// `minimal` plus bounds on signed sums over chosen subsets of each `𝒫_J`.
    SubSubsets,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Full, Preset::Novik, Preset::Minimal, Preset::SubY, Preset::SubSubsets];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Full => "full",
            Preset::Novik => "novik",
            Preset::Minimal => "minimal",
            Preset::SubY => "sub_y",
            Preset::SubSubsets => "sub_subsets",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s || p.as_str().replace('_', "-") == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// How `Σ|x_i| ≤ q` is written down.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsEncoding {
    /// `a_i ≥ ±x_i`, `Σ a_i ≤ q`.
    #[default]
    Auxiliary,
    /// One row `Σ ε_i x_i ≤ q` per sign vector `ε`.
    SignPatterns,
}

/// Which subsets `S ⊆ 𝒫_J ∩ dprod K` get a row in the `sub_subsets` preset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetPolicy {
    /// All nonempty subsets up to this size.
    pub max_size: usize,
    /// Also the whole of `𝒫_J ∩ dprod K`.
    pub include_full: bool,
}

impl Default for SubsetPolicy {
    fn default() -> Self {
        SubsetPolicy { max_size: 2, include_full: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub preset: Preset,
    /// Identify `λ(a×b)` with `±λ(b×a)` instead of emitting equality rows.
    pub symmetry_reduction: bool,
    pub abs_encoding: AbsEncoding,
    pub subset_policy: SubsetPolicy,
}

impl SystemConfig {
    pub fn new(preset: Preset) -> Self {
        SystemConfig {
            preset,
            symmetry_reduction: true,
            abs_encoding: AbsEncoding::default(),
            subset_policy: SubsetPolicy::default(),
        }
    }
}

/// `ℓ_J^k`: elements of `J` other than its minimum lying in `1..=k`.
pub fn ell(j: &Simplex, k: usize) -> usize {
    j.vertices()[1..].iter().filter(|&&v| v >= 1 && (v as usize) <= k).count()
}

/// Sign of the permutation sorting the sequence `plus ++ minus`.
pub fn shuffle_sign(plus: &Simplex, minus: &Simplex) -> Result<i64> {
    if !plus.is_disjoint(minus) {
        return Err(Error::Partition(format!("{plus:?} and {minus:?} overlap")));
    }
    if minus.min_vertex() < plus.min_vertex() {
        return Err(Error::Partition(format!("{minus:?} holds the minimum, expected {plus:?} to")));
    }
    let inversions: usize = plus.vertices().iter().map(|&p| minus.vertices().iter().filter(|&&q| q < p).count()).sum();
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// The cells `τ₊ × τ₋` with `τ₊ ⊔ τ₋ = J` and `min J ∈ τ₊`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionFamily {
    pub support: Simplex,
    pub pairs: Vec<Cell>,
}

impl PartitionFamily {
    pub fn new(support: &Simplex) -> Result<Self> {
        if support.len() < 2 {
            return Err(Error::Partition(format!("{support:?} has fewer than two vertices")));
        }
        let (j0, rest) = support.vertices().split_first().expect("nonempty");
        let mut pairs = Vec::with_capacity((1 << rest.len()) - 1);
        for mask in 1..(1u32 << rest.len()) {
            let minus: Vec<VertexId> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            let plus = std::iter::once(*j0).chain(rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &v)| v));
            pairs.push(Cell { first: Simplex::new(plus)?, second: Simplex::new(minus)? });
        }
        pairs.sort();
        Ok(PartitionFamily { support: support.clone(), pairs })
    }

    pub fn signed(&self) -> impl Iterator<Item = (&Cell, i64)> {
        self.pairs.iter().map(|c| (c, shuffle_sign(&c.first, &c.second).expect("valid partition")))
    }
}

fn ceil_half(q: i64) -> i64 {
    (q + 1).div_euclid(2)
}

fn floor_half(q: i64) -> i64 {
    q.div_euclid(2)
}

/// Maps cells of the cochain domain (both orientations) to `(variable, sign)`
/// with `λ(cell) = sign · x[variable]`.
pub fn lambda_lookup(model: &Model) -> HashMap<Cell, (usize, i64)> {
    let mut out = HashMap::new();
    for (i, v) in model.variables().iter().enumerate() {
        if let VarKind::Lambda(c) = &v.kind {
            out.insert(c.clone(), (i, 1));
            if model.info.symmetry_reduction {
                out.insert(c.swapped(), (i, lambda_swap_sign(&c.first, &c.second)));
            }
        }
    }
    out
}

/// Translates a cochain on all cells into a variable assignment for `model`.
/// Auxiliary and slack variables get the values their defining rows force.
pub fn assignment_from_cochain(model: &Model, lambda: impl Fn(&Cell) -> i64) -> Vec<i64> {
    let present = lambda_lookup(model);
    let rest = |j: &Simplex| -> i64 {
        PartitionFamily::new(j)
            .expect("variable support has m+1 vertices")
            .signed()
            .filter(|(c, _)| !present.contains_key(*c))
            .map(|(c, s)| s * lambda(c))
            .sum()
    };
    model
        .variables()
        .iter()
        .map(|v| match &v.kind {
            VarKind::Lambda(c) => lambda(c),
            VarKind::Abs(c) => lambda(c).abs(),
            VarKind::Rest(j) => rest(j),
            VarKind::AbsRest(j) => rest(j).abs(),
            VarKind::Free => 0,
        })
        .collect()
}

struct Builder<'a> {
    model: Model,
    cfg: SystemConfig,
    m: usize,
    lookup: HashMap<Cell, (usize, i64)>,
    abs_vars: HashMap<usize, usize>,
    seen: HashSet<(Vec<(usize, i64)>, Relation, i64)>,
    complex: &'a SimplicialComplex,
}

impl Builder<'_> {
    fn lambda_terms<'c>(&self, cells: impl IntoIterator<Item = (&'c Cell, i64)>) -> Option<Vec<(usize, i64)>> {
        let mut out = Vec::new();
        for (c, k) in cells {
            let &(v, s) = self.lookup.get(c)?;
            out.push((v, s * k));
        }
        Some(out)
    }

    /// Adds a row unless it is a duplicate (up to sign) or a satisfied constant.
    fn push(&mut self, terms: Vec<(usize, i64)>, relation: Relation, rhs: i64, family: RowFamily) -> Result<()> {
        let mut row = Row::new(terms, relation, rhs, family);
        if row.terms.is_empty() && row.relation.holds(0, row.rhs.into()) {
            return Ok(());
        }
        if row.terms.first().is_some_and(|&(_, c)| c < 0) {
            row.terms.iter_mut().for_each(|t| t.1 = -t.1);
            row.rhs = -row.rhs;
            row.relation = match row.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        if self.seen.insert((row.terms.clone(), row.relation, row.rhs)) {
            self.model.add_row(row)?;
        }
        Ok(())
    }

    fn push_range(&mut self, terms: Vec<(usize, i64)>, lo: i64, hi: i64, family: RowFamily) -> Result<()> {
        self.push(terms.clone(), Relation::Ge, lo, family)?;
        self.push(terms, Relation::Le, hi, family)
    }

    /// `Σ |x_i| ≤ q`.
    fn push_abs_sum(&mut self, vars: &[usize], q: i64) -> Result<()> {
        match self.cfg.abs_encoding {
            AbsEncoding::Auxiliary => {
                let mut aux = Vec::with_capacity(vars.len());
                for &x in vars {
                    aux.push(self.abs_var(x)?);
                }
                self.push(aux.into_iter().map(|a| (a, 1)).collect(), Relation::Le, q, RowFamily::PointCount)
            }
            AbsEncoding::SignPatterns => {
                if vars.len() > 20 {
                    return Err(Error::System(format!("{} sign patterns is too many", 1u64 << vars.len())));
                }
                for mask in 0..(1u64 << vars.len()) {
                    let terms = vars.iter().enumerate().map(|(i, &x)| (x, if mask >> i & 1 == 1 { -1 } else { 1 })).collect();
                    self.push(terms, Relation::Le, q, RowFamily::PointCount)?;
                }
                Ok(())
            }
        }
    }

    fn abs_var(&mut self, x: usize) -> Result<usize> {
        if let Some(&a) = self.abs_vars.get(&x) {
            return Ok(a);
        }
        let v = &self.model.variables()[x];
        let (name, kind) = match &v.kind {
            VarKind::Lambda(c) => (format!("a_{c}"), VarKind::Abs(c.clone())),
            VarKind::Rest(j) => (format!("ay_{j}"), VarKind::AbsRest(j.clone())),
            _ => (format!("abs_{}", v.name), VarKind::Free),
        };
        let hi = v.lower.abs().max(v.upper.abs());
        let a = self.model.add_variable(name, 0, hi, kind)?;
        self.push(vec![(a, 1), (x, -1)], Relation::Ge, 0, RowFamily::AbsLink)?;
        self.push(vec![(a, 1), (x, 1)], Relation::Ge, 0, RowFamily::AbsLink)?;
        self.abs_vars.insert(x, a);
        Ok(a)
    }
}

/// Builds the model for `k` in `R^m` under `cfg`.
pub fn build(k: &SimplicialComplex, m: usize, cfg: SystemConfig) -> Result<Model> {
    if m < 2 {
        return Err(Error::Dimension(format!("target dimension {m} < 2")));
    }
    let n = k.num_vertices();
    if n < m + 2 {
        return Err(Error::Dimension(format!("{n} vertices, need at least {} for m = {m}", m + 2)));
    }
    let full_skeleton = SimplicialComplex::full_skeleton(n, m)?;
    let domain = if cfg.preset == Preset::Full { &full_skeleton } else { k };
    let lambda_cells = cells(domain, m - 1);

    let mut b = Builder {
        model: Model::new(ModelInfo {
            complex: k.name().to_string(),
            m,
            preset: cfg.preset.to_string(),
            lambda_cells: lambda_cells.len(),
            symmetry_reduction: cfg.symmetry_reduction,
        }),
        cfg,
        m,
        lookup: HashMap::new(),
        abs_vars: HashMap::new(),
        seen: HashSet::new(),
        complex: k,
    };

    // λ variables with per-cell bounds.
    let half = ceil_half(m as i64);
    let index_bounds = |rep: &Cell| -> Result<(i64, i64)> {
        if cfg.preset == Preset::Novik {
            return Ok((-half, half));
        }
        let q = (m - ell(&rep.support(), m)) as i64;
        let (lo, hi) = (-ceil_half(q), floor_half(q));
        Ok(if shuffle_sign(&rep.first, &rep.second)? == 1 { (lo, hi) } else { (-hi, -lo) })
    };
    for c in &lambda_cells {
        let (rep, sign) = canonicalize(c);
        if cfg.symmetry_reduction && rep != *c {
            continue;
        }
        let (lo, hi) = index_bounds(&rep)?;
        let (lo, hi) = if sign == 1 { (lo, hi) } else { (-hi, -lo) };
        let v = b.model.add_variable(format!("l_{c}"), lo, hi, VarKind::Lambda(c.clone()))?;
        b.lookup.insert(c.clone(), (v, 1));
    }
    if cfg.symmetry_reduction {
        b.lookup = lambda_lookup(&b.model);
    } else {
        for c in &lambda_cells {
            let (rep, sign) = canonicalize(c);
            if rep != *c {
                let (x, _) = b.lookup[c];
                let (r, _) = b.lookup[&rep];
                b.push(vec![(x, 1), (r, -sign)], Relation::Eq, 0, RowFamily::Symmetry)?;
            }
        }
    }

    // Part 4: an embedding keeps disjoint simplices of K apart.
    for c in cells(k, m) {
        let phi = i64::from(phi_c(&c, m)?);
        let row = coboundary_row(&c);
        let terms = b.lambda_terms(row.terms().iter().map(|(f, s)| (f, *s))).expect("faces of K-cells lie in the domain");
        b.push(terms, Relation::Eq, -phi, RowFamily::Forbidden)?;
    }

    // Part 3(a): bounded coboundary on cells outside K.
    if cfg.preset == Preset::Full {
        let k_cells: HashSet<Cell> = cells(k, m).into_iter().collect();
        for c in cells(&full_skeleton, m) {
            if k_cells.contains(&c) {
                continue;
            }
            let phi = i64::from(phi_c(&c, m)?);
            let row = coboundary_row(&c);
            let terms = b.lambda_terms(row.terms().iter().map(|(f, s)| (f, *s))).expect("full domain");
            b.push_range(terms, -1 - phi, 1 - phi, RowFamily::Intersection)?;
        }
    }

    // Part 3(b): linking of an (m−1)-simplex with a triangle boundary.
    if cfg.preset != Preset::Novik {
        for sigma in full_skeleton.faces_of_dim(m - 1) {
            for tau in full_skeleton.faces_of_dim(2) {
                if !sigma.is_disjoint(tau) {
                    continue;
                }
                let mut faces = Vec::with_capacity(3 * m);
                let mut phi = 0i64;
                for j in 0..3 {
                    let tj = tau.delete(j).expect("triangle");
                    let sj = if j % 2 == 0 { 1 } else { -1 };
                    phi += sj * i64::from(phi_c(&Cell { first: sigma.clone(), second: tj.clone() }, m)?);
                    for i in 0..sigma.len() {
                        let si = if i % 2 == 0 { 1 } else { -1 };
                        faces.push((Cell { first: sigma.delete(i).expect("m ≥ 2"), second: tj.clone() }, si * sj));
                    }
                }
                if let Some(terms) = b.lambda_terms(faces.iter().map(|(c, s)| (c, *s))) {
                    b.push_range(terms, -1 - phi, 1 - phi, RowFamily::Linking)?;
                }
            }
        }
    }

    // Part 2: per (m+1)-set J.
    if cfg.preset != Preset::Novik && cfg.preset != Preset::Minimal {
        for j in (0..n as VertexId).combinations(m + 1) {
            let j = Simplex::new(j)?;
            let fam = PartitionFamily::new(&j)?;
            let q = (m - ell(&j, m)) as i64;
            let mut present = Vec::new();
            let mut missing = false;
            for (c, s) in fam.signed() {
                match b.lookup.get(c) {
                    Some(&(v, vs)) => present.push((v, vs * s)),
                    None => missing = true,
                }
            }
            if present.is_empty() {
                continue;
            }
            let vars: Vec<usize> = present.iter().map(|&(v, _)| v).collect();
            match cfg.preset {
                Preset::Full | Preset::SubY => {
                    let mut signed = present.clone();
                    let mut abs = vars.clone();
                    if missing && cfg.preset == Preset::SubY {
                        let y = b.model.add_variable(format!("y_{j}"), -ceil_half(q), floor_half(q), VarKind::Rest(j.clone()))?;
                        signed.push((y, 1));
                        abs.push(y);
                    }
                    b.push_abs_sum(&abs, q)?;
                    b.push_range(signed, -1, 0, RowFamily::IndexSum)?;
                }
                Preset::SubSubsets => {
                    b.push_abs_sum(&vars, q)?;
                    let policy = cfg.subset_policy;
                    let mut subsets: Vec<Vec<(usize, i64)>> = (1..=policy.max_size.min(present.len()))
                        .flat_map(|size| present.iter().copied().combinations(size))
                        .collect();
                    if policy.include_full && present.len() > policy.max_size {
                        subsets.push(present.clone());
                    }
                    for s in subsets {
                        b.push_range(s, -ceil_half(q), floor_half(q), RowFamily::Subset)?;
                    }
                }
                Preset::Novik | Preset::Minimal => unreachable!(),
            }
        }
    }

    tracing::debug!(
        complex = b.complex.name(),
        m = b.m,
        preset = %cfg.preset,
        variables = b.model.variables().len(),
        rows = b.model.rows().len(),
        "built system"
    );
    Ok(b.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;

    fn s(v: &[VertexId]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell(&s(&[0, 1, 2, 3]), 3), 3);
        assert_eq!(ell(&s(&[4, 5, 6, 7]), 3), 0);
        assert_eq!(ell(&s(&[1, 2, 5, 7]), 3), 1);
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle_sign(&s(&[0, 1]), &s(&[2, 3])).unwrap(), 1);
        assert_eq!(shuffle_sign(&s(&[0, 2]), &s(&[1, 3])).unwrap(), -1);
        assert_eq!(shuffle_sign(&s(&[0, 3]), &s(&[1, 2])).unwrap(), 1);
        assert!(shuffle_sign(&s(&[1, 3]), &s(&[0, 2])).is_err());
        assert!(shuffle_sign(&s(&[0, 1]), &s(&[1, 2])).is_err());
    }

    #[test]
    fn partition_family_shape() {
        for m in 1..=4u32 {
            let j = Simplex::new(3..3 + m + 1).unwrap();
            let fam = PartitionFamily::new(&j).unwrap();
            assert_eq!(fam.pairs.len(), (1 << m) - 1);
            for c in &fam.pairs {
                assert_eq!(c.dim() as u32, m - 1);
                assert_eq!(c.support(), j);
                assert_eq!(c.first.min_vertex(), 3);
            }
        }
    }

    #[test]
    fn preset_names() {
        for p in Preset::ALL {
            assert_eq!(p.as_str().parse::<Preset>().unwrap(), p);
        }
        assert_eq!("sub-y".parse::<Preset>().unwrap(), Preset::SubY);
        assert!(matches!("exact".parse::<Preset>(), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn rejects_bad_dimensions() {
        let k = builtin("rp2").unwrap();
        assert!(build(&k, 1, SystemConfig::new(Preset::Novik)).is_err());
        assert!(build(&k, 5, SystemConfig::new(Preset::Novik)).is_err());
    }

    #[test]
    fn variable_counts() {
        let k = builtin("rp2").unwrap();
        let model = build(&k, 3, SystemConfig::new(Preset::Novik)).unwrap();
        assert_eq!(model.info.lambda_cells, 150);
        assert_eq!(model.variables().len(), 75);
        let mut cfg = SystemConfig::new(Preset::Novik);
        cfg.symmetry_reduction = false;
        let model = build(&k, 3, cfg).unwrap();
        assert_eq!(model.variables().len(), 150);
        assert_eq!(model.rows().iter().filter(|r| r.family == RowFamily::Symmetry).count(), 75);
    }

    #[test]
    fn index_bounds_respect_ceiling() {
        let k = builtin("csaszar").unwrap();
        for preset in Preset::ALL {
            let model = build(&k, 3, SystemConfig::new(preset)).unwrap();
            for v in model.variables() {
                if matches!(v.kind, VarKind::Lambda(_)) {
                    assert!(v.lower >= -2 && v.upper <= 2, "{}", v.name);
                }
            }
        }
    }

    #[test]
    fn rows_reference_declared_variables() {
        let k = builtin("bipyramid").unwrap();
        for preset in Preset::ALL {
            let model = build(&k, 3, SystemConfig::new(preset)).unwrap();
            let n = model.variables().len();
            assert!(model.rows().iter().all(|r| r.terms.iter().all(|&(v, c)| v < n && c != 0)));
        }
    }

    #[test]
    fn deterministic() {
        let k = builtin("csaszar").unwrap();
        let a = build(&k, 3, SystemConfig::new(Preset::SubY)).unwrap();
        let b = build(&k, 3, SystemConfig::new(Preset::SubY)).unwrap();
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.variables(), b.variables());
    }
}
