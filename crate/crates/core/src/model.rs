//! Integer feasibility models: bounded integer variables and linear rows.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::deleted_product::Cell;
use crate::error::{Error, Result};
use crate::simplicial::Simplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: i128, rhs: i128) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// What a variable stands for. Drives naming and lets oracle cochains be
/// translated into assignments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// `λ` on a cell.
    Lambda(Cell),
    /// Auxiliary `|λ|` on a cell.
    Abs(Cell),
    /// Signed sum of `λ` over the partitions of `J` missing from the complex.
    Rest(Simplex),
    /// Auxiliary `|rest|` for `J`.
    AbsRest(Simplex),
    /// Anything built by hand.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
    pub kind: VarKind,
}

/// Row family tag; used for row names and statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFamily {
    Symmetry,
    AbsLink,
    PointCount,
    IndexSum,
    Subset,
    Intersection,
    Linking,
    Forbidden,
    /// Bounds of a variable removed by presolve, restated on its substitute.
    Eliminated,
    Other,
}

impl RowFamily {
    fn prefix(self) -> &'static str {
        match self {
            RowFamily::Symmetry => "sym",
            RowFamily::AbsLink => "abs",
            RowFamily::PointCount => "pts",
            RowFamily::IndexSum => "idx",
            RowFamily::Subset => "sub",
            RowFamily::Intersection => "int",
            RowFamily::Linking => "lnk",
            RowFamily::Forbidden => "cob",
            RowFamily::Eliminated => "elim",
            RowFamily::Other => "r",
        }
    }
}

/// `Σ coef·x  rel  rhs`, terms sorted by variable index, coefficients nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub terms: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
    pub family: RowFamily,
}

impl Row {
    /// Merges repeated variables and drops zero coefficients.
    pub fn new(
        terms: impl IntoIterator<Item = (usize, i64)>,
        relation: Relation,
        rhs: i64,
        family: RowFamily,
    ) -> Row {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (v, c) in terms {
            *acc.entry(v).or_insert(0) += c;
        }
        Row { terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(), relation, rhs, family }
    }

    pub fn lhs(&self, values: &[i64]) -> i128 {
        self.terms.iter().map(|&(v, c)| i128::from(c) * i128::from(values[v])).sum()
    }

    pub fn holds(&self, values: &[i64]) -> bool {
        self.relation.holds(self.lhs(values), self.rhs.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelInfo {
    pub complex: String,
    pub m: usize,
    pub preset: String,
    /// Dimension-`(m−1)` cells of the cochain domain, before any identification.
    pub lambda_cells: usize,
    pub symmetry_reduction: bool,
}

/// A finite integer feasibility problem.
#[derive(Clone, Debug)]
pub struct Model {
    pub info: ModelInfo,
    variables: Vec<Variable>,
    rows: Vec<Row>,
    by_name: HashMap<String, usize>,
}

/// Summary written next to generated models.
#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub variables: usize,
    pub rows: usize,
    pub preset: String,
    pub complex: String,
    pub m: usize,
    pub lambda_cells: usize,
    pub symmetry_reduction: bool,
    pub rows_by_family: BTreeMap<RowFamily, usize>,
}

impl Model {
    pub fn new(info: ModelInfo) -> Model {
        Model { info, variables: Vec::new(), rows: Vec::new(), by_name: HashMap::new() }
    }

    /// Model with no metadata, for hand-built problems.
    pub fn empty() -> Model {
        Model::new(ModelInfo {
            complex: String::new(),
            m: 0,
            preset: String::new(),
            lambda_cells: 0,
            symmetry_reduction: false,
        })
    }

    /// Adds a variable and returns its index. Names must be unique.
    pub fn add_variable(&mut self, name: impl Into<String>, lower: i64, upper: i64, kind: VarKind) -> Result<usize> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(Error::System(format!("duplicate variable {name}")));
        }
        let idx = self.variables.len();
        self.by_name.insert(name.clone(), idx);
        self.variables.push(Variable { name, lower, upper, kind });
        Ok(idx)
    }

    pub fn add_row(&mut self, row: Row) -> Result<()> {
        if let Some(&(v, _)) = row.terms.iter().find(|(v, _)| *v >= self.variables.len()) {
            return Err(Error::System(format!("row references undeclared variable {v}")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variables_mut(&mut self) -> &mut [Variable] {
        &mut self.variables
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Stable row name, e.g. `cob17`: family prefix and position within the family.
    pub fn row_names(&self) -> Vec<String> {
        let mut seen: HashMap<RowFamily, usize> = HashMap::new();
        self.rows
            .iter()
            .map(|r| {
                let k = seen.entry(r.family).or_insert(0);
                *k += 1;
                format!("{}{}", r.family.prefix(), *k)
            })
            .collect()
    }

    /// Indices of rows violated by `values`, plus variables outside their bounds.
    pub fn violations(&self, values: &[i64]) -> (Vec<usize>, Vec<usize>) {
        let bad_vars = self
            .variables
            .iter()
            .enumerate()
            .filter(|(i, v)| values[*i] < v.lower || values[*i] > v.upper)
            .map(|(i, _)| i)
            .collect();
        let bad_rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.holds(values))
            .map(|(i, _)| i)
            .collect();
        (bad_rows, bad_vars)
    }

    pub fn report(&self) -> ModelReport {
        let mut rows_by_family = BTreeMap::new();
        for r in &self.rows {
            *rows_by_family.entry(r.family).or_insert(0) += 1;
        }
        ModelReport {
            variables: self.variables.len(),
            rows: self.rows.len(),
            preset: self.info.preset.clone(),
            complex: self.info.complex.clone(),
            m: self.info.m,
            lambda_cells: self.info.lambda_cells,
            symmetry_reduction: self.info.symmetry_reduction,
            rows_by_family,
        }
    }
}

/// Variable name → value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub BTreeMap<String, i64>);

impl Assignment {
    pub fn from_values(model: &Model, values: &[i64]) -> Assignment {
        Assignment(model.variables().iter().zip(values).map(|(v, &x)| (v.name.clone(), x)).collect())
    }

    /// Values in model order. Unknown names are an error; missing ones are `None`.
    pub fn to_values(&self, model: &Model) -> Result<Vec<Option<i64>>> {
        let mut out = vec![None; model.variables().len()];
        for (name, &x) in &self.0 {
            let i = model.index_of(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            out[i] = Some(x);
        }
        Ok(out)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, x) in &self.0 {
            if *x != 0 {
                writeln!(f, "{name} = {x}")?;
            }
        }
        Ok(())
    }
}
