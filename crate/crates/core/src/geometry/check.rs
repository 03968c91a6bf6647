//! Property suites comparing the oracle against the combinatorial side.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::deformation::{family_with_base, lambda_in, random_general_pair, DeformationPair, Family};
use super::intersection::{phi, Cocycle};
use super::map::{moment_map, PointMap};
use super::Q;
use crate::cyclic::phi_c;
use crate::deleted_product::{cells, cells_full, coboundary_row, Cell};
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::system::{self, ell, PartitionFamily, Preset, SystemConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub cell: String,
    pub expected: String,
    pub actual: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: expected {}, got {}", self.check, self.cell, self.expected, self.actual)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OracleReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    /// Random draws thrown away for non-general eigenvalues.
    pub resampled: usize,
    pub checks: u64,
    pub violations: Vec<Violation>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `δλ = φ_f − φ_g` on every `m`-cell of the full simplex on `0..=N`.
/// Returns the violations and the number of cells compared.
pub fn check_fundamental(
    pair: &DeformationPair,
    lambda: impl Fn(&Cell) -> Result<i64>,
) -> Result<(Vec<Violation>, u64)> {
    let m = pair.dim();
    let mut out = Vec::new();
    let all = cells_full(pair.max_vertex(), m, m);
    let (mut phi_f, mut phi_g) = (Cocycle::new(pair.f()), Cocycle::new(pair.g()));
    for c in &all {
        let mut delta = 0;
        for (face, k) in coboundary_row(c).terms() {
            delta += k * lambda(face)?;
        }
        let expected = i64::from(phi_f.phi(c)?) - i64::from(phi_g.phi(c)?);
        if delta != expected {
            out.push(Violation { check: "fundamental", cell: c.to_string(), expected: expected.to_string(), actual: delta });
        }
    }
    Ok((out, all.len() as u64))
}

/// Recomputes every cell whose second factor misses the base vertex with the
/// family based inside that factor, and compares through the swap sign.
pub fn check_symmetry(pair: &DeformationPair, fams: &BTreeMap<Simplex, Family>) -> Result<(Vec<Violation>, u64)> {
    let mut out = Vec::new();
    let mut n = 0;
    for fam in fams.values() {
        let mut other: BTreeMap<u32, Family> = BTreeMap::new();
        for (c, _) in PartitionFamily::new(&fam.support)?.signed() {
            let swapped = c.swapped();
            let base = swapped.first.min_vertex();
            if let std::collections::btree_map::Entry::Vacant(e) = other.entry(base) {
                e.insert(family_with_base(pair, &fam.support, base)?);
            }
            let direct = other[&base].get(&swapped);
            let via = lambda_in(fam, &swapped);
            n += 1;
            if direct != via {
                out.push(Violation { check: "symmetry", cell: swapped.to_string(), expected: via.to_string(), actual: direct });
            }
        }
    }
    Ok((out, n))
}

fn ceil_half(q: i64) -> i64 {
    (q + 1).div_euclid(2)
}

/// Point-count, signed-sum and index inequalities for every `J`.
pub fn check_bounds(pair: &DeformationPair, fams: &BTreeMap<Simplex, Family>) -> Result<(Vec<Violation>, u64)> {
    let m = pair.dim() as i64;
    let k = pair.prefix().unwrap_or(0);
    let mut out = Vec::new();
    let mut n = 0;
    let mut bad = |check: &'static str, cell: String, expected: String, actual: i64| {
        out.push(Violation { check, cell, expected, actual });
    };
    for (j, fam) in fams {
        let q = m - ell(j, k) as i64;
        let negatives = fam.negative_roots as i64;
        let terms: Vec<(Cell, i64)> = PartitionFamily::new(j)?
            .signed()
            .map(|(c, s)| (c.clone(), fam.eps_g * s * fam.get(c)))
            .collect();
        let abs_sum: i64 = terms.iter().map(|(c, _)| fam.get(c).abs()).sum();
        let cap = q.min(m - fam.mult_one as i64).min(negatives);
        if abs_sum > cap {
            bad("points", j.to_string(), format!("<= {cap}"), abs_sum);
        }
        let signed: i64 = terms.iter().map(|(_, v)| v).sum();
        let expected = if fam.det_d > 0 { 0 } else { -1 };
        if signed != expected {
            bad("index1", j.to_string(), expected.to_string(), signed);
        }
        for (c, v) in &terms {
            if *v < -ceil_half(q) || *v > q.div_euclid(2) {
                bad("index2", c.to_string(), format!("[{}, {}]", -ceil_half(q), q.div_euclid(2)), *v);
            }
        }
        // extreme subset sums
        let pos: i64 = terms.iter().map(|(_, v)| (*v).max(0)).sum();
        let neg: i64 = terms.iter().map(|(_, v)| (*v).min(0)).sum();
        if pos > negatives.div_euclid(2) {
            bad("index2-subset", j.to_string(), format!("<= {}", negatives.div_euclid(2)), pos);
        }
        if neg < -ceil_half(negatives) {
            bad("index2-subset", j.to_string(), format!(">= {}", -ceil_half(negatives)), neg);
        }
        n += 1;
    }
    Ok((out, n))
}

/// `φ_c` against the geometric `φ` of the moment curve on every `m`-cell of
/// the simplex on `0..=n`, and `δφ_c = 0` on every `(m+1)`-cell.
pub fn check_cyclic(n: usize, m: usize) -> Result<(Vec<Violation>, u64)> {
    let c = moment_map(n, m);
    let mut geometric = Cocycle::new(&c);
    let mut out = Vec::new();
    let mcells = cells_full(n, m, m);
    for cell in &mcells {
        let comb = phi_c(cell, m)?;
        let geo = geometric.phi(cell)?;
        if comb != geo {
            out.push(Violation { check: "cyclic", cell: cell.to_string(), expected: geo.to_string(), actual: comb.into() });
        }
    }
    let upper = cells_full(n, m + 1, m + 1);
    for cell in &upper {
        let mut delta = 0i64;
        for (face, k) in coboundary_row(cell).terms() {
            delta += k * i64::from(phi_c(face, m)?);
        }
        if delta != 0 {
            out.push(Violation { check: "cocycle", cell: cell.to_string(), expected: "0".into(), actual: delta });
        }
    }
    Ok((out, (mcells.len() + upper.len()) as u64))
}

/// The embedding used for the bipyramid: the moment curve on `0..=3` and the
/// second apex reflected through the centroid of the shared triangle, then
/// shifted by `(1, 0, 0)`. The plain reflection puts `c(0)`, `c(2)`, `c(4)`
/// and the apex on one plane.
pub fn bipyramid_embedding() -> PointMap {
    let c = moment_map(3, 3);
    let two_thirds = Q::new(2.into(), 3.into());
    let apex: Vec<Q> = (0..3)
        .map(|r| {
            let shift = Q::from_integer(i64::from(r == 0).into());
            (&c.point(1)[r] + &c.point(2)[r] + &c.point(3)[r]) * &two_thirds - &c.point(0)[r] + shift
        })
        .collect();
    let mut points = c.points().to_vec();
    points.push(apex);
    PointMap::new(3, points).expect("three coordinates each")
}

/// Builds the `full` system of `k` and evaluates it at the oracle cochain
/// `λ_{f̃,c}`, where `f̃` embeds `k` and agrees with the moment curve on `0..=m`.
pub fn check_system(k: &SimplicialComplex, embedding: &PointMap, m: usize) -> Result<(Vec<Violation>, u64)> {
    if embedding.len() != k.num_vertices() {
        return Err(Error::Dimension(format!(
            "embedding has {} points for {} vertices",
            embedding.len(),
            k.num_vertices()
        )));
    }
    let c = moment_map(k.num_vertices() - 1, m);
    let pair = DeformationPair::new(embedding.clone(), c, Some(m))?;
    let mut out = Vec::new();
    let kcells = cells(k, m);
    for cell in &kcells {
        let v = phi(embedding, cell)?;
        if v != 0 {
            out.push(Violation { check: "embedding", cell: cell.to_string(), expected: "0".into(), actual: v.into() });
        }
    }
    let fams = super::deformation::all_families(&pair)?;
    let model = system::build(k, m, SystemConfig::new(Preset::Full))?;
    let values = system::assignment_from_cochain(&model, |cell| lambda_in(&fams[&cell.support()], cell));
    let (bad_rows, bad_vars) = model.violations(&values);
    let names = model.row_names();
    for r in bad_rows {
        let row = &model.rows()[r];
        out.push(Violation {
            check: "row",
            cell: names[r].clone(),
            expected: format!("{} {}", row.relation.symbol(), row.rhs),
            actual: row.lhs(&values) as i64,
        });
    }
    for v in bad_vars {
        let var = &model.variables()[v];
        out.push(Violation {
            check: "bound",
            cell: var.name.clone(),
            expected: format!("[{}, {}]", var.lower, var.upper),
            actual: values[v],
        });
    }
    Ok((out, (kcells.len() + model.rows().len() + model.variables().len()) as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fundamental,
    Bounds,
    Cyclic,
    System,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fundamental" => Ok(Suite::Fundamental),
            "bounds" => Ok(Suite::Bounds),
            "cyclic" => Ok(Suite::Cyclic),
            "system" => Ok(Suite::System),
            _ => Err(Error::Parse(format!("unknown oracle suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Fundamental => "fundamental",
            Suite::Bounds => "bounds",
            Suite::Cyclic => "cyclic",
            Suite::System => "system",
        })
    }
}

/// Runs `trials` random trials on `0..=n` in `R^m`.
///
/// `fundamental` checks `δλ = φ_f − φ_g` and the swap symmetry; `bounds`
/// alternates a shared vertex `0` with random `g` and a shared prefix `0..=m`
/// with `g` the moment curve. `cyclic` and `system` are deterministic and
/// ignore `trials` and `seed`; `system` uses the bipyramid in `R^3`.
pub fn run_suite(suite: Suite, n: usize, m: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    let mut report = OracleReport { suite: suite.to_string(), seed, ..Default::default() };
    let add = |report: &mut OracleReport, (v, checks): (Vec<Violation>, u64)| {
        report.violations.extend(v);
        report.checks += checks;
    };
    match suite {
        Suite::Cyclic => {
            report.trials = 1;
            add(&mut report, check_cyclic(n, m)?);
        }
        Suite::System => {
            report.trials = 1;
            let k = crate::builtins::builtin("bipyramid")?;
            add(&mut report, check_system(&k, &bipyramid_embedding(), 3)?);
        }
        Suite::Fundamental | Suite::Bounds => {
            if n < m + 1 {
                return Err(Error::Dimension(format!("need at least {} vertices in R^{m}", m + 2)));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let moment = moment_map(n, m);
            for t in 0..trials {
                let (prefix, g) = match (suite, t % 2) {
                    (Suite::Fundamental, _) => (None, None),
                    (_, 0) => (Some(0), None),
                    _ => (Some(m), Some(&moment)),
                };
                let (pair, fams, rejected) = random_general_pair(n, m, &mut rng, prefix, g)?;
                report.resampled += rejected;
                report.trials += 1;
                if suite == Suite::Fundamental {
                    add(&mut report, check_fundamental(&pair, |c| Ok(lambda_in(&fams[&c.support()], c)))?);
                    add(&mut report, check_symmetry(&pair, &fams)?);
                } else {
                    add(&mut report, check_bounds(&pair, &fams)?);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_lambda_is_caught() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (pair, fams, _) = random_general_pair(4, 2, &mut rng, None, None).unwrap();
        let lam = |c: &Cell| Ok(lambda_in(&fams[&c.support()], c));
        assert!(check_fundamental(&pair, lam).unwrap().0.is_empty());
        let target: Cell = "0x1_2".parse().unwrap();
        let bent = |c: &Cell| Ok(lambda_in(&fams[&c.support()], c) + i64::from(*c == target));
        assert!(!check_fundamental(&pair, bent).unwrap().0.is_empty());
    }

    #[test]
    fn bipyramid_apex() {
        let f = bipyramid_embedding();
        let q = |n: i64, d: i64| Q::new(n.into(), d.into());
        assert_eq!(f.point(4), [q(5, 1), q(28, 3), q(24, 1)]);
        assert_eq!(&f.points()[..4], moment_map(3, 3).points());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Fundamental, Suite::Bounds, Suite::Cyclic, Suite::System] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
