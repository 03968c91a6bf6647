//! Intersection cocycle of the cyclic map `i ↦ (i, i², …, i^m)`, evaluated
//! purely from vertex labels.

use crate::deleted_product::Cell;
use crate::error::{Error, Result};
use crate::simplicial::Simplex;

fn parity_sign(e: usize) -> i8 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Intersection number of the moment-curve images of `sigma` and `tau`,
/// with `dim σ + dim τ = m`.
///
/// The simplices meet iff the larger one has dimension `⌈m/2⌉` and the labels
/// alternate starting with it; the sign is then `(-1)^{k(k-1)/2}`. Other
/// orderings are reduced with `I(x, y) = (-1)^{kℓ} I(y, x)`.
pub fn cyclic_intersection(sigma: &Simplex, tau: &Simplex, m: usize) -> Result<i8> {
    let (k, l) = (sigma.dim(), tau.dim());
    if k + l != m {
        return Err(Error::Dimension(format!(
            "dim {sigma:?} + dim {tau:?} = {} but the target dimension is {m}",
            k + l
        )));
    }
    if !sigma.is_disjoint(tau) {
        return Err(Error::NotDisjoint(sigma.to_string(), tau.to_string()));
    }
    if k < l || (k == l && tau.min_vertex() < sigma.min_vertex()) {
        return Ok(parity_sign(k * l) * alternating_sign(tau, sigma, m));
    }
    Ok(alternating_sign(sigma, tau, m))
}

// Assumes dim s >= dim t, and s_0 < t_0 when the dimensions agree.
fn alternating_sign(s: &Simplex, t: &Simplex, m: usize) -> i8 {
    let k = s.dim();
    if k != m.div_ceil(2) {
        return 0;
    }
    let (sv, tv) = (s.vertices(), t.vertices());
    let interleaved = (0..sv.len()).all(|i| {
        let after_prev_t = i == 0 || tv[i - 1] < sv[i];
        let before_t = i >= tv.len() || sv[i] < tv[i];
        after_prev_t && before_t
    });
    if !interleaved {
        return 0;
    }
    parity_sign(k * (k.saturating_sub(1)) / 2)
}

/// `φ_c(σ×τ) = (-1)^{dim σ} · I(c(σ), c(τ))` on an `m`-cell.
pub fn phi_c(c: &Cell, m: usize) -> Result<i8> {
    if c.dim() != m {
        return Err(Error::Dimension(format!("cell {c} has dimension {}, expected {m}", c.dim())));
    }
    Ok(parity_sign(c.first.dim()) * cyclic_intersection(&c.first, &c.second, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deleted_product::{cells_full, coboundary_row};
    use crate::simplicial::VertexId;

    fn s(v: &[VertexId]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn alternation_examples() {
        assert_eq!(cyclic_intersection(&s(&[0, 2, 4]), &s(&[1, 3]), 3).unwrap(), -1);
        assert_eq!(cyclic_intersection(&s(&[0, 1, 2]), &s(&[3, 4]), 3).unwrap(), 0);
        assert_eq!(cyclic_intersection(&s(&[0, 2]), &s(&[1, 3]), 2).unwrap(), 1);
    }

    #[test]
    fn reduction_to_normal_form() {
        // k < l: I({1,3},{0,2,4}) = (-1)^{1·2} I({0,2,4},{1,3})
        assert_eq!(cyclic_intersection(&s(&[1, 3]), &s(&[0, 2, 4]), 3).unwrap(), -1);
        // k = l with t_0 < s_0: I({1,3},{0,2}) = (-1)^{1} I({0,2},{1,3})
        assert_eq!(cyclic_intersection(&s(&[1, 3]), &s(&[0, 2]), 2).unwrap(), -1);
        // dimensions too unbalanced never meet
        assert_eq!(cyclic_intersection(&s(&[0]), &s(&[1, 2, 3]), 2).unwrap(), 0);
    }

    #[test]
    fn phi_examples() {
        let c = Cell::new(s(&[0, 2, 4]), s(&[1, 3])).unwrap();
        assert_eq!(phi_c(&c, 3).unwrap(), -1);
        assert_eq!(phi_c(&c.swapped(), 3).unwrap(), 1);
        let c = Cell::new(s(&[0, 2]), s(&[1, 3])).unwrap();
        assert_eq!(phi_c(&c, 2).unwrap(), -1);
    }

    #[test]
    fn errors() {
        assert!(cyclic_intersection(&s(&[0, 1]), &s(&[2, 3]), 3).is_err());
        assert!(cyclic_intersection(&s(&[0, 1]), &s(&[1, 3]), 2).is_err());
        let c = Cell::new(s(&[0, 1]), s(&[2, 3])).unwrap();
        assert!(phi_c(&c, 3).is_err());
    }

    #[test]
    fn symmetry_identity() {
        for m in 2..=4 {
            for c in cells_full(8, m, m) {
                let (k, l) = (c.first.dim(), c.second.dim());
                let sign = parity_sign((k + 1) * (l + 1) + 1);
                assert_eq!(phi_c(&c, m).unwrap(), sign * phi_c(&c.swapped(), m).unwrap(), "{c}");
            }
        }
    }

    #[test]
    fn cocycle_property() {
        for m in 2..=3 {
            for c in cells_full(8, m + 1, m + 1) {
                let total: i64 = coboundary_row(&c)
                    .terms()
                    .iter()
                    .map(|(f, k)| k * i64::from(phi_c(f, m).unwrap()))
                    .sum();
                assert_eq!(total, 0, "m={m} cell {c}");
            }
        }
    }
}
