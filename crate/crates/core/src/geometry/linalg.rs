//! Dense exact linear algebra on small rational matrices.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::Q;

/// Row-major square or rectangular matrix.
pub type Matrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn det(m: &Matrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for k in c..cols {
                let t = &f * &a[r][k];
                a[i][k] -= t;
            }
        }
        r += 1;
    }
    r
}

/// Inverse by Gauss–Jordan; `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.iter().zip(identity(n)).map(|(row, id)| row.iter().cloned().chain(id).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..2 * n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `det(D − uI)` together with the entries of `adj(uI − D)` as polynomials in `u`,
/// by the Faddeev–LeVerrier recursion.
pub fn charpoly_adjugate(d: &Matrix) -> (Poly, Vec<Vec<Poly>>) {
    let n = d.len();
    // det(uI − D) = Σ c[i] u^i with c[n] = 1; adj(uI − D) = Σ_k M_k u^{n−k}
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut ms: Vec<Matrix> = Vec::with_capacity(n);
    let mut mk = identity(n);
    for k in 1..=n {
        if k > 1 {
            mk = mul(d, &mk);
            for (i, row) in mk.iter_mut().enumerate() {
                row[i] += &c[n - k + 1];
            }
        }
        let am = mul(d, &mk);
        let tr = (0..n).fold(Q::zero(), |acc, i| acc + &am[i][i]);
        c[n - k] = -tr / Q::from_integer((k as i64).into());
        ms.push(mk.clone());
    }
    let sign = if n.is_multiple_of(2) { Q::one() } else { -Q::one() };
    let chi = Poly::new(c.iter().map(|x| x * &sign).collect());
    let adj = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut coeffs = vec![Q::zero(); n];
                    for (k, m) in ms.iter().enumerate() {
                        coeffs[n - 1 - k] = m[i][j].clone();
                    }
                    Poly::new(coeffs)
                })
                .collect()
        })
        .collect();
    (chi, adj)
}
