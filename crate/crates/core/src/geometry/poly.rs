//! Univariate polynomials over Q: Sturm sequences, real root isolation and
//! exact sign determination at isolated algebraic roots.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Q;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Q {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &Q) -> i32 {
        sign(&self.eval(x))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn scale(&self, k: &Q) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Q::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }

    /// Remainder of Euclidean division by a nonzero `d`.
    pub fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = &r[k] / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Exact quotient by a divisor; panics if the remainder would be nonzero.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(n) = self.degree() else { return Poly::zero() };
        if n < dd {
            assert!(self.is_zero(), "inexact division");
            return Poly::zero();
        }
        let mut r = self.0.clone();
        let mut quot = vec![Q::zero(); n - dd + 1];
        for k in (dd..=n).rev() {
            let f = &r[k] / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &f * c;
            }
            quot[k - dd] = f;
        }
        assert!(r.iter().all(Zero::is_zero), "inexact division");
        Poly::new(quot)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        self.scale(&(Q::one() / l))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    /// Multiplicity of `x` as a root.
    pub fn multiplicity(&self, x: &Q) -> usize {
        let lin = Poly::new(vec![-x.clone(), Q::one()]);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() && p.eval(x).is_zero() {
            p = p.div_exact(&lin);
            k += 1;
        }
        k
    }

    /// `|p(x) − p(c)|` bounded over `|x − c| ≤ r` via the Taylor expansion at `c`.
    fn deviation_bound(&self, c: &Q, r: &Q) -> Q {
        let mut bound = Q::zero();
        let mut d = self.derivative();
        let mut rk = r.clone();
        let mut fact = Q::one();
        let mut k = 1i64;
        while !d.is_zero() {
            fact *= q(k);
            bound += d.eval(c).abs() * &rk / &fact;
            rk *= r;
            d = d.derivative();
            k += 1;
        }
        bound
    }
}

pub(crate) fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm chain of a squarefree polynomial.
pub struct Sturm(Vec<Poly>);

impl Sturm {
    pub fn new(p: &Poly) -> Sturm {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().expect("nonempty").is_zero() {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            chain.push(r.scale(&q(-1)));
        }
        chain.pop();
        Sturm(chain)
    }

    fn variations(&self, x: &Q) -> usize {
        let signs: Vec<i32> = self.0.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in `(a, b]`.
    pub fn count(&self, a: &Q, b: &Q) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// A real root of a squarefree polynomial: either rational, or the unique
/// root in the open interval `(lo, hi)` with opposite signs at the ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(Q),
    Between(Q, Q),
}

/// Picks a point in `(a, b)` at which `p` does not vanish, near the middle.
fn split_point(p: &Poly, a: &Q, b: &Q) -> Q {
    let w = b - a;
    for k in 1.. {
        // 1/2, then 1/2 ± small offsets
        let t = Q::new(BigInt::from(k), BigInt::from(2 * k + 1));
        let x = a + &w * t;
        if !p.eval(&x).is_zero() {
            return x;
        }
    }
    unreachable!()
}

/// Real roots of the squarefree `p` in the open interval `(lo, hi)`, where
/// `p(lo)` and `p(hi)` are nonzero. Sorted ascending.
pub fn isolate(p: &Poly, lo: &Q, hi: &Q) -> Vec<Root> {
    let sturm = Sturm::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => out.push(Root::Between(a, b)),
            _ => {
                let mid = split_point(p, &a, &b);
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| {
        let key = |r: &Root| match r {
            Root::Exact(v) | Root::Between(v, _) => v.clone(),
        };
        key(x).cmp(&key(y))
    });
    out
}

/// Cauchy bound: every root has absolute value below this.
pub fn root_bound(p: &Poly) -> Q {
    let lead = p.lead().abs();
    Q::one() + p.0.iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Q::zero)
}

/// Sign of `f` at the root `r` of the squarefree `p`.
pub fn sign_at_root(f: &Poly, p: &Poly, r: &Root) -> i32 {
    let (mut a, mut b) = match r {
        Root::Exact(x) => return f.sign_at(x),
        Root::Between(a, b) => (a.clone(), b.clone()),
    };
    let g = f.gcd(p);
    if g.degree().unwrap_or(0) > 0 && g.sign_at(&a) * g.sign_at(&b) < 0 {
        return 0;
    }
    let sa = p.sign_at(&a);
    let two = q(2);
    loop {
        let c = (&a + &b) / &two;
        let fc = f.eval(&c);
        let pc = p.sign_at(&c);
        if pc == 0 {
            return f.sign_at(&c);
        }
        let r = (&b - &a) / &two;
        if fc.abs() > f.deviation_bound(&c, &r) {
            return sign(&fc);
        }
        if pc == sa {
            a = c;
        } else {
            b = c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn arithmetic() {
        // (x−1)(x+2) = x² + x − 2
        let f = p(&[-2, 1, 1]);
        assert_eq!(f.eval(&q(1)), q(0));
        assert_eq!(f.derivative(), p(&[1, 2]));
        assert_eq!(f.div_exact(&p(&[-1, 1])), p(&[2, 1]));
        assert_eq!(f.gcd(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(p(&[1, -2, 1]).squarefree(), p(&[-1, 1]));
        assert_eq!(p(&[0, 0, 1, 1]).multiplicity(&q(0)), 2);
    }

    #[test]
    fn isolates_irrational_roots() {
        // x² − 2 on (−3, 3): two roots
        let f = p(&[-2, 0, 1]);
        let roots = isolate(&f, &q(-3), &q(3));
        assert_eq!(roots.len(), 2);
        // sign of x at the negative root is −1; of x + 2 is +1
        assert_eq!(sign_at_root(&p(&[0, 1]), &f, &roots[0]), -1);
        assert_eq!(sign_at_root(&p(&[2, 1]), &f, &roots[0]), 1);
        // x² − 2 vanishes at its own roots
        assert_eq!(sign_at_root(&p(&[-4, 0, 2]), &f, &roots[1]), 0);
        // x − 1.41 is negative below √2 = 1.41421…
        let g = Poly::new(vec![Q::new((-141).into(), 100.into()), q(1)]);
        assert_eq!(sign_at_root(&g, &f, &roots[1]), 1);
    }

    #[test]
    fn close_roots_separate() {
        // (x − 1/1000)(x − 2/1000)(x + 5)
        let a = Poly::new(vec![Q::new((-1).into(), 1000.into()), q(1)]);
        let b = Poly::new(vec![Q::new((-2).into(), 1000.into()), q(1)]);
        let c = p(&[5, 1]);
        let f = mul(&mul(&a, &b), &c);
        let bound = root_bound(&f);
        assert_eq!(isolate(&f, &-bound.clone(), &bound).len(), 3);
    }

    fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![Q::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly::new(out)
    }
}
