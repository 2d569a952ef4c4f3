//! Dense univariate rational polynomials and Sturm-based root isolation.

use num::{BigInt, One, Signed, Zero};

use crate::interval::Interval;
use crate::linalg::{q, Q};
use crate::poly::Poly;

/// Coefficients from the constant term upward, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Q>);

impl UniPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    /// View a multivariate polynomial that only involves `v`.
    pub fn from_poly(p: &Poly, v: usize) -> Self {
        let d = p.degree_in(v) as usize;
        let mut c = vec![Q::zero(); d + 1];
        for (m, k) in p.terms() {
            debug_assert!(m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0));
            c[m.0[v] as usize] += k;
        }
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &Q {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn scale(&self, k: &Q) -> UniPoly {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    /// Positive multiple with integer coefficients of unit gcd.
    pub fn primitive(&self) -> UniPoly {
        use num::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in &self.0 {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        self.scale(&Q::new(l, g))
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() < d.0.len() {
            return (UniPoly(vec![]), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        let inv = d.lead().recip();
        for i in (dd..r.len()).rev() {
            let f = &r[i] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, c) in d.0.iter().enumerate() {
                r[i - dd + j] -= &f * c;
            }
            quo[i - dd] = f;
        }
        r.truncate(dd);
        (UniPoly::new(quo), UniPoly::new(r))
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1.primitive();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive();
        }
        self.div_rem(&g).0.primitive()
    }

    /// Divide out the largest power of the variable.
    pub fn strip_zero_roots(&self) -> UniPoly {
        let k = self.0.iter().take_while(|c| c.is_zero()).count();
        UniPoly(self.0[k..].to_vec())
    }

    /// Strict upper bound on the absolute value of every root.
    pub fn cauchy_bound(&self) -> Q {
        let l = self.lead().abs();
        let m = self.0[..self.degree()].iter().map(|c| c.abs() / &l).max().unwrap_or_else(Q::zero);
        m + Q::one()
    }

    /// Cauchy bound rounded up to a power of two, so bisection midpoints stay dyadic.
    pub fn dyadic_root_bound(&self) -> Q {
        let b = self.cauchy_bound();
        let mut p = Q::one();
        while p < b {
            p *= q(2);
        }
        p
    }
}

/// Sturm chain with positive rescaling at each step.
pub struct Sturm {
    chain: Vec<UniPoly>,
}

impl Sturm {
    pub fn new(p: &UniPoly) -> Self {
        let mut chain = vec![p.primitive(), p.derivative().primitive()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.primitive().scale(&q(-1)));
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Q) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in (a, b].
    pub fn count(&self, a: &Q, b: &Q) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Disjoint intervals, each holding exactly one positive root of `p`, refined to width ≤ `width`.
///
/// A root hit exactly during bisection is returned as a point interval.
pub fn positive_roots(p: &UniPoly, width: &Q) -> Vec<Interval> {
    if p.degree() == 0 {
        return vec![];
    }
    let sf = p.strip_zero_roots().squarefree();
    if sf.degree() == 0 {
        return vec![];
    }
    let sturm = Sturm::new(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(Q::zero(), sf.dyadic_root_bound())];
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine(&sf, &sturm, a, b, width));
            continue;
        }
        let mid = (&a + &b) / q(2);
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Shrink (a, b], known to hold one root, to width ≤ `width`.
///
/// With a single simple root inside and p(a), p(b) ≠ 0 the sign of p alone
/// locates it; the Sturm count is only needed while p(a) = 0.
pub fn refine(p: &UniPoly, sturm: &Sturm, mut a: Q, mut b: Q, width: &Q) -> Interval {
    if p.eval(&b).is_zero() {
        return Interval::point(b);
    }
    let mut sa = p.eval(&a).signum();
    while &(&b - &a) > width {
        let mid = (&a + &b) / q(2);
        let pm = p.eval(&mid);
        if pm.is_zero() {
            return Interval::point(mid);
        }
        let left = if sa.is_zero() { sturm.count(&a, &mid) == 1 } else { pm.signum() != sa };
        if left {
            b = mid;
        } else {
            a = mid;
            sa = pm.signum();
        }
    }
    Interval::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qf;

    #[test]
    fn isolates_simple_roots() {
        // (x - 1)(x - 2)(x + 3)
        let p = UniPoly::from_i64(&[6, -7, 0, 1]);
        let r = positive_roots(&p, &qf(1, 1_000_000));
        assert_eq!(r.len(), 2);
        assert!(r[0].contains(&q(1)));
        assert!(r[1].contains(&q(2)));
    }

    #[test]
    fn repeated_and_zero_roots() {
        // x (x - 1/3)^2 (x^2 + 1)
        let a = UniPoly::from_i64(&[0, 1]);
        let b = UniPoly::new(vec![qf(-1, 3), q(1)]);
        let c = UniPoly::from_i64(&[1, 0, 1]);
        let mul = |x: &UniPoly, y: &UniPoly| {
            let mut v = vec![Q::zero(); x.0.len() + y.0.len() - 1];
            for (i, p) in x.0.iter().enumerate() {
                for (j, r) in y.0.iter().enumerate() {
                    v[i + j] += p * r;
                }
            }
            UniPoly::new(v)
        };
        let p = mul(&mul(&a, &mul(&b, &b)), &c);
        let r = positive_roots(&p, &qf(1, 1_000_000_000));
        assert_eq!(r.len(), 1);
        assert!(r[0].contains(&qf(1, 3)));
    }

    #[test]
    fn sturm_counts() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let s = Sturm::new(&p);
        assert_eq!(s.count(&q(-2), &q(2)), 2);
        assert_eq!(s.count(&q(0), &q(2)), 1);
    }
}
