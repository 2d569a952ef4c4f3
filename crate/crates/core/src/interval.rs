//! Closed rational intervals and interval evaluation of polynomials.

use num::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Q;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn around(c: &Q, r: &Q) -> Self {
        Interval { lo: c - r, hi: c + r }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest enclosing interval with endpoints in 2^-bits ℤ.
    pub fn outward(&self, bits: u32) -> Interval {
        let scale = Q::from_integer(num::BigInt::one() << bits);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Interval { lo, hi }
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign: Some(±1) when zero is excluded, Some(0) for the point zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn strictly_inside(&self, outer: &Interval) -> bool {
        if outer.is_point() {
            return self == outer;
        }
        outer.lo < self.lo && self.hi < outer.hi
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi < o.hi { self.hi.clone() } else { o.hi.clone() };
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn scale(&self, k: &Q) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if self.is_point() {
            return o.scale(&self.lo);
        }
        if o.is_point() {
            return self.scale(&o.lo);
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(Q::one());
        }
        let a = num::pow(self.lo.clone(), e as usize);
        let b = num::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 || !self.lo.is_negative() {
            Interval { lo: a, hi: b }
        } else if !self.hi.is_positive() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: Q::zero(), hi: if a > b { a } else { b } }
        }
    }
}

/// Natural interval extension of a polynomial.
pub fn eval_poly(p: &Poly, xs: &[Interval]) -> Interval {
    let mut acc = Interval::point(Q::zero());
    for (m, c) in p.terms() {
        let mut t = Interval::point(c.clone());
        for (v, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&xs[v].pow(e as u32));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

pub fn eval_matrix(m: &[Vec<Poly>], xs: &[Interval]) -> Vec<Vec<Interval>> {
    m.iter().map(|r| r.iter().map(|p| eval_poly(p, xs)).collect()).collect()
}

/// Determinant of an interval matrix by cofactor expansion.
pub fn det(m: &[Vec<Interval>]) -> Interval {
    let n = m.len();
    match n {
        0 => Interval::point(Q::one()),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = Interval::point(Q::zero());
            for j in 0..n {
                if m[0][j].sign() == Some(0) {
                    continue;
                }
                let minor: Vec<Vec<Interval>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = m[0][j].mul(&det(&minor));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// Sum of the k×k principal minors.
pub fn principal_minor_sum(m: &[Vec<Interval>], k: usize) -> Interval {
    use itertools::Itertools;
    let n = m.len();
    if k == 0 {
        return Interval::point(Q::one());
    }
    (0..n).combinations(k).fold(Interval::point(Q::zero()), |acc, idx| {
        let sub: Vec<Vec<Interval>> = idx.iter().map(|&a| idx.iter().map(|&b| m[a][b].clone()).collect()).collect();
        acc.add(&det(&sub))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    #[test]
    fn multiplication_bounds() {
        let a = Interval::new(q(-1), q(2));
        let b = Interval::new(q(3), q(4));
        assert_eq!(a.mul(&b), Interval::new(q(-4), q(8)));
        assert_eq!(a.pow(2), Interval::new(q(0), q(4)));
        assert_eq!(a.sign(), None);
        assert_eq!(b.sign(), Some(1));
    }

    #[test]
    fn enclosure_contains_true_value() {
        let p = Poly::var(2, 0).mul(&Poly::var(2, 1)).sub(&Poly::var(2, 0));
        let xs = [Interval::new(qf(9, 10), qf(11, 10)), Interval::new(q(2), q(3))];
        let v = eval_poly(&p, &xs);
        assert!(v.contains(&q(1)));
        assert!(v.contains(&(qf(11, 10) * q(3) - qf(11, 10))));
    }
}
