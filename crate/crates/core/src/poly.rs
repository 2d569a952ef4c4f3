//! Sparse multivariate polynomials over exact rationals.
//!
//! Exponent vectors are dense over a fixed [`Universe`] laid out as
//! κ₁…κ_m, x₁…x_s, p₁…p_s, λ₁…λ_t, c₁…c_d. Terms are kept in graded
//! lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{q, Q};

/// Block sizes of the variable universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Universe {
    pub kappa: usize,
    pub x: usize,
    pub p: usize,
    pub lambda: usize,
    pub c: usize,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.kappa + self.x + self.p + self.lambda + self.c
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x_only(s: usize) -> Self {
        Universe { x: s, ..Default::default() }
    }

    pub fn kappa_var(&self, j: usize) -> usize {
        assert!(j < self.kappa);
        j
    }

    pub fn x_var(&self, i: usize) -> usize {
        assert!(i < self.x);
        self.kappa + i
    }

    pub fn p_var(&self, i: usize) -> usize {
        assert!(i < self.p);
        self.kappa + self.x + i
    }

    pub fn lambda_var(&self, k: usize) -> usize {
        assert!(k < self.lambda);
        self.kappa + self.x + self.p + k
    }

    pub fn c_var(&self, k: usize) -> usize {
        assert!(k < self.c);
        self.kappa + self.x + self.p + self.lambda + k
    }

    pub fn x_range(&self) -> std::ops::Range<usize> {
        self.kappa..self.kappa + self.x
    }

    pub fn lambda_range(&self) -> std::ops::Range<usize> {
        let b = self.kappa + self.x + self.p;
        b..b + self.lambda
    }

    /// Printable name of variable `v`, e.g. "κ₃" or "λ₁₂".
    pub fn name(&self, v: usize) -> String {
        let blocks = [("κ", self.kappa), ("x", self.x), ("p", self.p), ("λ", self.lambda), ("c", self.c)];
        let mut rest = v;
        for (sym, n) in blocks {
            if rest < n {
                return format!("{sym}{}", subscript(rest + 1));
            }
            rest -= n;
        }
        format!("v{}", subscript(v + 1))
    }
}

fn subscript(n: usize) -> String {
    const D: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| D[c.to_digit(10).unwrap() as usize]).collect()
}

fn superscript(n: u32) -> String {
    const D: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| D[c.to_digit(10).unwrap() as usize]).collect()
}

/// Exponent vector with graded lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    fn div(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignProfile {
    AllPositive,
    AllNegative,
    Mixed,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("no value assigned to variable {0}")]
    MissingVariable(usize),
    #[error("division is not exact")]
    InexactDivision,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Self::term(Mono(e), Q::one())
    }

    pub fn term(m: Mono, c: Q) -> Self {
        let nvars = m.0.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Mono::one(self.nvars)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Q) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut r = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(self.nvars);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[v] -= 1;
                r.add_term(m2, c * q(e as i64));
            }
        }
        r
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Coefficients with respect to `v`: result[k] multiplies v^k.
    pub fn coefficients_in(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out[k].add_term(m2, c.clone());
        }
        out
    }

    /// Exact value given values for every variable that occurs.
    pub fn evaluate(&self, values: &[Option<Q>]) -> Result<Q, PolyError> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let x = values.get(v).and_then(|x| x.as_ref()).ok_or(PolyError::MissingVariable(v))?;
                    t *= num::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn evaluate_all(&self, values: &[Q]) -> Q {
        let opt: Vec<Option<Q>> = values.iter().cloned().map(Some).collect();
        self.evaluate(&opt).expect("complete assignment")
    }

    pub fn evaluate_f64(&self, values: &[f64]) -> f64 {
        use num::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (v, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t *= values[v].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitute numeric values for some variables, keeping the universe.
    pub fn substitute(&self, values: &[Option<Q>]) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            let mut m2 = m.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    if let Some(Some(x)) = values.get(v) {
                        t *= num::pow(x.clone(), e as usize);
                        m2.0[v] = 0;
                    }
                }
            }
            r.add_term(m2, t);
        }
        r
    }

    /// Replace variable `v` by a polynomial.
    pub fn compose(&self, v: usize, by: &Poly) -> Poly {
        let coeffs = self.coefficients_in(v);
        let mut r = Poly::zero(self.nvars);
        let mut power = Poly::one(self.nvars);
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                power = power.mul(by);
            }
            if !c.is_zero() {
                r = r.add(&c.mul(&power));
            }
        }
        r
    }

    /// Move to a new universe; `map[v]` is the new index of old variable `v`.
    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> Poly {
        let mut r = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (v, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let nv = map[v].expect("variable dropped by remap");
                    e[nv] += k;
                }
            }
            r.add_term(Mono(e), c.clone());
        }
        r
    }

    pub fn sign_profile(&self) -> SignProfile {
        if self.is_zero() {
            return SignProfile::Zero;
        }
        let pos = self.terms.values().all(|c| c.is_positive());
        let neg = self.terms.values().all(|c| c.is_negative());
        match (pos, neg) {
            (true, _) => SignProfile::AllPositive,
            (_, true) => SignProfile::AllNegative,
            _ => SignProfile::Mixed,
        }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut g: Option<Vec<u16>> = None;
        for m in self.terms.keys() {
            g = Some(match g {
                None => m.0.clone(),
                Some(g) => g.iter().zip(&m.0).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        Mono(g.unwrap_or_else(|| vec![0; self.nvars]))
    }

    pub fn div_monomial(&self, d: &Mono) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.div(d), c.clone())).collect() }
    }

    /// Scale to integer coefficients with unit gcd and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        use num::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = num::BigInt::one();
        let mut g = num::BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        let mut k = Q::new(l, g);
        if self.leading().unwrap().1.is_negative() {
            k = -k;
        }
        self.scale(&k)
    }

    /// Exact quotient `self / d`; errors if `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly, PolyError> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quo = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return Err(PolyError::InexactDivision);
            }
            let t = Poly::term(m.div(&lm), c / &lc);
            rem = rem.sub(&t.mul(d));
            quo = quo.add(&t);
        }
        Ok(quo)
    }

    pub fn to_string_with(&self, u: &Universe) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: String = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { u.name(v) } else { format!("{}{}", u.name(v), superscript(e as u32)) })
                .collect();
            if vars.is_empty() || !a.is_one() {
                let _ = write!(out, "{a}");
            }
            out.push_str(&vars);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(m, c)| {
                serde_json::json!({
                    "exponents": m.0,
                    "numerator": c.numer().to_string(),
                    "denominator": c.denom().to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

/// Jacobian matrix ∂polys[i]/∂vars[j].
pub fn jacobian(polys: &[Poly], vars: &[usize]) -> Vec<Vec<Poly>> {
    polys.iter().map(|p| vars.iter().map(|&v| p.derivative(v)).collect()).collect()
}

/// Determinant: cofactor expansion up to 4×4, fraction-free Bareiss above.
pub fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    if n == 0 {
        return Poly::one(0);
    }
    let nv = m[0][0].nvars();
    if n <= 4 {
        cofactor(m, nv)
    } else {
        bareiss(m, nv)
    }
}

fn cofactor(m: &[Vec<Poly>], nv: usize) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    if n == 2 {
        return m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
    }
    let mut acc = Poly::zero(nv);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect()).collect();
        let t = m[0][j].mul(&cofactor(&minor, nv));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

fn bareiss(m: &[Vec<Poly>], nv: usize) -> Poly {
    let n = m.len();
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut sign = false;
    let mut prev = Poly::one(nv);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = !sign;
                }
                None => return Poly::zero(nv),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero(nv);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}
