//! Positive steady states at fixed rational parameters, with certified
//! enclosures, nondegeneracy and stability labels.
//!
//! Conservation laws are substituted to leave r equations in the r free
//! species. Each free coordinate is projected to a univariate polynomial by
//! successive resultants, the positive roots are isolated with Sturm
//! sequences, and every combination of roots is filtered by interval
//! evaluation and then certified with the Krawczyk operator.

use itertools::Itertools;
use num::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::{self, eval_matrix, eval_poly, Interval};
use crate::linalg::{q, sign, Matrix, Q};
use crate::massaction::{assignment, build_f, build_h};
use crate::network::{stoichiometric_data, ReactionNetwork, StoichiometricData};
use crate::poly::{jacobian, Poly};
use crate::univariate::{positive_roots, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("expected {expected} rate constants, got {got}")]
    KappaLength { expected: usize, got: usize },
    #[error("expected {expected} total constants, got {got}")]
    CLength { expected: usize, got: usize },
    #[error("rate constants must be positive")]
    NonPositiveKappa,
    #[error("unsupported shape: {0}")]
    Unsupported(String),
    #[error("positive-dimensional solution set (degenerate continuum)")]
    DegenerateContinuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Target width of root enclosures.
    pub width: Q,
    /// Krawczyk refinement rounds allowed when a sign is not yet certified.
    pub refine_rounds: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { width: Q::new(1.into(), 1_000_000_000_000i64.into()), refine_rounds: 4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateSolution {
    pub x: Vec<Interval>,
    /// A unique root in the enclosure is proven (Krawczyk or exact rational root).
    pub certified: bool,
    pub nondegenerate: bool,
    pub stability: Stability,
    pub det_jac_h_sign: i8,
    pub det_jac_f_sign: i8,
}

impl SteadyStateSolution {
    pub fn midpoint(&self) -> Vec<f64> {
        self.x.iter().map(|i| i.mid_f64()).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.x.iter().all(|i| i.is_point())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "midpoint": self.x.iter().map(|i| format!("{:.12e}", i.mid_f64())).collect::<Vec<_>>(),
            "lower": self.x.iter().map(|i| i.lo.to_string()).collect::<Vec<_>>(),
            "upper": self.x.iter().map(|i| i.hi.to_string()).collect::<Vec<_>>(),
            "certified": self.certified,
            "nondegenerate": self.nondegenerate,
            "stability": self.stability,
            "det_jac_h_sign": self.det_jac_h_sign,
            "det_jac_f_sign": self.det_jac_f_sign,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HurwitzData {
    /// b₀…b_n of the characteristic polynomial, b_n = 1.
    pub char_poly: Vec<Interval>,
    /// H₁…H_n.
    pub hurwitz_determinants: Vec<Interval>,
}

/// κ-specialized polynomials over the x-only universe.
struct Prepared {
    sd: StoichiometricData,
    free: Vec<usize>,
    h: Vec<Poly>,
    jac_h: Vec<Vec<Poly>>,
    jac_f: Vec<Vec<Poly>>,
}

fn prepare(net: &ReactionNetwork, kappa: &[Q], c: Option<&[Q]>) -> Result<Prepared, SolveError> {
    let sd = stoichiometric_data(net);
    if kappa.len() != sd.m {
        return Err(SolveError::KappaLength { expected: sd.m, got: kappa.len() });
    }
    if kappa.iter().any(|k| !k.is_positive()) {
        return Err(SolveError::NonPositiveKappa);
    }
    if let Some(c) = c {
        if c.len() != sd.d() {
            return Err(SolveError::CLength { expected: sd.d(), got: c.len() });
        }
    }
    let ss = build_f(&sd);
    let hs = build_h(&ss, &sd);
    let u = ss.universe;
    let zeros = vec![Q::zero(); sd.d()];
    let a = assignment(&u, Some(kappa), None, Some(c.unwrap_or(&zeros)));
    let map: Vec<Option<usize>> = (0..u.len()).map(|v| u.x_range().contains(&v).then(|| v - u.kappa)).collect();
    let to_x = |p: &Poly| p.substitute(&a).remap(sd.s, &map);
    let h: Vec<Poly> = hs.h.iter().map(to_x).collect();
    let f: Vec<Poly> = ss.f.iter().map(to_x).collect();
    let vars: Vec<usize> = (0..sd.s).collect();
    let jac_h = jacobian(&h, &vars);
    let jac_f = jacobian(&f, &vars);
    let free = sd.free_species();
    Ok(Prepared { sd, free, h, jac_h, jac_f })
}

/// Replace each variable i of `p` by `subs[i]`.
fn substitute_all(p: &Poly, subs: &[Poly]) -> Poly {
    let nv = subs[0].nvars();
    let mut acc = Poly::zero(nv);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(nv, c.clone());
        for (v, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&subs[v].pow(e as u32));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn clean(p: &Poly) -> Poly {
    p.div_monomial(&p.monomial_content()).primitive()
}

/// Sylvester resultant with respect to `v`.
pub fn resultant(p: &Poly, r: &Poly, v: usize) -> Poly {
    let a = p.coefficients_in(v);
    let b = r.coefficients_in(v);
    let (n, m) = (a.len() - 1, b.len() - 1);
    let nv = p.nvars();
    if n == 0 {
        return a[0].pow(m as u32);
    }
    if m == 0 {
        return b[0].pow(n as u32);
    }
    let size = n + m;
    let mut s = vec![vec![Poly::zero(nv); size]; size];
    for i in 0..m {
        for k in 0..=n {
            s[i][i + k] = a[n - k].clone();
        }
    }
    for i in 0..n {
        for k in 0..=m {
            s[m + i][i + k] = b[m - k].clone();
        }
    }
    crate::poly::det(&s)
}

enum Projection {
    NoRoots,
    Poly(UniPoly),
}

/// Eliminate every variable except `keep`, in the given order.
fn eliminate(polys: &[Poly], keep: usize, order: &[usize]) -> Option<Projection> {
    let mut sys: Vec<Poly> = polys.to_vec();
    // a variable absent from every remaining equation is unconstrained
    let mut unconstrained = false;
    for &v in order {
        let (with, without): (Vec<Poly>, Vec<Poly>) = sys.into_iter().partition(|p| p.involves(v));
        if with.is_empty() {
            unconstrained = true;
            sys = without;
            continue;
        }
        if with.len() == 1 {
            sys = without;
            continue;
        }
        let mut pivots: Vec<usize> = (0..with.len()).collect();
        pivots.sort_by_key(|&i| (with[i].degree_in(v), with[i].num_terms()));
        let mut reduced = None;
        for pi in pivots {
            let res: Vec<Poly> =
                (0..with.len()).filter(|&i| i != pi).map(|i| clean(&resultant(&with[pi], &with[i], v))).collect();
            if res.iter().all(|r| !r.is_zero()) {
                reduced = Some(res);
                break;
            }
        }
        sys = without;
        sys.extend(reduced?);
        if sys.iter().any(|p| p.as_constant().is_some_and(|c| !c.is_zero())) {
            return Some(Projection::NoRoots);
        }
    }
    let mut g: Option<UniPoly> = None;
    for p in &sys {
        let u = UniPoly::from_poly(p, keep);
        g = Some(match g {
            None => u,
            Some(acc) => acc.gcd(&u),
        });
    }
    match g {
        None => None,
        Some(u) if u.is_zero() => None,
        Some(u) if u.degree() == 0 => Some(Projection::NoRoots),
        Some(u) if unconstrained => {
            if positive_roots(&u, &Q::new(1.into(), 1024.into())).is_empty() {
                Some(Projection::NoRoots)
            } else {
                None
            }
        }
        Some(u) => Some(Projection::Poly(u)),
    }
}

fn project(polys: &[Poly], keep: usize, r: usize) -> Option<Projection> {
    let others: Vec<usize> = (0..r).filter(|&v| v != keep).collect();
    let mut orders: Vec<Vec<usize>> = Vec::new();
    let mut heuristic = others.clone();
    heuristic.sort_by_key(|&v| polys.iter().map(|p| p.degree_in(v) as usize).sum::<usize>());
    orders.push(heuristic);
    for perm in others.iter().copied().permutations(others.len()) {
        if !orders.contains(&perm) {
            orders.push(perm);
        }
    }
    orders.iter().find_map(|o| eliminate(polys, keep, o))
}

fn q_from_f64(x: f64) -> Q {
    Q::from_f64(x).unwrap_or_else(Q::zero)
}

fn inverse_f64(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 || !a[p][c].is_finite() {
            return None;
        }
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for j in 0..n {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] -= f * a[c][j];
                    inv[i][j] -= f * inv[c][j];
                }
            }
        }
    }
    Some(inv.into_iter().map(|r| r.into_iter().map(q_from_f64).collect()).collect())
}

/// One Krawczyk step around `y`: K(X) = y − Y g(y) + (E − Y J(X))(X − y).
fn krawczyk(g: &[Poly], jac: &[Vec<Poly>], x: &[Interval], y: &[Q], yinv: &[Vec<Q>]) -> Vec<Interval> {
    let n = g.len();
    let gy: Vec<Q> = g.iter().map(|p| p.evaluate_all(y)).collect();
    let jx = eval_matrix(jac, x);
    let dx: Vec<Interval> = x.iter().zip(y).map(|(xi, yi)| xi.sub(&Interval::point(yi.clone()))).collect();
    (0..n)
        .map(|i| {
            let mut center = y[i].clone();
            for k in 0..n {
                center -= &yinv[i][k] * &gy[k];
            }
            let mut acc = Interval::point(center);
            for j in 0..n {
                let mut mij = Interval::point(if i == j { Q::one() } else { Q::zero() });
                for k in 0..n {
                    mij = mij.sub(&jx[k][j].scale(&yinv[i][k]));
                }
                acc = acc.add(&mij.mul(&dx[j]));
            }
            acc
        })
        .collect()
}

fn newton_point(g: &[Poly], jac: &[Vec<Poly>], y: &[Q]) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let jy: Vec<Vec<Q>> = jac.iter().map(|r| r.iter().map(|p| p.evaluate_all(y)).collect()).collect();
    let yinv = inverse_f64(&jy)?;
    let gy: Vec<Q> = g.iter().map(|p| p.evaluate_all(y)).collect();
    let n = y.len();
    let next = (0..n).map(|i| &y[i] - (0..n).fold(Q::zero(), |a, k| a + &yinv[i][k] * &gy[k])).collect();
    Some((next, yinv))
}

/// Round to a dyadic rational near `x` to keep sizes bounded.
fn round_q(x: &Q) -> Q {
    q_from_f64(x.to_f64().unwrap_or(0.0))
}

/// Try to prove a unique root of g near the box; returns a tighter enclosure.
fn certify(g: &[Poly], jac: &[Vec<Poly>], boxed: &[Interval]) -> Option<Vec<Interval>> {
    let y: Vec<Q> = boxed.iter().map(|i| i.mid()).collect();
    if g.iter().all(|p| p.evaluate_all(&y).is_zero()) {
        return Some(y.into_iter().map(Interval::point).collect());
    }
    let mut y = y;
    for _ in 0..3 {
        let (next, _) = newton_point(g, jac, &y)?;
        y = next.iter().map(round_q).collect();
    }
    if g.iter().all(|p| p.evaluate_all(&y).is_zero()) {
        return Some(y.into_iter().map(Interval::point).collect());
    }
    let (_, yinv) = newton_point(g, jac, &y)?;
    let base = boxed.iter().map(|i| i.width()).max().unwrap_or_else(Q::zero);
    let mut rho = if base.is_positive() { base } else { Q::new(1.into(), 1_000_000_000_000i64.into()) };
    for i in 0..y.len() {
        let scale = y[i].abs() * Q::new(1.into(), 10_000_000_000_000i64.into());
        if scale > rho {
            rho = scale;
        }
    }
    for _ in 0..4 {
        let x: Vec<Interval> = y.iter().map(|c| Interval::around(c, &rho)).collect();
        let k = krawczyk(g, jac, &x, &y, &yinv);
        if k.iter().zip(&x).all(|(ki, xi)| ki.strictly_inside(xi)) {
            return Some(k);
        }
        rho *= q(8);
    }
    None
}

/// Krawczyk contraction of an enclosure already known to hold the root.
fn contract(g: &[Poly], jac: &[Vec<Poly>], x: &[Interval]) -> Option<Vec<Interval>> {
    if x.iter().all(|i| i.is_point()) {
        return Some(x.to_vec());
    }
    let y: Vec<Q> = x.iter().map(|i| round_q(&i.mid())).collect();
    let y: Vec<Q> = y.iter().zip(x).map(|(c, i)| if i.contains(c) { c.clone() } else { i.mid() }).collect();
    let (_, yinv) = newton_point(g, jac, &y)?;
    let k = krawczyk(g, jac, x, &y, &yinv);
    k.iter().zip(x).map(|(a, b)| a.intersect(b)).collect()
}

struct Reduced {
    /// Species coordinates as polynomials in the free variables.
    subs: Vec<Poly>,
    g: Vec<Poly>,
    jac_g: Vec<Vec<Poly>>,
}

fn reduce(p: &Prepared, c: &[Q]) -> Reduced {
    let r = p.free.len();
    let sd = &p.sd;
    let mut subs = vec![Poly::zero(r); sd.s];
    for (k, &i) in p.free.iter().enumerate() {
        subs[i] = Poly::var(r, k);
    }
    for (row, &i) in sd.leading.iter().enumerate() {
        let mut e = Poly::constant(r, c[row].clone());
        for (k, &j) in p.free.iter().enumerate() {
            let w = &sd.w[(row, j)];
            if !w.is_zero() {
                e = e.sub(&Poly::var(r, k).scale(w));
            }
        }
        subs[i] = e;
    }
    let g: Vec<Poly> = p.free.iter().map(|&i| substitute_all(&p.h[i], &subs)).collect();
    let vars: Vec<usize> = (0..r).collect();
    let jac_g = jacobian(&g, &vars);
    Reduced { subs, g, jac_g }
}

fn lift(red: &Reduced, free_box: &[Interval]) -> Vec<Interval> {
    red.subs.iter().map(|p| eval_poly(p, free_box)).collect()
}

/// All positive solutions of h = 0 at rate constants κ and total constants c.
pub fn solve_positive_steady_states(
    net: &ReactionNetwork,
    kappa: &[Q],
    c: &[Q],
) -> Result<Vec<SteadyStateSolution>, SolveError> {
    solve_with(net, kappa, c, &SolveOptions::default())
}

pub fn solve_with(
    net: &ReactionNetwork,
    kappa: &[Q],
    c: &[Q],
    opts: &SolveOptions,
) -> Result<Vec<SteadyStateSolution>, SolveError> {
    let prep = prepare(net, kappa, Some(c))?;
    let r = prep.free.len();
    if r >= 2 && prep.sd.s > 4 {
        return Err(SolveError::Unsupported(format!("{} species at rank {r}", prep.sd.s)));
    }
    let red = reduce(&prep, c);
    if red.subs.iter().any(|e| e.as_constant().is_some_and(|k| !k.is_positive())) {
        return Ok(vec![]);
    }
    let mut eqs: Vec<Poly> = Vec::new();
    for g in &red.g {
        if let Some(k) = g.as_constant() {
            if k.is_zero() {
                continue;
            }
            return Ok(vec![]);
        }
        // a monomial times a nonzero constant has no positive zero
        let g = clean(g);
        if g.as_constant().is_some() {
            return Ok(vec![]);
        }
        eqs.push(g);
    }
    let mut roots: Vec<Vec<Interval>> = Vec::with_capacity(r);
    for v in 0..r {
        match project(&eqs, v, r) {
            None => return Err(SolveError::DegenerateContinuum),
            Some(Projection::NoRoots) => return Ok(vec![]),
            Some(Projection::Poly(u)) => {
                let rs = positive_roots(&u, &opts.width);
                if rs.is_empty() {
                    return Ok(vec![]);
                }
                roots.push(rs);
            }
        }
    }
    let mut found: Vec<(Vec<Interval>, bool)> = Vec::new();
    for combo in roots.iter().map(|v| v.iter()).multi_cartesian_product() {
        let free_box: Vec<Interval> = combo.into_iter().cloned().collect();
        let full = lift(&red, &free_box);
        if !full.iter().all(|x| x.lo.is_positive()) {
            continue;
        }
        if !prep.h.iter().all(|p| eval_poly(p, &full).contains_zero()) {
            continue;
        }
        let (enclosure, certified) = match certify(&red.g, &red.jac_g, &free_box) {
            Some(e) => (e, true),
            None => (free_box, false),
        };
        let overlaps = found.iter().any(|(e, _)| e.iter().zip(&enclosure).all(|(a, b)| a.intersect(b).is_some()));
        if !overlaps {
            found.push((enclosure, certified));
        }
    }
    let mut out = Vec::new();
    for (mut free_box, certified) in found {
        let mut full = lift(&red, &free_box);
        if !full.iter().all(|x| x.lo.is_positive()) {
            continue;
        }
        let mut labels = labels_at(&prep, &full);
        let mut rounds = 0;
        while certified && rounds < opts.refine_rounds && labels.needs_refinement() {
            match contract(&red.g, &red.jac_g, &free_box) {
                Some(next) => free_box = next,
                None => break,
            }
            full = lift(&red, &free_box);
            labels = labels_at(&prep, &full);
            rounds += 1;
        }
        out.push(SteadyStateSolution {
            x: full,
            certified,
            nondegenerate: labels.det_h.is_some_and(|s| s != 0),
            stability: labels.stability,
            det_jac_h_sign: labels.det_h.unwrap_or(0),
            det_jac_f_sign: labels.det_f.unwrap_or(0),
        });
    }
    out.sort_by(|a, b| a.x[0].lo.cmp(&b.x[0].lo));
    Ok(out)
}

struct Labels {
    det_h: Option<i8>,
    det_f: Option<i8>,
    stability: Stability,
}

impl Labels {
    fn needs_refinement(&self) -> bool {
        self.det_h.is_none() || self.stability == Stability::Undetermined
    }
}

fn labels_at(p: &Prepared, x: &[Interval]) -> Labels {
    // Outward dyadic rounding keeps the enclosure and bounds the rational sizes.
    let x: Vec<Interval> = x.iter().map(|v| v.outward(48)).collect();
    let x = &x[..];
    let jh = eval_matrix(&p.jac_h, x);
    let jf = eval_matrix(&p.jac_f, x);
    let det_h = interval::det(&jh).sign();
    let det_f = interval::det(&jf).sign();
    let stability = stability_from(p.sd.rank, p.sd.s, &jf, det_h, det_f);
    Labels { det_h, det_f, stability }
}

fn sign_of(i: &Interval) -> Option<i8> {
    i.sign()
}

fn stability_from(r: usize, s: usize, jf: &[Vec<Interval>], det_h: Option<i8>, det_f: Option<i8>) -> Stability {
    let Some(dh) = det_h.filter(|&d| d != 0) else { return Stability::Undetermined };
    match r {
        1 => {
            if dh < 0 {
                Stability::Stable
            } else {
                Stability::Unstable
            }
        }
        2 => {
            let trace = interval::principal_minor_sum(jf, 1);
            match sign_of(&trace) {
                Some(t) if t < 0 && dh > 0 => Stability::Stable,
                Some(t) if t > 0 => Stability::Unstable,
                _ if dh < 0 => Stability::Unstable,
                _ => Stability::Undetermined,
            }
        }
        _ => {
            if r == s {
                let expected = if s % 2 == 0 { 1 } else { -1 };
                if det_f.is_some_and(|d| d != 0 && d != expected) {
                    return Stability::Unstable;
                }
            }
            let coeffs = reduced_char_poly(jf, r);
            hurwitz_verdict(&hurwitz_determinants(&coeffs))
        }
    }
}

/// Coefficients b₀…b_r of λ^r − E₁λ^{r−1} + E₂λ^{r−2} − …, the factor of
/// det(λE − Jac_f) carrying the nonzero spectrum.
fn reduced_char_poly(jf: &[Vec<Interval>], r: usize) -> Vec<Interval> {
    (0..=r)
        .map(|k| {
            let e = interval::principal_minor_sum(jf, r - k);
            if (r - k) % 2 == 1 {
                e.neg()
            } else {
                e
            }
        })
        .collect()
}

/// H₁…H_n for coefficients b₀…b_n (b_n leading), with ℋ_ij = b_{n−2i+j}.
pub fn hurwitz_determinants(b: &[Interval]) -> Vec<Interval> {
    let n = b.len() - 1;
    let coef = |k: i64| -> Interval {
        if k < 0 || k > n as i64 {
            Interval::point(Q::zero())
        } else {
            b[k as usize].clone()
        }
    };
    let h: Vec<Vec<Interval>> =
        (1..=n as i64).map(|i| (1..=n as i64).map(|j| coef(n as i64 - 2 * i + j)).collect()).collect();
    (1..=n)
        .map(|k| {
            let sub: Vec<Vec<Interval>> = h[..k].iter().map(|row| row[..k].to_vec()).collect();
            interval::det(&sub)
        })
        .collect()
}

fn hurwitz_verdict(hs: &[Interval]) -> Stability {
    let signs: Vec<Option<i8>> = hs.iter().map(|h| h.sign()).collect();
    if signs.iter().all(|s| *s == Some(1)) {
        Stability::Stable
    } else if signs.iter().any(|s| matches!(s, Some(v) if *v <= 0)) {
        Stability::Unstable
    } else {
        Stability::Undetermined
    }
}

/// Characteristic polynomial det(λE − Jac_f) at x and its Hurwitz determinants.
pub fn hurwitz_data(net: &ReactionNetwork, kappa: &[Q], x: &[Interval]) -> Result<HurwitzData, SolveError> {
    let p = prepare(net, kappa, None)?;
    let jf = eval_matrix(&p.jac_f, x);
    let char_poly = reduced_char_poly(&jf, p.sd.s);
    let hurwitz_determinants = hurwitz_determinants(&char_poly);
    Ok(HurwitzData { char_poly, hurwitz_determinants })
}

pub fn classify_stability(net: &ReactionNetwork, kappa: &[Q], x: &[Interval]) -> Result<Stability, SolveError> {
    let p = prepare(net, kappa, None)?;
    Ok(labels_at(&p, x).stability)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    pub det_jac_h_sign: i8,
    pub det_jac_f_sign: i8,
}

pub fn nondegeneracy(net: &ReactionNetwork, kappa: &[Q], x: &[Interval]) -> Result<Nondegeneracy, SolveError> {
    let p = prepare(net, kappa, None)?;
    let l = labels_at(&p, x);
    Ok(Nondegeneracy {
        nondegenerate: l.det_h.is_some_and(|s| s != 0),
        det_jac_h_sign: l.det_h.unwrap_or(0),
        det_jac_f_sign: l.det_f.unwrap_or(0),
    })
}

/// Exact Jacobian of f at a rational point.
pub fn jac_f_at(net: &ReactionNetwork, kappa: &[Q], x: &[Q]) -> Result<Matrix, SolveError> {
    let p = prepare(net, kappa, None)?;
    let s = p.sd.s;
    let mut m = Matrix::zeros(s, s);
    for i in 0..s {
        for j in 0..s {
            m[(i, j)] = p.jac_f[i][j].evaluate_all(x);
        }
    }
    Ok(m)
}

/// Exact sign of det Jac_h at a rational point.
pub fn det_jac_h_sign_at(net: &ReactionNetwork, kappa: &[Q], x: &[Q]) -> Result<i8, SolveError> {
    let p = prepare(net, kappa, None)?;
    let s = p.sd.s;
    let mut m = Matrix::zeros(s, s);
    for i in 0..s {
        for j in 0..s {
            m[(i, j)] = p.jac_h[i][j].evaluate_all(x);
        }
    }
    Ok(sign(&m.det()))
}
