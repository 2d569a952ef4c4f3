//! Extreme rays of the flux cone {γ ≥ 0 : Nγ = 0} and flux decomposition.

use itertools::Itertools;
use num::integer::gcd;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{int_det, q, Matrix, Q};
use crate::network::StoichiometricData;

/// Extreme rays as coprime nonnegative integer vectors, sorted by support then value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremeRaySet {
    pub m: usize,
    pub rays: Vec<Vec<i64>>,
}

impl ExtremeRaySet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn support(&self, k: usize) -> Vec<usize> {
        support(&self.rays[k])
    }

    pub fn rational(&self, k: usize) -> Vec<Q> {
        self.rays[k].iter().map(|&v| q(v)).collect()
    }
}

fn support(r: &[i64]) -> Vec<usize> {
    r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i).collect()
}

fn normalize(mut r: Vec<i128>) -> Vec<i128> {
    let g = r.iter().fold(0i128, |g, &v| gcd(g, v));
    if g > 1 {
        for v in &mut r {
            *v /= g;
        }
    }
    r
}

fn sort_rays(rays: &mut [Vec<i64>]) {
    rays.sort_by(|a, b| support(a).cmp(&support(b)).then_with(|| a.cmp(b)));
}

/// Double description: intersect the nonnegative orthant with each row of Nγ = 0.
pub fn extreme_rays(sd: &StoichiometricData) -> ExtremeRaySet {
    extreme_rays_dd(&sd.n)
}

pub fn extreme_rays_dd(n: &[Vec<i64>]) -> ExtremeRaySet {
    let m = n.first().map_or(0, |r| r.len());
    let mut rays: Vec<Vec<i128>> = (0..m)
        .map(|i| {
            let mut e = vec![0i128; m];
            e[i] = 1;
            e
        })
        .collect();
    let mut eq_rows: Vec<Vec<i64>> = Vec::new();
    for row in n {
        let mut stacked = eq_rows.clone();
        stacked.push(row.clone());
        if crate::linalg::int_rank(&stacked) == eq_rows.len() {
            continue;
        }
        let val = |r: &Vec<i128>| -> i128 { row.iter().zip(r).map(|(&a, &b)| a as i128 * b).sum() };
        let vals: Vec<i128> = rays.iter().map(val).collect();
        let mut next: Vec<Vec<i128>> = Vec::new();
        for (r, &v) in rays.iter().zip(&vals) {
            if v == 0 {
                next.push(r.clone());
            }
        }
        for (i, &vi) in vals.iter().enumerate() {
            if vi <= 0 {
                continue;
            }
            for (j, &vj) in vals.iter().enumerate() {
                if vj >= 0 || !adjacent(&rays[i], &rays[j], &eq_rows, m) {
                    continue;
                }
                let combo: Vec<i128> = rays[i]
                    .iter()
                    .zip(&rays[j])
                    .map(|(&a, &b)| {
                        let x = vi.checked_mul(b).expect("ray overflow");
                        let y = (-vj).checked_mul(a).expect("ray overflow");
                        x + y
                    })
                    .collect();
                next.push(normalize(combo));
            }
        }
        eq_rows.push(row.clone());
        rays = next;
    }
    let mut out: Vec<Vec<i64>> = rays.into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect();
    sort_rays(&mut out);
    out.dedup();
    ExtremeRaySet { m, rays: out }
}

/// Two rays of the current cone span a face of dimension two iff the constraints
/// active at both have rank m − 2.
fn adjacent(a: &[i128], b: &[i128], eq_rows: &[Vec<i64>], m: usize) -> bool {
    let zeros: Vec<usize> = (0..m).filter(|&i| a[i] == 0 && b[i] == 0).collect();
    if zeros.len() + eq_rows.len() < m.saturating_sub(2) {
        return false;
    }
    let mut rows: Vec<Vec<i64>> = eq_rows.to_vec();
    for &z in &zeros {
        let mut e = vec![0; m];
        e[z] = 1;
        rows.push(e);
    }
    crate::linalg::int_rank(&rows) == m - 2
}

/// Extreme rays by enumerating candidate supports of size ≤ rank + 1.
///
/// A support S carries an extreme ray iff ker N[:, S] is one-dimensional and
/// spanned by a vector that is nonzero and of one sign on all of S.
pub fn elementary_modes(n: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = n.first().map_or(0, |r| r.len());
    let rank = crate::linalg::int_rank(n);
    let mut out = Vec::new();
    for k in 2..=(rank + 1).min(m) {
        for subset in (0..m).combinations(k) {
            if let Some(v) = one_dim_kernel(n, &subset) {
                let mut ray = vec![0; m];
                for (&j, &x) in subset.iter().zip(&v) {
                    ray[j] = x;
                }
                out.push(ray);
            }
        }
    }
    sort_rays(&mut out);
    out
}

fn one_dim_kernel(n: &[Vec<i64>], cols: &[usize]) -> Option<Vec<i64>> {
    let k = cols.len();
    let s = n.len();
    for rows in (0..s).combinations(k - 1) {
        let v: Vec<i64> = (0..k)
            .map(|drop| {
                let minor: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&i| cols.iter().enumerate().filter(|&(c, _)| c != drop).map(|(_, &j)| n[i][j]).collect())
                    .collect();
                let d = int_det(&minor);
                if drop % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let in_kernel = n.iter().all(|row| cols.iter().zip(&v).map(|(&j, &x)| row[j] * x).sum::<i64>() == 0);
        if !in_kernel {
            return None;
        }
        let positive = v.iter().all(|&x| x > 0);
        let negative = v.iter().all(|&x| x < 0);
        if !(positive || negative) {
            return None;
        }
        let g = v.iter().fold(0i64, |g, &x| gcd(g, x));
        return Some(v.iter().map(|&x| x.abs() / g).collect());
    }
    None
}

/// Whether the modes jointly touch every reaction.
pub fn modes_cover_all(modes: &[Vec<i64>], m: usize) -> bool {
    (0..m).all(|j| modes.iter().any(|r| r[j] != 0))
}

pub fn strictly_positive_flux_exists(rays: &ExtremeRaySet) -> bool {
    rays.m > 0 && modes_cover_all(&rays.rays, rays.m)
}

/// Nonnegative λ with Σ λ_k R⁽ᵏ⁾ = γ, by a phase-one simplex with Bland's rule.
pub fn decompose_flux(gamma: &[Q], rays: &ExtremeRaySet) -> Option<Vec<Q>> {
    let m = rays.m;
    let t = rays.len();
    assert_eq!(gamma.len(), m);
    if gamma.iter().any(|g| g.is_negative()) {
        return None;
    }
    if gamma.iter().all(|g| g.is_zero()) {
        return Some(vec![Q::zero(); t]);
    }
    let cols = t + m;
    let mut tab = Matrix::zeros(m, cols + 1);
    for i in 0..m {
        for k in 0..t {
            tab[(i, k)] = q(rays.rays[k][i]);
        }
        tab[(i, t + i)] = Q::one();
        tab[(i, cols)] = gamma[i].clone();
    }
    let mut basis: Vec<usize> = (t..t + m).collect();
    let mut cost = vec![Q::zero(); cols + 1];
    for i in 0..m {
        for j in 0..t {
            cost[j] -= &tab[(i, j)];
        }
        cost[cols] -= &tab[(i, cols)];
    }
    loop {
        let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if tab[(i, enter)].is_positive() {
                let ratio = &tab[(i, cols)] / &tab[(i, enter)];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave?;
        let piv = tab[(r, enter)].clone();
        for j in 0..=cols {
            let v = &tab[(r, j)] / &piv;
            tab[(r, j)] = v;
        }
        for i in 0..m {
            if i != r && !tab[(i, enter)].is_zero() {
                let f = tab[(i, enter)].clone();
                for j in 0..=cols {
                    let v = &tab[(r, j)] * &f;
                    tab[(i, j)] -= v;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..=cols {
                let v = &tab[(r, j)] * &f;
                cost[j] -= v;
            }
        }
        basis[r] = enter;
    }
    if !cost[cols].is_zero() {
        return None;
    }
    let mut lambda = vec![Q::zero(); t];
    for (i, &b) in basis.iter().enumerate() {
        if b < t {
            lambda[b] = tab[(i, cols)].clone();
        }
    }
    Some(lambda)
}

/// Σ λ_k R⁽ᵏ⁾.
pub fn combine(lambda: &[Q], rays: &ExtremeRaySet) -> Vec<Q> {
    let mut out = vec![Q::zero(); rays.m];
    for (l, r) in lambda.iter().zip(&rays.rays) {
        if l.is_zero() {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(r) {
            if v != 0 {
                *o += l * q(v);
            }
        }
    }
    out
}
