//! Mass-action steady-state systems f = N v and their augmented form h.

use num::Zero;

use crate::linalg::{q, Q};
use crate::network::StoichiometricData;
use crate::poly::{det, jacobian, Poly, SignProfile, Universe};

#[derive(Debug, Clone)]
pub struct SteadyStateSystem {
    pub universe: Universe,
    pub f: Vec<Poly>,
    pub v: Vec<Poly>,
}

#[derive(Debug, Clone)]
pub struct AugmentedSystem {
    pub universe: Universe,
    pub h: Vec<Poly>,
}

/// Universe of κ, x and c for a network.
pub fn universe_for(sd: &StoichiometricData) -> Universe {
    Universe { kappa: sd.m, x: sd.s, c: sd.d(), ..Default::default() }
}

pub fn build_f(sd: &StoichiometricData) -> SteadyStateSystem {
    let u = universe_for(sd);
    let nv = u.len();
    let v: Vec<Poly> = (0..sd.m)
        .map(|j| {
            let mut p = Poly::var(nv, u.kappa_var(j));
            for i in 0..sd.s {
                for _ in 0..sd.y[i][j] {
                    p = p.mul(&Poly::var(nv, u.x_var(i)));
                }
            }
            p
        })
        .collect();
    let f = (0..sd.s)
        .map(|i| {
            (0..sd.m).fold(Poly::zero(nv), |acc, j| match sd.n[i][j] {
                0 => acc,
                k => acc.add(&v[j].scale(&q(k))),
            })
        })
        .collect();
    SteadyStateSystem { universe: u, f, v }
}

pub fn build_h(ss: &SteadyStateSystem, sd: &StoichiometricData) -> AugmentedSystem {
    let u = ss.universe;
    let nv = u.len();
    let mut h = ss.f.clone();
    for (k, &i) in sd.leading.iter().enumerate() {
        let mut law = Poly::var(nv, u.c_var(k)).neg();
        for j in 0..sd.s {
            let w = &sd.w[(k, j)];
            if !w.is_zero() {
                law = law.add(&Poly::var(nv, u.x_var(j)).scale(w));
            }
        }
        h[i] = law;
    }
    AugmentedSystem { universe: u, h }
}

pub fn x_vars(u: &Universe) -> Vec<usize> {
    u.x_range().collect()
}

pub fn jac_f(ss: &SteadyStateSystem) -> Vec<Vec<Poly>> {
    jacobian(&ss.f, &x_vars(&ss.universe))
}

pub fn jac_h(hs: &AugmentedSystem) -> Vec<Vec<Poly>> {
    jacobian(&hs.h, &x_vars(&hs.universe))
}

pub fn det_jac_f(ss: &SteadyStateSystem) -> Poly {
    det(&jac_f(ss))
}

pub fn det_jac_h(hs: &AugmentedSystem) -> Poly {
    det(&jac_h(hs))
}

/// det of the Jacobian of x ↦ x − f(κ, x).
pub fn det_jac_x_minus_f(ss: &SteadyStateSystem) -> Poly {
    let nv = ss.universe.len();
    let mut j = jac_f(ss);
    for (i, row) in j.iter_mut().enumerate() {
        for (k, e) in row.iter_mut().enumerate() {
            *e = if i == k { Poly::one(nv).sub(e) } else { e.neg() };
        }
    }
    det(&j)
}

pub fn term_sign_profile(p: &Poly) -> SignProfile {
    p.sign_profile()
}

/// Assignment vector over a universe from κ, x and c values.
pub fn assignment(u: &Universe, kappa: Option<&[Q]>, x: Option<&[Q]>, c: Option<&[Q]>) -> Vec<Option<Q>> {
    let mut a = vec![None; u.len()];
    if let Some(k) = kappa {
        for (j, v) in k.iter().enumerate() {
            a[u.kappa_var(j)] = Some(v.clone());
        }
    }
    if let Some(x) = x {
        for (i, v) in x.iter().enumerate() {
            a[u.x_var(i)] = Some(v.clone());
        }
    }
    if let Some(c) = c {
        for (k, v) in c.iter().enumerate() {
            a[u.c_var(k)] = Some(v.clone());
        }
    }
    a
}
