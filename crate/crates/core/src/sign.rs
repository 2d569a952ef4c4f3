//! The transformed Jacobian J(p, λ), its principal-minor sum B, and the
//! pair criterion certifying det Jac_h > 0 at positive steady states.

use std::collections::BTreeSet;

use itertools::Itertools;
use num::Signed;
use serde::{Deserialize, Serialize};

use crate::fluxcone::ExtremeRaySet;
use crate::linalg::{int_det, q};
use crate::massaction::{det_jac_f, det_jac_x_minus_f, SteadyStateSystem};
use crate::network::{ReactionNetwork, StoichiometricData};
use crate::poly::{det, Poly, SignProfile, Universe};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignError {
    #[error("the flux cone is {{0}}; no positive flux")]
    NoPositiveFlux,
}

#[derive(Debug, Clone)]
pub struct TransformedJacobian {
    pub universe: Universe,
    pub j: Vec<Vec<Poly>>,
}

/// J(p, λ) = N · diag(Σ λ_k R⁽ᵏ⁾) · Yᵀ · diag(p) over the universe (p, λ).
pub fn build_transformed_jacobian(sd: &StoichiometricData, rays: &ExtremeRaySet) -> Result<TransformedJacobian, SignError> {
    if rays.is_empty() {
        return Err(SignError::NoPositiveFlux);
    }
    let u = Universe { p: sd.s, lambda: rays.len(), ..Default::default() };
    let nv = u.len();
    let a = ray_matrices(sd, rays);
    let j = (0..sd.s)
        .map(|r| {
            (0..sd.s)
                .map(|c| {
                    let mut e = Poly::zero(nv);
                    for (k, ak) in a.iter().enumerate() {
                        if ak[r][c] != 0 {
                            let t = Poly::var(nv, u.lambda_var(k)).mul(&Poly::var(nv, u.p_var(c))).scale(&q(ak[r][c]));
                            e = e.add(&t);
                        }
                    }
                    e
                })
                .collect()
        })
        .collect();
    Ok(TransformedJacobian { universe: u, j })
}

/// A_k = N · diag(R⁽ᵏ⁾) · Yᵀ, so that J = Σ_k λ_k A_k diag(p).
pub fn ray_matrices(sd: &StoichiometricData, rays: &ExtremeRaySet) -> Vec<Vec<Vec<i64>>> {
    rays.rays
        .iter()
        .map(|r| {
            (0..sd.s)
                .map(|a| (0..sd.s).map(|b| (0..sd.m).map(|j| sd.n[a][j] * r[j] * sd.y[b][j]).sum()).collect())
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BPolynomialBundle {
    pub universe: Universe,
    pub b: Poly,
    pub theta: BTreeSet<usize>,
    pub b_tilde: Poly,
    pub q: Vec<Vec<usize>>,
    pub q_tilde: Vec<Vec<usize>>,
    pub rays: ExtremeRaySet,
}

/// Sum of the k×k principal minors of a square polynomial matrix.
pub fn principal_minor_sum(j: &[Vec<Poly>], k: usize, nv: usize) -> Poly {
    let n = j.len();
    (0..n).combinations(k).fold(Poly::zero(nv), |acc, idx| {
        let sub: Vec<Vec<Poly>> = idx.iter().map(|&a| idx.iter().map(|&b| j[a][b].clone()).collect()).collect();
        acc.add(&det(&sub))
    })
}

pub fn build_b_bundle(jac: &TransformedJacobian, rays: &ExtremeRaySet) -> BPolynomialBundle {
    let u = jac.universe;
    let nv = u.len();
    let b = principal_minor_sum(&jac.j, 2, nv);
    let lam = u.lambda_range();
    let theta: BTreeSet<usize> =
        b.terms().flat_map(|(m, _)| lam.clone().filter(move |&v| m.0[v] >= 2).map(|v| v - lam.start)).collect();
    let mut zero = vec![None; nv];
    for &k in &theta {
        zero[u.lambda_var(k)] = Some(q(0));
    }
    let b_tilde = b.substitute(&zero);
    let qsets: Vec<Vec<usize>> = (0..rays.m).map(|i| (0..rays.len()).filter(|&k| rays.rays[k][i] != 0).collect()).collect();
    let q_tilde = qsets.iter().map(|qi| qi.iter().copied().filter(|k| !theta.contains(k)).collect()).collect();
    BPolynomialBundle { universe: u, b, theta, b_tilde, q: qsets, q_tilde, rays: rays.clone() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignVerdict {
    PositiveCertified,
    ZeroPolynomial,
    Inconclusive,
}

/// Which polynomial and index sets the pair search uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignVariant {
    /// B̃ with q̃.
    #[default]
    Reduced,
    /// B with q.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignReport {
    pub verdict: SignVerdict,
    pub variant: SignVariant,
    /// Reaction indices (0-based).
    pub witness_pair: Option<(usize, usize)>,
    /// Ray index pairs (k, ℓ), k ≤ ℓ, of the witnessing set.
    pub witness_set: Vec<(usize, usize)>,
    pub t: usize,
    pub b_terms: usize,
    pub b_tilde_terms: usize,
    pub theta: Vec<usize>,
    pub rays: Vec<Vec<i64>>,
    /// Set when reading λ_k·λ_k as "some term has λ_k" would have certified.
    pub diagonal_reading_differs: bool,
}

/// Support information needed by the pair search.
pub trait PairOracle {
    fn t(&self) -> usize;
    /// Some term of the searched polynomial is divisible by λ_k λ_ℓ.
    fn divisible(&self, k: usize, l: usize) -> bool;
    /// Some term of the searched polynomial has positive degree in λ_k.
    fn touches(&self, k: usize) -> bool;
}

struct PolyOracle<'a> {
    poly: &'a Poly,
    base: usize,
    t: usize,
}

impl PairOracle for PolyOracle<'_> {
    fn t(&self) -> usize {
        self.t
    }
    fn divisible(&self, k: usize, l: usize) -> bool {
        let (a, b) = (self.base + k, self.base + l);
        self.poly.terms().any(|(m, _)| if a == b { m.0[a] >= 2 } else { m.0[a] >= 1 && m.0[b] >= 1 })
    }
    fn touches(&self, k: usize) -> bool {
        self.poly.terms().any(|(m, _)| m.0[self.base + k] >= 1)
    }
}

/// Search pairs (i, j), i ≤ j, for one whose λ-product set is covered.
pub fn pair_search(oracle: &dyn PairOracle, sets: &[Vec<usize>]) -> (Option<(usize, usize)>, Vec<(usize, usize)>, bool) {
    let m = sets.len();
    let mut permissive = false;
    for i in 0..m {
        for j in i..m {
            let prods: BTreeSet<(usize, usize)> =
                sets[i].iter().flat_map(|&k| sets[j].iter().map(move |&l| (k.min(l), k.max(l)))).collect();
            let ok = prods.iter().all(|&(k, l)| oracle.divisible(k, l));
            if ok {
                return (Some((i, j)), prods.into_iter().collect(), false);
            }
            if !permissive {
                permissive = prods.iter().all(|&(k, l)| if k == l { oracle.touches(k) } else { oracle.divisible(k, l) });
            }
        }
    }
    (None, vec![], permissive)
}

pub fn check_sign_criterion(bundle: &BPolynomialBundle) -> SignReport {
    check_sign_criterion_with(bundle, SignVariant::Reduced)
}

pub fn check_sign_criterion_with(bundle: &BPolynomialBundle, variant: SignVariant) -> SignReport {
    let t = bundle.rays.len();
    let mut report = SignReport {
        verdict: SignVerdict::Inconclusive,
        variant,
        witness_pair: None,
        witness_set: vec![],
        t,
        b_terms: bundle.b.num_terms(),
        b_tilde_terms: bundle.b_tilde.num_terms(),
        theta: bundle.theta.iter().copied().collect(),
        rays: bundle.rays.rays.clone(),
        diagonal_reading_differs: false,
    };
    if bundle.b.is_zero() {
        report.verdict = SignVerdict::ZeroPolynomial;
        return report;
    }
    let (poly, sets) = match variant {
        SignVariant::Reduced => (&bundle.b_tilde, &bundle.q_tilde),
        SignVariant::Full => (&bundle.b, &bundle.q),
    };
    let oracle = PolyOracle { poly, base: bundle.universe.lambda_range().start, t };
    let (pair, set, permissive) = pair_search(&oracle, sets);
    if let Some(p) = pair {
        report.verdict = SignVerdict::PositiveCertified;
        report.witness_pair = Some(p);
        report.witness_set = set;
    } else {
        report.diagonal_reading_differs = permissive;
    }
    report
}

/// Coefficient support of B computed from the integer matrices A_k.
///
/// B = Σ_{a<b} p_a p_b Σ_{k≤ℓ} c_{ab}(k,ℓ) λ_k λ_ℓ, so every term is indexed by
/// a minor {a,b} and a ray pair.
#[derive(Debug, Clone)]
pub struct PairTable {
    pub t: usize,
    pub s: usize,
    /// nonzero[k][ℓ] = number of minors with c_{ab}(k,ℓ) ≠ 0 (symmetric).
    pub nonzero: Vec<Vec<u16>>,
}

impl PairTable {
    pub fn from_matrices(a: &[Vec<Vec<i64>>], s: usize) -> Self {
        let t = a.len();
        let mut nonzero = vec![vec![0u16; t]; t];
        for k in 0..t {
            for l in k..t {
                let mut count = 0;
                for (x, y) in (0..s).tuple_combinations() {
                    if minor_coefficient(&a[k], &a[l], x, y, k == l) != 0 {
                        count += 1;
                    }
                }
                nonzero[k][l] = count;
                nonzero[l][k] = count;
            }
        }
        PairTable { t, s, nonzero }
    }

    pub fn new(sd: &StoichiometricData, rays: &ExtremeRaySet) -> Self {
        Self::from_matrices(&ray_matrices(sd, rays), sd.s)
    }

    pub fn theta_within(&self, rays: &[usize]) -> BTreeSet<usize> {
        rays.iter().copied().filter(|&k| self.nonzero[k][k] > 0).collect()
    }

    pub fn b_term_count(&self, rays: &[usize]) -> usize {
        rays.iter().enumerate().flat_map(|(i, &k)| rays[i..].iter().map(move |&l| self.nonzero[k][l] as usize)).sum()
    }
}

fn minor_coefficient(ak: &[Vec<i64>], al: &[Vec<i64>], a: usize, b: usize, same: bool) -> i64 {
    if same {
        ak[a][a] * ak[b][b] - ak[a][b] * ak[b][a]
    } else {
        ak[a][a] * al[b][b] + al[a][a] * ak[b][b] - ak[a][b] * al[b][a] - al[a][b] * ak[b][a]
    }
}

struct TableOracle<'a> {
    table: &'a PairTable,
    excluded: &'a BTreeSet<usize>,
}

impl PairOracle for TableOracle<'_> {
    fn t(&self) -> usize {
        self.table.t
    }
    fn divisible(&self, k: usize, l: usize) -> bool {
        k != l && !self.excluded.contains(&k) && !self.excluded.contains(&l) && self.table.nonzero[k][l] > 0
    }
    fn touches(&self, k: usize) -> bool {
        !self.excluded.contains(&k) && (0..self.table.t).any(|l| l != k && self.divisible(k, l))
    }
}

/// Pair criterion on the sub-cone spanned by `active` rays (those supported inside a subnetwork).
///
/// `reaction_rays[i]` lists the active rays through reaction i.
pub fn structured_verdict(table: &PairTable, active: &[usize], reaction_rays: &[Vec<usize>]) -> SignVerdict {
    let zero = active.iter().enumerate().all(|(i, &k)| active[i..].iter().all(|&l| table.nonzero[k][l] == 0));
    if zero {
        return SignVerdict::ZeroPolynomial;
    }
    let theta = table.theta_within(active);
    let q_tilde: Vec<Vec<usize>> =
        reaction_rays.iter().map(|qi| qi.iter().copied().filter(|k| !theta.contains(k)).collect()).collect();
    let oracle = TableOracle { table, excluded: &theta };
    match pair_search(&oracle, &q_tilde).0 {
        Some(_) => SignVerdict::PositiveCertified,
        None => SignVerdict::Inconclusive,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Injectivity {
    Injective,
    Undetermined,
}

fn one_signed(p: SignProfile) -> bool {
    matches!(p, SignProfile::AllPositive | SignProfile::AllNegative)
}

pub fn injectivity_screen(ss: &SteadyStateSystem) -> Injectivity {
    if one_signed(det_jac_f(ss).sign_profile()) || one_signed(det_jac_x_minus_f(ss).sign_profile()) {
        Injectivity::Injective
    } else {
        Injectivity::Undetermined
    }
}

/// Signs of the terms of det Jac_f and det(E − Jac_f), via Cauchy–Binet.
///
/// Distinct (S, T) index pairs give distinct monomials κ_S x^{α_S − 1_T}, so the
/// term signs are the signs of det N[T,S]·det Y[T,S] (times (−1)^|T| for E − Jac_f).
pub fn structured_sign_profiles(sd: &StoichiometricData) -> (SignProfile, SignProfile) {
    let s = sd.s;
    let mut detf = Profile::default();
    let mut xmf = Profile::default();
    xmf.push(1);
    for k in 1..=s {
        for t in (0..s).combinations(k) {
            for sset in (0..sd.m).combinations(k) {
                let nm: Vec<Vec<i64>> = t.iter().map(|&i| sset.iter().map(|&j| sd.n[i][j]).collect()).collect();
                let dn = int_det(&nm);
                if dn == 0 {
                    continue;
                }
                let ym: Vec<Vec<i64>> = t.iter().map(|&i| sset.iter().map(|&j| sd.y[i][j]).collect()).collect();
                let c = dn * int_det(&ym);
                if c == 0 {
                    continue;
                }
                if k == s {
                    detf.push(c);
                }
                xmf.push(if k % 2 == 0 { c } else { -c });
            }
        }
    }
    (detf.profile(), xmf.profile())
}

#[derive(Default)]
struct Profile {
    pos: bool,
    neg: bool,
}

impl Profile {
    fn push(&mut self, c: i64) {
        if c > 0 {
            self.pos = true;
        } else if c < 0 {
            self.neg = true;
        }
    }
    fn profile(&self) -> SignProfile {
        match (self.pos, self.neg) {
            (false, false) => SignProfile::Zero,
            (true, false) => SignProfile::AllPositive,
            (false, true) => SignProfile::AllNegative,
            (true, true) => SignProfile::Mixed,
        }
    }
}

pub fn structured_injectivity(sd: &StoichiometricData) -> Injectivity {
    let (a, b) = structured_sign_profiles(sd);
    if one_signed(a) || one_signed(b) {
        Injectivity::Injective
    } else {
        Injectivity::Undetermined
    }
}

/// Enumeration filter: det Jac_f ≢ 0 at full rank, otherwise the sum of
/// rank-sized principal minors of J(p, λ) is not identically zero.
pub fn structurally_nondegenerate(net: &ReactionNetwork, modes: &[Vec<i64>]) -> bool {
    let sd = crate::network::stoichiometric_data(net);
    if sd.d() == 0 {
        return structured_sign_profiles(&sd).0 != SignProfile::Zero;
    }
    if modes.is_empty() {
        return false;
    }
    let rays = ExtremeRaySet { m: sd.m, rays: modes.to_vec() };
    let a = ray_matrices(&sd, &rays);
    match sd.rank {
        1 => a.iter().any(|ak| (0..sd.s).any(|i| ak[i][i] != 0)),
        2 => {
            let table = PairTable::from_matrices(&a, sd.s);
            let all: Vec<usize> = (0..rays.len()).collect();
            table.b_term_count(&all) > 0
        }
        r => {
            let Ok(j) = build_transformed_jacobian(&sd, &rays) else { return false };
            !principal_minor_sum(&j.j, r, j.universe.len()).is_zero()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientSigns {
    Consistent,
    Violation,
}

/// Coefficient-sign consistency of J: trace non-positive at r = 1, B non-negative at r = 2.
pub fn coefficient_signs(sd: &StoichiometricData, j: &TransformedJacobian) -> CoefficientSigns {
    let nv = j.universe.len();
    let ok = match sd.rank {
        1 => principal_minor_sum(&j.j, 1, nv).terms().all(|(_, c)| c.is_negative()),
        2 => principal_minor_sum(&j.j, 2, nv).terms().all(|(_, c)| c.is_positive()),
        _ => true,
    };
    if ok {
        CoefficientSigns::Consistent
    } else {
        CoefficientSigns::Violation
    }
}

/// Full pipeline: rays, J, B bundle and the pair criterion.
pub fn sign_report(sd: &StoichiometricData, variant: SignVariant) -> Result<SignReport, SignError> {
    let rays = crate::fluxcone::extreme_rays(sd);
    let j = build_transformed_jacobian(sd, &rays)?;
    let bundle = build_b_bundle(&j, &rays);
    Ok(check_sign_criterion_with(&bundle, variant))
}
