//! Decision procedure for rank-one zero-one networks.
//!
//! Every row of 𝒩 is a multiple a_i ∈ {−1, 0, 1} of a generating row, which
//! splits the remaining species into J1 (a = 1), J2 (a = −1) and J3 (a = 0).
//! Whether a class carries a steady state is then a set of strict linear
//! inequalities on the total constants.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{q, Q};
use crate::network::{stoichiometric_data, ReactionNetwork, StoichiometricData};
use crate::solver::{solve_positive_steady_states, SolveError, Stability, SteadyStateSolution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OneDimError {
    #[error("stoichiometric matrix has rank {0}, expected 1")]
    NotRankOne(usize),
    #[error("network is not zero-one")]
    NotZeroOne,
    #[error("expected {expected} total constants, got {got}")]
    CLength { expected: usize, got: usize },
    #[error("witness construction needs c inside the admissible region")]
    OutsideRegion,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("numeric check disagrees with the classification: {0}")]
    Inconsistent(String),
}

/// Species indices are 0-based. `c_index[i]` is the total constant attached to species i
/// (the conservation row whose leading species is i), `None` for the pivot species.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneDimStructure {
    pub pivot_row: usize,
    pub a: Vec<i64>,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    pub j3: Vec<usize>,
    pub c_index: Vec<Option<usize>>,
    pub all_rows_change_sign: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    NoPositiveClass,
    OneStableSteadyState,
    NoSteadyStates,
}

/// Σ coefficients[k]·c_k > 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearInequality {
    pub coefficients: Vec<i64>,
    pub text: String,
}

pub fn analyze_one_dim(sd: &StoichiometricData) -> Result<OneDimStructure, OneDimError> {
    if sd.rank != 1 {
        return Err(OneDimError::NotRankOne(sd.rank));
    }
    if !sd.is_zero_one() {
        return Err(OneDimError::NotZeroOne);
    }
    // The one non-leading column of W is the last species whose row is nonzero.
    let pivot = sd.free_species()[0];
    let mut a = vec![0i64; sd.s];
    let mut c_index = vec![None; sd.s];
    a[pivot] = 1;
    for (k, &i) in sd.leading.iter().enumerate() {
        let w = -sd.w[(k, pivot)].clone();
        a[i] = if w.is_zero() { 0 } else if w.is_positive() { 1 } else { -1 };
        c_index[i] = Some(k);
    }
    for i in 0..sd.s {
        debug_assert!((0..sd.m).all(|j| sd.n[i][j] == a[i] * sd.n[pivot][j]));
    }
    let others = || (0..sd.s).filter(move |&i| i != pivot);
    let j1 = others().filter(|&i| a[i] == 1).collect();
    let j2 = others().filter(|&i| a[i] == -1).collect();
    let j3 = others().filter(|&i| a[i] == 0).collect();
    let row = &sd.n[pivot];
    let all_rows_change_sign = row.iter().any(|&v| v > 0) && row.iter().any(|&v| v < 0);
    Ok(OneDimStructure { pivot_row: pivot, a, j1, j2, j3, c_index, all_rows_change_sign })
}

fn c_of<'a>(st: &OneDimStructure, c: &'a [Q], i: usize) -> &'a Q {
    &c[st.c_index[i].expect("non-pivot species")]
}

fn check_len(st: &OneDimStructure, c: &[Q]) -> Result<(), OneDimError> {
    let d = st.a.len() - 1;
    if c.len() != d {
        return Err(OneDimError::CLength { expected: d, got: c.len() });
    }
    Ok(())
}

/// The strict inequalities cutting out the classes that hold a positive point.
pub fn region(st: &OneDimStructure) -> Vec<LinearInequality> {
    let d = st.a.len() - 1;
    let name = |i: usize| format!("c{}", st.c_index[i].unwrap() + 1);
    let mut out = Vec::new();
    for &k in st.j2.iter().chain(&st.j3) {
        let mut coefficients = vec![0; d];
        coefficients[st.c_index[k].unwrap()] = 1;
        out.push(LinearInequality { coefficients, text: format!("{} > 0", name(k)) });
    }
    for &i in &st.j1 {
        for &j in &st.j2 {
            let mut coefficients = vec![0; d];
            coefficients[st.c_index[i].unwrap()] += 1;
            coefficients[st.c_index[j].unwrap()] += 1;
            out.push(LinearInequality { coefficients, text: format!("{} + {} > 0", name(i), name(j)) });
        }
    }
    out
}

pub fn in_region(st: &OneDimStructure, c: &[Q]) -> bool {
    region(st).iter().all(|ineq| {
        let v: Q = ineq.coefficients.iter().zip(c).filter(|(&k, _)| k != 0).map(|(&k, ci)| q(k) * ci).sum();
        v.is_positive()
    })
}

pub fn classify_total_constant(st: &OneDimStructure, c: &[Q]) -> Result<Classification, OneDimError> {
    check_len(st, c)?;
    if !st.all_rows_change_sign {
        return Ok(Classification::NoSteadyStates);
    }
    Ok(if in_region(st, c) { Classification::OneStableSteadyState } else { Classification::NoPositiveClass })
}

/// An explicit rational point of 𝒫_c⁺.
pub fn witness_point(st: &OneDimStructure, c: &[Q]) -> Result<Vec<Q>, OneDimError> {
    check_len(st, c)?;
    if !in_region(st, c) {
        return Err(OneDimError::OutsideRegion);
    }
    let min_over = |set: &[usize]| set.iter().map(|&i| c_of(st, c, i).clone()).min();
    let m1 = min_over(&st.j1);
    let m2 = min_over(&st.j2);
    let half = |v: Q| v / q(2);
    let xs = match (m1, m2) {
        (Some(m1), Some(m2)) if m1.is_negative() => half(m2 - m1),
        (_, Some(m2)) => half(m2),
        (Some(m1), None) if m1.is_negative() => q(1) - m1,
        _ => q(1),
    };
    let x = (0..st.a.len())
        .map(|i| if i == st.pivot_row { xs.clone() } else { q(st.a[i]) * &xs + c_of(st, c, i) })
        .collect();
    Ok(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneDimReport {
    pub structure: OneDimStructure,
    pub classification: Classification,
    pub region: Vec<LinearInequality>,
    pub steady_state: Option<SteadyStateSolution>,
}

impl OneDimReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "structure": self.structure,
            "classification": self.classification,
            "region": self.region,
            "steady_state": self.steady_state.as_ref().map(|s| s.to_json()),
        })
    }
}

/// Classification plus the numeric steady state, cross-checked against each other.
pub fn one_dim_full_verdict(net: &ReactionNetwork, kappa: &[Q], c: &[Q]) -> Result<OneDimReport, OneDimError> {
    let sd = stoichiometric_data(net);
    let structure = analyze_one_dim(&sd)?;
    let classification = classify_total_constant(&structure, c)?;
    let sols = solve_positive_steady_states(net, kappa, c)?;
    let expected = usize::from(classification == Classification::OneStableSteadyState);
    if sols.len() != expected {
        return Err(OneDimError::Inconsistent(format!("{} steady states, expected {expected}", sols.len())));
    }
    if let Some(s) = sols.first() {
        if s.det_jac_h_sign != -1 || s.stability != Stability::Stable {
            return Err(OneDimError::Inconsistent(format!(
                "det Jac_h sign {} and stability {:?}",
                s.det_jac_h_sign, s.stability
            )));
        }
    }
    Ok(OneDimReport { region: region(&structure), structure, classification, steady_state: sols.into_iter().next() })
}
