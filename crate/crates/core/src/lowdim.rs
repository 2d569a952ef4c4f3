//! Two-dimensional networks with two or three species.
//!
//! Two species: every reaction is one of twelve template reactions, and
//! eliminating x₁ leaves a quadratic in x₂ whose coefficients C₁, C₂, C₃ are
//! polynomials in the template rates.
//!
//! Three species: the single conservation law x₁ = a x₂ + b x₃ + c sorts
//! maximum networks into the classes G1, G2, G3, and the subnetwork sweep
//! decides the sign of det Jac_h for every two-dimensional subnetwork of a
//! catalog entry.

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fluxcone::{extreme_rays, strictly_positive_flux_exists};
use crate::linalg::{int_rank, q, Q};
use crate::network::{
    canonical_form, stoichiometric_data, zero_one_universe, Complex, Reaction, ReactionNetwork, StoichiometricData,
};
use crate::poly::Poly;
use crate::sign::{build_b_bundle, build_transformed_jacobian, check_sign_criterion, PairTable, SignVerdict};
use crate::univariate::{positive_roots, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LowDimError {
    #[error("unsupported shape: {0}")]
    Shape(String),
    #[error("expected {expected} rate constants, got {got}")]
    KappaLength { expected: usize, got: usize },
}

/// (reactant mask, product mask) of the twelve two-species template reactions, bit 0 = X1.
pub const TEMPLATE: [(u32, u32); 12] =
    [(0, 1), (0, 2), (0, 3), (1, 0), (1, 2), (1, 3), (2, 0), (2, 1), (2, 3), (3, 0), (3, 1), (3, 2)];

/// Network of the template reactions at the given 0-based slots, in that order.
pub fn template_network(slots: &[usize]) -> ReactionNetwork {
    let pairs: Vec<(u32, u32)> = slots.iter().map(|&i| TEMPLATE[i]).collect();
    ReactionNetwork::from_masks(2, &pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticReduction {
    /// C₁, C₂, C₃ over the twelve template rates.
    pub c: [Poly; 3],
    /// C̃ᵢ: rates of absent slots set to zero.
    pub reduced: [Poly; 3],
    /// Present slots, 0-based.
    pub k1: Vec<usize>,
    /// Template slot of each network reaction.
    pub slot_of: Vec<usize>,
    /// κ₄ + κ₅ + (κ₁₀ + κ₁₂)x₂ vanishes identically (impossible at rank two).
    pub denominator_degenerate: bool,
}

fn kv(i: usize) -> Poly {
    Poly::var(12, i - 1)
}

fn ksum(a: usize, b: usize) -> Poly {
    kv(a).add(&kv(b))
}

/// C₁, C₂, C₃ as polynomials in κ₁…κ₁₂.
pub fn template_coefficients() -> [Poly; 3] {
    let c1 = ksum(10, 11).mul(&ksum(8, 9)).add(&ksum(7, 8).mul(&ksum(10, 12)));
    let c2 = ksum(1, 3)
        .mul(&ksum(10, 11))
        .sub(&ksum(5, 6).mul(&ksum(8, 9)))
        .sub(&ksum(2, 3).mul(&ksum(10, 12)))
        .add(&ksum(7, 8).mul(&ksum(4, 5)));
    let c3 = ksum(5, 6).mul(&ksum(1, 3)).neg().sub(&ksum(2, 3).mul(&ksum(4, 5)));
    [c1, c2, c3]
}

fn zero_absent(p: &Poly, present: &[usize]) -> Poly {
    let a: Vec<Option<Q>> = (0..12).map(|i| if present.contains(&i) { None } else { Some(Q::zero()) }).collect();
    p.substitute(&a)
}

pub fn two_species_reduce(net: &ReactionNetwork) -> Result<QuadraticReduction, LowDimError> {
    if net.num_species() != 2 || !net.is_zero_one() {
        return Err(LowDimError::Shape("need a two-species zero-one network".into()));
    }
    if net.rank() != 2 {
        return Err(LowDimError::Shape(format!("rank {} instead of 2", net.rank())));
    }
    let slot_of: Vec<usize> = net
        .reactions
        .iter()
        .map(|r| TEMPLATE.iter().position(|&t| t == (r.reactant.mask(), r.product.mask())).expect("zero-one reaction"))
        .collect();
    let mut k1 = slot_of.clone();
    k1.sort_unstable();
    let c = template_coefficients();
    let reduced = [zero_absent(&c[0], &k1), zero_absent(&c[1], &k1), zero_absent(&c[2], &k1)];
    let denominator_degenerate = [3, 4, 9, 11].iter().all(|i| !k1.contains(i));
    Ok(QuadraticReduction { c, reduced, k1, slot_of, denominator_degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoSpeciesVerdict {
    NoPositive,
    OneNondegenerate,
    DegenerateContinuum,
}

/// Rates of the template slots for network-ordered κ.
pub fn template_kappa(red: &QuadraticReduction, kappa: &[Q]) -> Result<Vec<Q>, LowDimError> {
    if kappa.len() != red.slot_of.len() {
        return Err(LowDimError::KappaLength { expected: red.slot_of.len(), got: kappa.len() });
    }
    let mut full = vec![Q::zero(); 12];
    for (k, &slot) in kappa.iter().zip(&red.slot_of) {
        full[slot] = k.clone();
    }
    Ok(full)
}

/// Positive steady-state count from the quadratic at κ.
pub fn two_species_verdict(red: &QuadraticReduction, kappa: &[Q]) -> Result<TwoSpeciesVerdict, LowDimError> {
    let full = template_kappa(red, kappa)?;
    let at = |p: &Poly| p.evaluate_all(&full);
    let coeffs = [at(&red.reduced[2]), at(&red.reduced[1]), at(&red.reduced[0])];
    // x₁ = num/den with num = κ₁ + κ₃ + (κ₈ + κ₉)x₂; num ≡ 0 forces x₁ = 0.
    let num_zero = [0, 2, 7, 8].iter().all(|&i| full[i].is_zero());
    let quad = UniPoly::new(coeffs.to_vec());
    let den_zero = [3, 4, 9, 11].iter().all(|&i| full[i].is_zero());
    if num_zero || den_zero {
        // No X1-consuming or no X1-producing flux at this κ.
        return Ok(TwoSpeciesVerdict::NoPositive);
    }
    if quad.is_zero() {
        return Ok(TwoSpeciesVerdict::DegenerateContinuum);
    }
    let roots = positive_roots(&quad, &Q::new(1.into(), 1_000_000.into()));
    debug_assert!(roots.len() <= 1);
    Ok(if roots.is_empty() { TwoSpeciesVerdict::NoPositive } else { TwoSpeciesVerdict::OneNondegenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    G1,
    G2,
    G3,
    #[serde(rename = "not-maximum")]
    NotMaximum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximumClass {
    /// (a, b) as rational strings, after any relabeling.
    pub pair: (String, String),
    /// New position of each original species.
    pub permutation: Vec<usize>,
    pub relabeled: bool,
    pub class: PairClass,
    pub catalog_id: Option<String>,
}

/// (a, b, permutation) with x_{π⁻¹(0)} = a x_{π⁻¹(1)} + b x_{π⁻¹(2)} + c.
pub fn conservation_pair(sd: &StoichiometricData) -> Result<(Q, Q, Vec<usize>), LowDimError> {
    if sd.s != 3 || sd.rank != 2 {
        return Err(LowDimError::Shape("need three species at rank two".into()));
    }
    let w: Vec<Q> = sd.w.row(0).to_vec();
    // Prefer species 1 as the solved-for one; otherwise the first usable species.
    let order: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [2, 0, 1]];
    let [p, i, j] = *order.iter().find(|o| !w[o[0]].is_zero()).expect("nonzero conservation law");
    let mut a = -&w[i] / &w[p];
    let mut b = -&w[j] / &w[p];
    let mut old_of_new = vec![p, i, j];
    let two = q(2);
    let one = q(1);
    if a.abs() == two && b.abs() == one {
        // x_i = (1/a) x_p − (b/a) x_j
        let (na, nb) = (one.clone() / &a, -&b / &a);
        a = na;
        b = nb;
        old_of_new = vec![i, p, j];
    } else if a.abs() == one && b.abs() == two {
        let (na, nb) = (-&a / &b, one.clone() / &b);
        a = na;
        b = nb;
        old_of_new = vec![j, i, p];
    }
    let mut perm = vec![0; 3];
    for (new, &old) in old_of_new.iter().enumerate() {
        perm[old] = new;
    }
    Ok((a, b, perm))
}

pub fn classify_conservation_pair(sd: &StoichiometricData, net: &ReactionNetwork) -> Result<MaximumClass, LowDimError> {
    let (a, b, permutation) = conservation_pair(sd)?;
    let relabeled = permutation != vec![0, 1, 2];
    let half = Q::new(1.into(), 2.into());
    let (zero, one) = (Q::zero(), q(1));
    let class = if !is_maximum(net) {
        PairClass::NotMaximum
    } else if a == half && b == half {
        PairClass::G1
    } else if (a == one && b == zero) || (a == zero && b == one) || (a == zero && b == zero) {
        PairClass::G2
    } else {
        PairClass::G3
    };
    Ok(MaximumClass { pair: (a.to_string(), b.to_string()), permutation, relabeled, class, catalog_id: catalog_id(net) })
}

/// Catalog entry equal to the network, or else isomorphic to it (g35 and g36 are isomorphic).
pub fn catalog_id(net: &ReactionNetwork) -> Option<String> {
    let entries = || crate::catalog::FIXTURES.iter().filter(|f| f.family != crate::catalog::Family::Example);
    if let Some(f) = entries().find(|f| f.network() == *net) {
        return Some(f.id.to_string());
    }
    let canon = canonical_form(net);
    entries().find(|f| canonical_form(&f.network()) == canon).map(|f| f.id.to_string())
}

/// Add every zero-one reaction whose column lies in the span of the network's columns.
pub fn maximal_closure(net: &ReactionNetwork) -> ReactionNetwork {
    let s = net.num_species();
    let rows = net.stoich_rows();
    let r = int_rank(&rows);
    let mut out = net.clone();
    for (a, b) in zero_one_universe(s) {
        let rx = Reaction::new(Complex::from_mask(s, a), Complex::from_mask(s, b));
        if out.reactions.contains(&rx) {
            continue;
        }
        let col = rx.column();
        let mut ext = rows.clone();
        for (i, row) in ext.iter_mut().enumerate() {
            row.push(col[i]);
        }
        if int_rank(&ext) == r {
            out.reactions.push(rx);
        }
    }
    out
}

pub fn is_maximum(net: &ReactionNetwork) -> bool {
    maximal_closure(net).num_reactions() == net.num_reactions()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegeneracyKind {
    OnlyDegenerate,
    NondegeneratePossible,
    NoPositiveFlux,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyVerdict {
    pub kind: DegeneracyKind,
    /// Pair-criterion outcome when B ≢ 0.
    pub sign: Option<SignVerdict>,
}

impl DegeneracyVerdict {
    pub fn outcome(&self) -> SweepOutcome {
        match (self.kind, self.sign) {
            (DegeneracyKind::OnlyDegenerate, _) => SweepOutcome::OnlyDegenerate,
            (DegeneracyKind::NoPositiveFlux, _) => SweepOutcome::NoPositiveFlux,
            (_, Some(SignVerdict::PositiveCertified)) => SweepOutcome::PositiveCertified,
            _ => SweepOutcome::Inconclusive,
        }
    }
}

/// Symbolic route: rays, J(p, λ), B and the pair criterion.
pub fn degeneracy_verdict(net: &ReactionNetwork) -> Result<DegeneracyVerdict, LowDimError> {
    let sd = stoichiometric_data(net);
    if sd.rank != 2 {
        return Err(LowDimError::Shape(format!("rank {} instead of 2", sd.rank)));
    }
    let rays = extreme_rays(&sd);
    if !strictly_positive_flux_exists(&rays) {
        return Ok(DegeneracyVerdict { kind: DegeneracyKind::NoPositiveFlux, sign: None });
    }
    let j = build_transformed_jacobian(&sd, &rays).expect("rays exist");
    let bundle = build_b_bundle(&j, &rays);
    let report = check_sign_criterion(&bundle);
    if report.verdict == SignVerdict::ZeroPolynomial {
        return Ok(DegeneracyVerdict { kind: DegeneracyKind::OnlyDegenerate, sign: None });
    }
    Ok(DegeneracyVerdict { kind: DegeneracyKind::NondegeneratePossible, sign: Some(report.verdict) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepOutcome {
    OnlyDegenerate,
    NoPositiveFlux,
    PositiveCertified,
    Inconclusive,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub reactions: usize,
    pub rays: usize,
    pub subsets: u64,
    pub two_dimensional: u64,
    pub only_degenerate: u64,
    pub no_positive_flux: u64,
    pub positive_certified: u64,
    pub inconclusive: u64,
    /// Reaction masks of the first few inconclusive subnetworks.
    pub inconclusive_examples: Vec<u64>,
}

impl SweepSummary {
    fn add(&mut self, o: SweepOutcome, mask: u64) {
        self.two_dimensional += 1;
        match o {
            SweepOutcome::OnlyDegenerate => self.only_degenerate += 1,
            SweepOutcome::NoPositiveFlux => self.no_positive_flux += 1,
            SweepOutcome::PositiveCertified => self.positive_certified += 1,
            SweepOutcome::Inconclusive => {
                self.inconclusive += 1;
                if self.inconclusive_examples.len() < 8 {
                    self.inconclusive_examples.push(mask);
                }
            }
        }
    }

    fn merge(mut self, o: SweepSummary) -> SweepSummary {
        self.subsets += o.subsets;
        self.two_dimensional += o.two_dimensional;
        self.only_degenerate += o.only_degenerate;
        self.no_positive_flux += o.no_positive_flux;
        self.positive_certified += o.positive_certified;
        self.inconclusive += o.inconclusive;
        self.inconclusive_examples.extend(o.inconclusive_examples);
        self.inconclusive_examples.sort_unstable();
        self.inconclusive_examples.truncate(8);
        self
    }
}

const WORDS: usize = 4;

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Bits([u64; WORDS]);

impl Bits {
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|w| self.0[w] & o.0[w]))
    }
    fn and_not(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|w| self.0[w] & !o.0[w]))
    }
    fn is_empty(self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn subset_of(self, o: Bits) -> bool {
        self.and_not(o).is_empty()
    }
    fn ones(self) -> impl Iterator<Item = usize> {
        (0..WORDS).flat_map(move |w| {
            let mut x = self.0[w];
            std::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// Precomputed data of a parent network for sweeping its subnetworks.
pub struct SubnetworkSweeper {
    m: usize,
    t: usize,
    ray_support: Vec<u64>,
    /// nbr[k]: rays ℓ ≠ k with some nonzero coefficient at λ_k λ_ℓ.
    nbr: Vec<Bits>,
    /// Rays with a nonzero λ_k² coefficient.
    diag: Bits,
    /// Rays through each reaction.
    through: Vec<Bits>,
    /// Direction class of each column up to sign.
    direction: Vec<usize>,
}

impl SubnetworkSweeper {
    pub fn new(net: &ReactionNetwork) -> Result<Self, LowDimError> {
        let sd = stoichiometric_data(net);
        if sd.m > 63 {
            return Err(LowDimError::Shape("too many reactions for a subset sweep".into()));
        }
        let rays = extreme_rays(&sd);
        let t = rays.len();
        if t > WORDS * 64 {
            return Err(LowDimError::Shape(format!("{t} extreme rays exceed the bitset width")));
        }
        let table = PairTable::new(&sd, &rays);
        let mut nbr = vec![Bits::default(); t];
        let mut diag = Bits::default();
        for k in 0..t {
            if table.nonzero[k][k] > 0 {
                diag.set(k);
            }
            for l in 0..t {
                if l != k && table.nonzero[k][l] > 0 {
                    nbr[k].set(l);
                }
            }
        }
        let ray_support = rays.rays.iter().map(|r| support_mask(r)).collect();
        let mut through = vec![Bits::default(); sd.m];
        for (k, r) in rays.rays.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    through[j].set(k);
                }
            }
        }
        let cols: Vec<Vec<i64>> = net.reactions.iter().map(|r| r.column()).collect();
        let mut reps: Vec<Vec<i64>> = Vec::new();
        let direction = cols
            .iter()
            .map(|c| {
                let neg: Vec<i64> = c.iter().map(|v| -v).collect();
                match reps.iter().position(|r| r == c || *r == neg) {
                    Some(i) => i,
                    None => {
                        reps.push(c.clone());
                        reps.len() - 1
                    }
                }
            })
            .collect();
        Ok(SubnetworkSweeper { m: sd.m, t, ray_support, nbr, diag, through, direction })
    }

    pub fn num_rays(&self) -> usize {
        self.t
    }

    /// Columns span a plane. Assumes the parent has rank two.
    pub fn is_two_dimensional(&self, mask: u64) -> bool {
        let mut first = None;
        for j in 0..self.m {
            if mask >> j & 1 == 1 {
                match first {
                    None => first = Some(self.direction[j]),
                    Some(d) if d != self.direction[j] => return true,
                    _ => {}
                }
            }
        }
        false
    }

    /// Outcome for the subnetwork on the reactions in `mask`.
    pub fn outcome(&self, mask: u64) -> SweepOutcome {
        let mut active = Bits::default();
        let mut covered = 0u64;
        for (k, &sup) in self.ray_support.iter().enumerate() {
            if sup & !mask == 0 {
                active.set(k);
                covered |= sup;
            }
        }
        if covered != mask {
            return SweepOutcome::NoPositiveFlux;
        }
        let theta = self.diag.and(active);
        let zero = theta.is_empty() && active.ones().all(|k| self.nbr[k].and(active).is_empty());
        if zero {
            return SweepOutcome::OnlyDegenerate;
        }
        let reactions: Vec<usize> = (0..self.m).filter(|&j| mask >> j & 1 == 1).collect();
        let qt: Vec<Bits> = reactions.iter().map(|&j| self.through[j].and(active).and_not(theta)).collect();
        for (a, qi) in qt.iter().enumerate() {
            let mut common = Bits([u64::MAX; WORDS]);
            for k in qi.ones() {
                common = common.and(self.nbr[k]);
            }
            if qt[a..].iter().any(|qj| qj.subset_of(common)) {
                return SweepOutcome::PositiveCertified;
            }
        }
        SweepOutcome::Inconclusive
    }

    /// Every two-dimensional subnetwork.
    pub fn sweep(&self) -> SweepSummary {
        let total: u64 = 1 << self.m;
        let chunk: u64 = 1 << 12.min(self.m);
        (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let mut s = SweepSummary::default();
                for mask in c * chunk..((c + 1) * chunk).min(total) {
                    s.subsets += 1;
                    if self.is_two_dimensional(mask) {
                        s.add(self.outcome(mask), mask);
                    }
                }
                s
            })
            .reduce(SweepSummary::default, SweepSummary::merge)
            .with_shape(self.m, self.t)
    }
}

impl SweepSummary {
    fn with_shape(mut self, m: usize, t: usize) -> Self {
        self.reactions = m;
        self.rays = t;
        self
    }
}

fn support_mask(r: &[i64]) -> u64 {
    r.iter().enumerate().filter(|(_, &v)| v != 0).fold(0, |m, (j, _)| m | 1 << j)
}

pub fn subnetwork_of_mask(net: &ReactionNetwork, mask: u64) -> ReactionNetwork {
    let idx: Vec<usize> = (0..net.num_reactions()).filter(|&j| mask >> j & 1 == 1).collect();
    net.subnetwork(&idx)
}

/// Sweep outcome of a single subnetwork via the symbolic route, for cross-checks.
pub fn symbolic_outcome(net: &ReactionNetwork) -> SweepOutcome {
    match degeneracy_verdict(net) {
        Ok(v) => v.outcome(),
        Err(_) => SweepOutcome::Inconclusive,
    }
}
