//! Reaction networks, their text format, stoichiometric data and enumeration.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{int_rank, Matrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate reaction at line {line}: {reaction}")]
    Duplicate { line: usize, reaction: String },
    #[error("reactant equals product at line {line}")]
    TrivialReaction { line: usize },
    #[error("coefficient {coeff} of {species} at line {line} is not zero-one")]
    NonZeroOne { line: usize, species: String, coeff: u32 },
    #[error("network has no reactions")]
    Empty,
    #[error("enumeration bounds infeasible: {0}")]
    Bounds(String),
    #[error("network is not zero-one")]
    NotZeroOne,
}

/// Stoichiometric coefficients of one complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Complex(pub Vec<u32>);

impl Complex {
    pub fn zero(s: usize) -> Self {
        Complex(vec![0; s])
    }

    pub fn from_mask(s: usize, mask: u32) -> Self {
        Complex((0..s).map(|i| (mask >> i) & 1).collect())
    }

    pub fn is_zero_one(&self) -> bool {
        self.0.iter().all(|&c| c <= 1)
    }

    pub fn mask(&self) -> u32 {
        self.0.iter().enumerate().fold(0, |m, (i, &c)| if c > 0 { m | (1 << i) } else { m })
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        let mut v = vec![0; self.0.len()];
        for (i, &c) in self.0.iter().enumerate() {
            v[perm[i]] = c;
        }
        Complex(v)
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| if c == 1 { names[i].clone() } else { format!("{}{}", c, names[i]) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Reaction {
    pub reactant: Complex,
    pub product: Complex,
}

impl Reaction {
    pub fn new(reactant: Complex, product: Complex) -> Self {
        Reaction { reactant, product }
    }

    pub fn column(&self) -> Vec<i64> {
        self.reactant.0.iter().zip(&self.product.0).map(|(&a, &b)| b as i64 - a as i64).collect()
    }

    fn key(&self) -> (Vec<u32>, Vec<u32>) {
        (self.reactant.0.clone(), self.product.0.clone())
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        Reaction { reactant: self.reactant.permuted(perm), product: self.product.permuted(perm) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionNetwork {
    pub species: Vec<String>,
    pub reactions: Vec<Reaction>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept coefficients larger than one.
    pub allow_non_zero_one: bool,
}

impl ReactionNetwork {
    pub fn new(species: Vec<String>, reactions: Vec<Reaction>) -> Self {
        ReactionNetwork { species, reactions }
    }

    /// Network on species X1..Xs from (reactant mask, product mask) pairs.
    pub fn from_masks(s: usize, pairs: &[(u32, u32)]) -> Self {
        let reactions = pairs
            .iter()
            .map(|&(a, b)| Reaction::new(Complex::from_mask(s, a), Complex::from_mask(s, b)))
            .collect();
        ReactionNetwork { species: default_names(s), reactions }
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn is_zero_one(&self) -> bool {
        self.reactions.iter().all(|r| r.reactant.is_zero_one() && r.product.is_zero_one())
    }

    pub fn subnetwork(&self, indices: &[usize]) -> Self {
        ReactionNetwork {
            species: self.species.clone(),
            reactions: indices.iter().map(|&j| self.reactions[j].clone()).collect(),
        }
    }

    pub fn reaction_text(&self, j: usize) -> String {
        let r = &self.reactions[j];
        format!("{} -> {}", r.reactant.render(&self.species), r.product.render(&self.species))
    }

    /// Reactions on one line, separated by "; ".
    pub fn reactions_line(&self) -> String {
        (0..self.num_reactions()).map(|j| self.reaction_text(j)).collect::<Vec<_>>().join("; ")
    }

    /// Stoichiometric columns as rows of N (s×m).
    pub fn stoich_rows(&self) -> Vec<Vec<i64>> {
        let s = self.num_species();
        let cols: Vec<Vec<i64>> = self.reactions.iter().map(|r| r.column()).collect();
        (0..s).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        int_rank(&self.stoich_rows())
    }
}

impl fmt::Display for ReactionNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "species: {}", self.species.join(" "))?;
        for j in 0..self.reactions.len() {
            writeln!(f, "{}", self.reaction_text(j))?;
        }
        Ok(())
    }
}

pub fn default_names(s: usize) -> Vec<String> {
    (1..=s).map(|i| format!("X{i}")).collect()
}

fn is_identifier(t: &str) -> bool {
    let mut chars = t.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

struct RawReaction {
    line: usize,
    reactant: Vec<(String, u32)>,
    product: Vec<(String, u32)>,
}

fn parse_complex(text: &str, line: usize, col0: usize) -> Result<Vec<(String, u32)>, NetworkError> {
    let trimmed = text.trim();
    if trimmed == "0" || trimmed == "∅" {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for term in text.split('+') {
        let col = col0 + offset + (term.len() - term.trim_start().len()) + 1;
        offset += term.len() + 1;
        let t = term.trim();
        if t.is_empty() {
            return Err(NetworkError::Syntax { line, col, msg: "empty term in complex".into() });
        }
        let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
        let rest = t[digits.len()..].trim();
        let coeff = if digits.is_empty() {
            1
        } else {
            digits.parse::<u32>().map_err(|_| NetworkError::Syntax { line, col, msg: "bad coefficient".into() })?
        };
        if !is_identifier(rest) {
            return Err(NetworkError::Syntax { line, col, msg: format!("bad species name '{t}'") });
        }
        if coeff > 0 {
            out.push((rest.to_string(), coeff));
        }
    }
    Ok(out)
}

/// Parse the line-oriented network text format.
pub fn parse_network(text: &str) -> Result<ReactionNetwork, NetworkError> {
    parse_network_with(text, ParseOptions::default())
}

pub fn parse_network_with(text: &str, opts: ParseOptions) -> Result<ReactionNetwork, NetworkError> {
    let mut declared: Option<Vec<String>> = None;
    let mut raws = Vec::new();
    for (ln, raw_line) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        if let Some(rest) = content.trim_start().strip_prefix("species:") {
            let names: Vec<String> = rest.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(String::from).collect();
            if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
                return Err(NetworkError::Syntax { line, col: 1, msg: format!("bad species name '{bad}'") });
            }
            declared = Some(names);
            continue;
        }
        let mut col0 = 0;
        for stmt in content.split(';') {
            let here = col0;
            col0 += stmt.len() + 1;
            if stmt.trim().is_empty() {
                continue;
            }
            let (lhs, rhs, reversible, arrow_at) = if let Some(p) = stmt.find("<->") {
                (&stmt[..p], &stmt[p + 3..], true, p)
            } else if let Some(p) = stmt.find("->") {
                (&stmt[..p], &stmt[p + 2..], false, p)
            } else {
                return Err(NetworkError::Syntax { line, col: here + 1, msg: "missing arrow".into() });
            };
            if rhs.contains("->") {
                return Err(NetworkError::Syntax { line, col: here + arrow_at + 1, msg: "more than one arrow".into() });
            }
            let reactant = parse_complex(lhs, line, here)?;
            let product = parse_complex(rhs, line, here + arrow_at + if reversible { 3 } else { 2 })?;
            raws.push(RawReaction { line, reactant: reactant.clone(), product: product.clone() });
            if reversible {
                raws.push(RawReaction { line, reactant: product, product: reactant });
            }
        }
    }
    if raws.is_empty() {
        return Err(NetworkError::Empty);
    }
    let species = match declared {
        Some(names) => names,
        None => infer_species(&raws),
    };
    let index: HashMap<&str, usize> = species.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let s = species.len();
    let mut reactions: Vec<Reaction> = Vec::new();
    for r in &raws {
        let build = |terms: &[(String, u32)]| -> Result<Complex, NetworkError> {
            let mut c = Complex::zero(s);
            for (name, k) in terms {
                let i = *index.get(name.as_str()).ok_or_else(|| NetworkError::Syntax {
                    line: r.line,
                    col: 1,
                    msg: format!("undeclared species '{name}'"),
                })?;
                c.0[i] += k;
            }
            if !opts.allow_non_zero_one {
                if let Some((i, &k)) = c.0.iter().enumerate().find(|(_, &k)| k > 1) {
                    return Err(NetworkError::NonZeroOne { line: r.line, species: species[i].clone(), coeff: k });
                }
            }
            Ok(c)
        };
        let reaction = Reaction::new(build(&r.reactant)?, build(&r.product)?);
        if reaction.reactant == reaction.product {
            return Err(NetworkError::TrivialReaction { line: r.line });
        }
        if reactions.contains(&reaction) {
            let tmp = ReactionNetwork { species: species.clone(), reactions: vec![reaction] };
            return Err(NetworkError::Duplicate { line: r.line, reaction: tmp.reaction_text(0) });
        }
        reactions.push(reaction);
    }
    Ok(ReactionNetwork { species, reactions })
}

/// Species in order of appearance, except that names X1, X2, ... are laid out by index.
fn infer_species(raws: &[RawReaction]) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for r in raws {
        for (n, _) in r.reactant.iter().chain(&r.product) {
            if !seen.contains(n) {
                seen.push(n.clone());
            }
        }
    }
    let numbered: Option<Vec<usize>> = seen
        .iter()
        .map(|n| n.strip_prefix('X').and_then(|d| d.parse::<usize>().ok()).filter(|&k| k >= 1))
        .collect();
    match numbered {
        Some(ks) if !ks.is_empty() => default_names(*ks.iter().max().unwrap()),
        _ => seen,
    }
}

/// Matrices N, Y and the conservation-law data of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoichiometricData {
    pub s: usize,
    pub m: usize,
    /// s×m, product minus reactant.
    pub n: Vec<Vec<i64>>,
    /// s×m, reactant coefficients.
    pub y: Vec<Vec<i64>>,
    pub rank: usize,
    /// d×s RREF basis of the left kernel of N.
    pub w: Matrix,
    /// First nonzero coordinate of each row of W.
    pub leading: Vec<usize>,
}

impl StoichiometricData {
    pub fn d(&self) -> usize {
        self.s - self.rank
    }

    pub fn n_matrix(&self) -> Matrix {
        Matrix::from_i64(self.s, self.m, |i, j| self.n[i][j])
    }

    pub fn y_matrix(&self) -> Matrix {
        Matrix::from_i64(self.s, self.m, |i, j| self.y[i][j])
    }

    /// Indices of the species that keep their steady-state equation.
    pub fn free_species(&self) -> Vec<usize> {
        (0..self.s).filter(|i| !self.leading.contains(i)).collect()
    }

    pub fn is_zero_one(&self) -> bool {
        self.y.iter().flatten().all(|&v| v <= 1) && self.n.iter().flatten().all(|&v| v.abs() <= 1)
    }

    /// c = W x.
    pub fn total_constants(&self, x: &[Q]) -> Vec<Q> {
        self.w.mul_vec(x)
    }
}

pub fn stoichiometric_data(net: &ReactionNetwork) -> StoichiometricData {
    let s = net.num_species();
    let m = net.num_reactions();
    let n = net.stoich_rows();
    let y: Vec<Vec<i64>> = (0..s).map(|i| net.reactions.iter().map(|r| r.reactant.0[i] as i64).collect()).collect();
    let nm = Matrix::from_i64(s, m, |i, j| n[i][j]);
    let rank = nm.rank();
    let w = nm.left_kernel_rref();
    let leading = (0..w.rows)
        .map(|k| (0..s).find(|&j| !w[(k, j)].is_zero()).expect("nonzero RREF row"))
        .collect();
    StoichiometricData { s, m, n, y, rank, w, leading }
}

/// All zero-one reactions on `s` species, ordered by (reactant mask, product mask).
pub fn zero_one_universe(s: usize) -> Vec<(u32, u32)> {
    let k = 1u32 << s;
    (0..k).flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

/// Filters applied while enumerating.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterSet {
    pub rank: Option<usize>,
    pub positive_flux: bool,
    /// B ≢ 0 for rank-deficient networks, det Jac_f ≢ 0 at full rank.
    pub nondegenerate: bool,
    pub canonical: bool,
}

impl FilterSet {
    pub fn accepts(&self, net: &ReactionNetwork) -> bool {
        let rows = net.stoich_rows();
        if let Some(r) = self.rank {
            if int_rank(&rows) != r {
                return false;
            }
        }
        if self.canonical && !is_canonical_representative(net) {
            return false;
        }
        if self.positive_flux || self.nondegenerate {
            let modes = crate::fluxcone::elementary_modes(&rows);
            if self.positive_flux && !crate::fluxcone::modes_cover_all(&modes, net.num_reactions()) {
                return false;
            }
            if self.nondegenerate && !crate::sign::structurally_nondegenerate(net, &modes) {
                return false;
            }
        }
        true
    }
}

/// Every m-subset of the zero-one universe on `s` species passing `filters`, in lexicographic order.
pub fn enumerate_networks(
    s: usize,
    m: usize,
    filters: &FilterSet,
) -> Result<impl Iterator<Item = ReactionNetwork> + '_, NetworkError> {
    if s == 0 || s > 4 {
        return Err(NetworkError::Bounds(format!("species count {s} outside 1..=4")));
    }
    let universe = zero_one_universe(s);
    if m == 0 || m > universe.len() {
        return Err(NetworkError::Bounds(format!("{m} reactions requested, universe has {}", universe.len())));
    }
    let checker = filters.canonical.then(|| MaskCanon::new(s));
    let rest = FilterSet { canonical: false, ..filters.clone() };
    Ok(universe
        .clone()
        .into_iter()
        .combinations(m)
        .filter(move |pairs| checker.as_ref().is_none_or(|c| c.is_canonical(pairs)))
        .map(move |pairs| ReactionNetwork::from_masks(s, &pairs))
        .filter(move |net| rest.accepts(net)))
}

/// Species relabelings acting on zero-one reaction masks.
///
/// Keys put species 0 in the most significant bit, so integer order on keys is
/// the lexicographic order on coefficient vectors used by [`canonical_form`].
#[derive(Debug, Clone)]
pub struct MaskCanon {
    s: usize,
    /// tables[p][mask] = key of the mask after permutation p.
    tables: Vec<Vec<u32>>,
}

impl MaskCanon {
    pub fn new(s: usize) -> Self {
        let tables = permutations(s)
            .into_iter()
            .map(|perm| {
                (0..1u32 << s)
                    .map(|mask| {
                        let moved = perm.iter().enumerate().fold(0u32, |acc, (i, &p)| acc | ((mask >> i & 1) << p));
                        (0..s).fold(0u32, |k, i| (k << 1) | (moved >> i & 1))
                    })
                    .collect()
            })
            .collect();
        MaskCanon { s, tables }
    }

    fn keys(&self, table: &[u32], pairs: &[(u32, u32)], out: &mut Vec<u32>) {
        out.clear();
        out.extend(pairs.iter().map(|&(a, b)| table[a as usize] << self.s | table[b as usize]));
        out.sort_unstable();
    }

    pub fn is_canonical(&self, pairs: &[(u32, u32)]) -> bool {
        let (mut own, mut other) = (Vec::new(), Vec::new());
        self.keys(&self.tables[0], pairs, &mut own);
        self.tables[1..].iter().all(|t| {
            self.keys(t, pairs, &mut other);
            other >= own
        })
    }

    /// Number of distinct networks obtained by relabeling species.
    pub fn orbit_size(&self, pairs: &[(u32, u32)]) -> usize {
        let mut seen: Vec<Vec<u32>> = self
            .tables
            .iter()
            .map(|t| {
                let mut k = Vec::new();
                self.keys(t, pairs, &mut k);
                k
            })
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// (reactant mask, product mask) pairs of a zero-one network.
pub fn reaction_masks(net: &ReactionNetwork) -> Vec<(u32, u32)> {
    net.reactions.iter().map(|r| (r.reactant.mask(), r.product.mask())).collect()
}

fn permutations(s: usize) -> Vec<Vec<usize>> {
    (0..s).permutations(s).collect()
}

fn sorted_keys(net: &ReactionNetwork, perm: &[usize]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut keys: Vec<_> = net.reactions.iter().map(|r| r.permuted(perm).key()).collect();
    keys.sort();
    keys
}

/// Lexicographically least relabeling over all species permutations, reactions sorted.
pub fn canonical_form(net: &ReactionNetwork) -> ReactionNetwork {
    let s = net.num_species();
    let best = permutations(s)
        .into_iter()
        .map(|p| sorted_keys(net, &p))
        .min()
        .unwrap_or_default();
    ReactionNetwork {
        species: default_names(s),
        reactions: best.into_iter().map(|(a, b)| Reaction::new(Complex(a), Complex(b))).collect(),
    }
}

/// True when the network's sorted reaction list is already its canonical one.
pub fn is_canonical_representative(net: &ReactionNetwork) -> bool {
    let identity: Vec<usize> = (0..net.num_species()).collect();
    let own = sorted_keys(net, &identity);
    permutations(net.num_species()).into_iter().all(|p| sorted_keys(net, &p) >= own)
}

/// Apply a species permutation: species i becomes species perm[i].
pub fn relabel(net: &ReactionNetwork, perm: &[usize]) -> ReactionNetwork {
    ReactionNetwork {
        species: default_names(net.num_species()),
        reactions: net.reactions.iter().map(|r| r.permuted(perm)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn parses_single_reaction() {
        let net = parse_network("X1 -> X2").unwrap();
        assert_eq!(net.num_species(), 2);
        assert_eq!(net.reactions[0].column(), vec![-1, 1]);
    }

    #[test]
    fn parses_semicolons_and_zero() {
        let net = parse_network("X1 + X2 + X3 -> 0 ; 0 -> X3").unwrap();
        assert_eq!(net.num_reactions(), 2);
        assert_eq!(net.reactions[0].column(), vec![-1, -1, -1]);
        assert_eq!(net.reactions[1].column(), vec![0, 0, 1]);
    }

    #[test]
    fn reversible_expands_forward_then_backward() {
        let net = parse_network("X1 <-> X2 # comment").unwrap();
        assert_eq!(net.reactions[0].column(), vec![-1, 1]);
        assert_eq!(net.reactions[1].column(), vec![1, -1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_network("X1 -> X1"), Err(NetworkError::TrivialReaction { line: 1 }));
        assert!(matches!(parse_network("X1 -> X2\nX1 -> X2"), Err(NetworkError::Duplicate { line: 2, .. })));
        assert!(matches!(parse_network("2X1 -> X2"), Err(NetworkError::NonZeroOne { .. })));
        assert!(matches!(parse_network("X1 + -> X2"), Err(NetworkError::Syntax { line: 1, .. })));
        assert!(matches!(parse_network("X1 X2"), Err(NetworkError::Syntax { .. })));
        let ok = parse_network_with("2X1 -> X2", ParseOptions { allow_non_zero_one: true }).unwrap();
        assert!(!ok.is_zero_one());
    }

    #[test]
    fn header_declares_species() {
        let net = parse_network("species: A B C\nA + B -> C").unwrap();
        assert_eq!(net.species, vec!["A", "B", "C"]);
        assert!(matches!(parse_network("species: A\nA -> B"), Err(NetworkError::Syntax { .. })));
    }

    #[test]
    fn example_two_stoichiometry() {
        let sd = stoichiometric_data(&parse_network("X1 -> X2 + X3\nX2 + X3 -> X1").unwrap());
        assert_eq!(sd.n, vec![vec![-1, 1], vec![1, -1], vec![1, -1]]);
        assert_eq!(sd.rank, 1);
        assert_eq!(sd.w.row(0), &[q(1), q(0), q(1)]);
        assert_eq!(sd.w.row(1), &[q(0), q(1), q(-1)]);
        assert_eq!(sd.leading, vec![0, 1]);
    }

    #[test]
    fn single_reaction_kernel() {
        let sd = stoichiometric_data(&parse_network("X1 -> X2").unwrap());
        assert_eq!(sd.w.row(0), &[q(1), q(1)]);
        assert_eq!(sd.d(), 1);
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(zero_one_universe(3).len(), 56);
        assert_eq!(zero_one_universe(2).len(), 12);
        assert_eq!(enumerate_networks(3, 1, &FilterSet::default()).unwrap().count(), 56);
        assert!(enumerate_networks(2, 13, &FilterSet::default()).is_err());
    }

    #[test]
    fn canonical_transposition() {
        let a = parse_network("X1 -> X2").unwrap();
        let b = parse_network("X2 -> X1").unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn mask_canonicity_matches_vector_route() {
        let canon = MaskCanon::new(3);
        for net in enumerate_networks(3, 2, &FilterSet::default()).unwrap() {
            let pairs = reaction_masks(&net);
            assert_eq!(canon.is_canonical(&pairs), is_canonical_representative(&net), "{net}");
            let orbit: std::collections::BTreeSet<_> =
                permutations(3).iter().map(|p| canonical_key(&relabel(&net, p))).collect();
            assert_eq!(canon.orbit_size(&pairs), orbit.len());
        }
        // Orbit sizes over canonical representatives add up to all subsets.
        let total: usize = enumerate_networks(2, 3, &FilterSet { canonical: true, ..Default::default() })
            .unwrap()
            .map(|n| MaskCanon::new(2).orbit_size(&reaction_masks(&n)))
            .sum();
        assert_eq!(total, 220);
    }

    fn canonical_key(net: &ReactionNetwork) -> Vec<(Vec<u32>, Vec<u32>)> {
        let mut k: Vec<_> = net.reactions.iter().map(|r| r.key()).collect();
        k.sort();
        k
    }
}
