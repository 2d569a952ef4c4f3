//! Bundled fixture networks: the two-dimensional maximum catalogs and the worked examples.

use serde::Serialize;

use crate::linalg::{qf, Q};
use crate::network::{parse_network, ReactionNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    G1,
    G2,
    G3,
    Example,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Fixture {
    pub id: &'static str,
    pub family: Family,
    pub description: &'static str,
    #[serde(skip)]
    pub text: &'static str,
}

impl Fixture {
    pub fn network(&self) -> ReactionNetwork {
        parse_network(self.text).expect("bundled fixture parses")
    }
}

macro_rules! fixture {
    ($id:literal, $fam:expr, $desc:literal) => {
        Fixture { id: $id, family: $fam, description: $desc, text: include_str!(concat!("../data/catalog/", $id, ".net")) }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("g1", Family::G1, "maximum network with conservation pair (1/2, 1/2)"),
    fixture!("g21", Family::G2, "maximum network, 16 reactions"),
    fixture!("g22", Family::G2, "maximum network, 16 reactions"),
    fixture!("g23", Family::G2, "maximum network, 24 reactions"),
    fixture!("g31", Family::G3, "maximum network, 12 reactions"),
    fixture!("g32", Family::G3, "maximum network, 6 reactions"),
    fixture!("g33", Family::G3, "maximum network, 16 reactions"),
    fixture!("g34", Family::G3, "maximum network, 6 reactions"),
    fixture!("g35", Family::G3, "maximum network, 12 reactions"),
    fixture!("g36", Family::G3, "maximum network, 12 reactions"),
    fixture!("example1", Family::Example, "one-dimensional, no positive steady states"),
    fixture!("example2", Family::Example, "one-dimensional, unique stable steady state"),
    fixture!("example3", Family::Example, "two species, degenerate continuum"),
    fixture!("example5", Family::Example, "three species, two nondegenerate steady states"),
    fixture!("example6", Family::Example, "three species, two stable steady states"),
    fixture!("g21_degenerate_sub", Family::Example, "subnetwork of g21 with only degenerate steady states"),
];

pub fn get(id: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.id == id)
}

pub fn network(id: &str) -> ReactionNetwork {
    get(id).unwrap_or_else(|| panic!("unknown fixture {id}")).network()
}

/// The nine networks of the G2 and G3 catalogs.
pub fn g2_g3() -> impl Iterator<Item = &'static Fixture> {
    FIXTURES.iter().filter(|f| matches!(f.family, Family::G2 | Family::G3))
}

pub fn example5_kappa() -> Vec<Q> {
    [1, 3, 2, 1, 1].iter().map(|&v| qf(v, 1)).collect()
}

pub fn example6_kappa() -> Vec<Q> {
    vec![qf(5765, 16), qf(1655, 65536), qf(1, 2), qf(1, 2), qf(1, 2), qf(1, 2)]
}

/// Reference steady states for the bistable six-reaction example, x⁽¹⁾, x⁽²⁾, x⁽³⁾.
pub const EXAMPLE6_STATES: [[f64; 3]; 3] = [
    [0.8340329166, 0.2942918947, 0.001663824382],
    [0.05999575106, 0.02912421107, 0.02312970964],
    [0.05546474050, 0.02698403889, 0.02501921562],
];

/// Rate constants known to produce multiple steady states, used to seed searches.
pub fn witness_kappas(net: &ReactionNetwork) -> Vec<Vec<Q>> {
    [("example5", example5_kappa()), ("example6", example6_kappa())]
        .into_iter()
        .filter(|(id, _)| network(id) == *net)
        .map(|(_, k)| k)
        .collect()
}
