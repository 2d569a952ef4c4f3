//! The pair criterion for det Jac_h on a rank-two network.

use zeroone_crn::catalog;
use zeroone_crn::network::stoichiometric_data;
use zeroone_crn::sign::{sign_report, SignVariant};

fn main() {
    let id = std::env::args().nth(1).unwrap_or_else(|| "g35".into());
    let sd = stoichiometric_data(&catalog::network(&id));
    for variant in [SignVariant::Reduced, SignVariant::Full] {
        let rep = sign_report(&sd, variant).expect("positive flux");
        println!("{id} ({variant:?}): {:?}", rep.verdict);
        println!("  rays t = {}, B has {} terms, B~ has {} terms, |Θ| = {}", rep.t, rep.b_terms, rep.b_tilde_terms, rep.theta.len());
        if let Some((i, j)) = rep.witness_pair {
            println!("  witness reactions {i} and {j}, ray pairs {:?}", rep.witness_set);
        }
    }
}
