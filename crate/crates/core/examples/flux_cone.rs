//! Extreme rays of the flux cone of a catalog network, and a flux decomposed over them.

use zeroone_crn::catalog;
use zeroone_crn::fluxcone::{combine, decompose_flux, extreme_rays, strictly_positive_flux_exists};
use zeroone_crn::linalg::q;
use zeroone_crn::network::stoichiometric_data;

fn main() {
    let id = std::env::args().nth(1).unwrap_or_else(|| "g35".into());
    let net = catalog::network(&id);
    let rays = extreme_rays(&stoichiometric_data(&net));
    println!("{id}: {} reactions, {} extreme rays", net.num_reactions(), rays.len());
    for (k, r) in rays.rays.iter().enumerate() {
        println!("  R{k:<2} {r:?}");
    }
    println!("strictly positive flux: {}", strictly_positive_flux_exists(&rays));

    let lambda: Vec<_> = (0..rays.len()).map(|k| q(k as i64 % 3 + 1)).collect();
    let gamma = combine(&lambda, &rays);
    let back = decompose_flux(&gamma, &rays).expect("in the cone");
    let shown: Vec<String> = gamma.iter().map(|g| g.to_string()).collect();
    println!("γ = [{}] decomposes with {} nonzero weights", shown.join(", "), back.iter().filter(|l| **l != q(0)).count());
}
