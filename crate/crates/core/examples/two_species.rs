//! Two-species quadratic reduction and the exhaustive subnetwork sweep of a maximum network.

use zeroone_crn::catalog;
use zeroone_crn::linalg::qf;
use zeroone_crn::lowdim::{
    classify_conservation_pair, template_network, two_species_reduce, two_species_verdict, SubnetworkSweeper,
};
use zeroone_crn::network::stoichiometric_data;

fn main() {
    let net = template_network(&[2, 3, 4, 6, 9]);
    let red = two_species_reduce(&net).unwrap();
    print!("{net}");
    for kappa in [[1, 1, 1, 1, 1], [5, 1, 2, 1, 3]] {
        let rates: Vec<_> = kappa.iter().map(|&k| qf(k, 1)).collect();
        println!("κ = {kappa:?}: {:?}", two_species_verdict(&red, &rates).unwrap());
    }

    let id = std::env::args().nth(1).unwrap_or_else(|| "g31".into());
    let g = catalog::network(&id);
    let class = classify_conservation_pair(&stoichiometric_data(&g), &g).unwrap();
    println!("{id}: conservation pair {:?}, class {:?}", class.pair, class.class);
    let s = SubnetworkSweeper::new(&g).unwrap().sweep();
    println!(
        "  {} subsets, {} two-dimensional: {} only degenerate, {} without positive flux, {} certified, {} inconclusive",
        s.subsets, s.two_dimensional, s.only_degenerate, s.no_positive_flux, s.positive_certified, s.inconclusive
    );
}
