//! Zero-one network counts under the different counting conventions.
//!
//!     cargo run --release --example enumeration -- 3 4

use zeroone_crn::network::{enumerate_networks, zero_one_universe, FilterSet};
use zeroone_crn::pipeline::count_conventions;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (s, m) = (args.first().copied().unwrap_or(2), args.get(1).copied().unwrap_or(3));
    println!("{} zero-one reactions on {s} species", zero_one_universe(s).len());
    let counts = count_conventions(s, m).unwrap();
    println!("{}", serde_json::to_string_pretty(&counts).unwrap());
    let filters = FilterSet { positive_flux: true, nondegenerate: true, canonical: true, rank: None };
    for net in enumerate_networks(s, m, &filters).unwrap().take(5) {
        println!("  {}", net.reactions_line());
    }
}
