//! Parse a network and print its stoichiometric data.
//!
//!     cargo run --example stoichiometry -- "X1 + X2 -> X3; X3 -> X1 + X2; X3 -> 0"

use zeroone_crn::network::{parse_network, stoichiometric_data};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "X1 + X2 -> X3; X3 -> X1 + X2; X3 -> 0; 0 -> X1".into());
    let net = parse_network(&text.replace(';', "\n")).expect("valid network");
    let sd = stoichiometric_data(&net);
    print!("{net}");
    println!("s = {}, m = {}, rank = {}, conservation laws = {}", sd.s, sd.m, sd.rank, sd.d());
    println!("N:");
    for row in &sd.n {
        println!("  {row:?}");
    }
    println!("Y:");
    for row in &sd.y {
        println!("  {row:?}");
    }
    for k in 0..sd.d() {
        let w: Vec<String> = sd.w.row(k).iter().map(|v| v.to_string()).collect();
        println!("W row {k}: [{}] (leading species X{})", w.join(", "), sd.leading[k] + 1);
    }
}
