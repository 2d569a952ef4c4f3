//! Rank-one networks: the region of total constants with a steady state, checked against the solver.

use zeroone_crn::linalg::qf;
use zeroone_crn::network::{parse_network, stoichiometric_data};
use zeroone_crn::onedim::{analyze_one_dim, one_dim_full_verdict, region, witness_point};

fn main() {
    let net = parse_network("X1 + X2 -> X3\nX3 -> X1 + X2").unwrap();
    let sd = stoichiometric_data(&net);
    let st = analyze_one_dim(&sd).unwrap();
    print!("{net}");
    let ineqs: Vec<String> = region(&st).into_iter().map(|i| i.text).collect();
    println!("steady states exist iff {}", ineqs.join(" and "));

    let kappa = [qf(2, 1), qf(1, 1)];
    for c in [[qf(1, 1), qf(2, 1)], [qf(-1, 1), qf(1, 2)], [qf(0, 1), qf(3, 1)]] {
        let shown: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        let rep = one_dim_full_verdict(&net, &kappa, &c).unwrap();
        print!("c = ({}): {:?}", shown.join(", "), rep.classification);
        if let Some(x) = rep.steady_state {
            print!(", x* ≈ {:.6?}", x.midpoint());
        }
        if let Ok(w) = witness_point(&st, &c) {
            let w: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            print!(", class point ({})", w.join(", "));
        }
        println!();
    }
}
