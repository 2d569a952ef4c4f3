//! Certified positive steady states with stability labels for the two witness networks.

use zeroone_crn::catalog;
use zeroone_crn::solver::solve_positive_steady_states;

fn main() {
    for (id, kappa) in [("example5", catalog::example5_kappa()), ("example6", catalog::example6_kappa())] {
        let net = catalog::network(id);
        let sols = solve_positive_steady_states(&net, &kappa, &[]).unwrap();
        println!("{id}: {} positive steady states", sols.len());
        for s in &sols {
            println!(
                "  x ≈ {:.10?}  {:?}, det Jac_f sign {}, certified {}",
                s.midpoint(),
                s.stability,
                s.det_jac_f_sign,
                s.certified
            );
        }
    }
}
