mod common;

use num::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeroone_crn::linalg::{q, Q};
use zeroone_crn::network::stoichiometric_data;
use zeroone_crn::onedim::{
    analyze_one_dim, classify_total_constant, in_region, one_dim_full_verdict, region, witness_point, Classification,
};

use common::{qr, random_rank_one, rates};

fn slack(c: &[Q], coefficients: &[i64]) -> Q {
    coefficients.iter().zip(c).map(|(&k, ci)| q(k) * ci).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn positive_points_lie_in_the_region(seed in any::<u64>(), s in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = stoichiometric_data(&random_rank_one(&mut rng, s));
        let st = analyze_one_dim(&sd).unwrap();
        let c = sd.total_constants(&rates(&mut rng, s));
        prop_assert!(in_region(&st, &c));
        prop_assert_ne!(classify_total_constant(&st, &c).unwrap(), Classification::NoPositiveClass);
        let w = witness_point(&st, &c).unwrap();
        prop_assert!(w.iter().all(|v| v.is_positive()));
        prop_assert_eq!(sd.total_constants(&w), c);
    }

    #[test]
    fn classification_agrees_with_solver(seed in any::<u64>(), s in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_rank_one(&mut rng, s);
        let sd = stoichiometric_data(&net);
        let kappa = rates(&mut rng, sd.m);
        let c: Vec<Q> = (0..sd.d()).map(|_| qr(rng.gen_range(-20..=20), 7)).collect();
        let rep = one_dim_full_verdict(&net, &kappa, &c);
        prop_assert!(rep.is_ok(), "{}: {:?}", net.reactions_line(), rep.err());
    }

    #[test]
    fn region_is_open(seed in any::<u64>(), s in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_rank_one(&mut rng, s);
        let sd = stoichiometric_data(&net);
        prop_assume!(sd.d() > 0);
        let st = analyze_one_dim(&sd).unwrap();
        let c = sd.total_constants(&rates(&mut rng, s));
        let ineqs = region(&st);
        let min = ineqs.iter().map(|i| slack(&c, &i.coefficients)).min().unwrap_or_else(|| q(1));
        prop_assert!(min.is_positive());
        // each inequality has at most two unit coefficients
        let eps = min / q(4);
        let kappa = rates(&mut rng, sd.m);
        for _ in 0..5 {
            let moved: Vec<Q> = c.iter().map(|ci| ci + &eps * qr(rng.gen_range(-99..=99), 100)).collect();
            prop_assert!(in_region(&st, &moved));
            let rep = one_dim_full_verdict(&net, &kappa, &moved).unwrap();
            prop_assert_eq!(rep.classification, classify_total_constant(&st, &c).unwrap());
        }
    }
}
