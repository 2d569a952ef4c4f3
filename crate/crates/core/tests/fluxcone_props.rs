mod common;

use num::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeroone_crn::fluxcone::{combine, decompose_flux, elementary_modes, extreme_rays, extreme_rays_dd};
use zeroone_crn::linalg::Q;
use zeroone_crn::network::stoichiometric_data;

use common::{qr, random_flux_network, random_network};

fn support(r: &[i64]) -> Vec<usize> {
    (0..r.len()).filter(|&j| r[j] != 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn rays_lie_in_the_cone(seed in any::<u64>(), s in 1usize..=5, m in 1usize..=9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = stoichiometric_data(&random_network(&mut rng, s, m));
        let rays = extreme_rays(&sd);
        for r in &rays.rays {
            prop_assert!(r.iter().all(|&v| v >= 0) && r.iter().any(|&v| v > 0));
            for row in &sd.n {
                prop_assert_eq!(row.iter().zip(r).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
            prop_assert_eq!(r.iter().fold(0i64, |g, &v| num::integer::gcd(g, v)), 1);
        }
    }

    #[test]
    fn supports_are_minimal(seed in any::<u64>(), s in 1usize..=5, m in 1usize..=9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = stoichiometric_data(&random_network(&mut rng, s, m));
        let rays = extreme_rays(&sd);
        prop_assume!(rays.len() <= 10);
        for a in &rays.rays {
            for b in &rays.rays {
                if a != b {
                    let (sa, sb) = (support(a), support(b));
                    prop_assert!(!sb.iter().all(|j| sa.contains(j)), "support {sb:?} inside {sa:?}");
                }
            }
        }
    }

    #[test]
    fn double_description_matches_support_enumeration(seed in any::<u64>(), s in 1usize..=4, m in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = stoichiometric_data(&random_network(&mut rng, s, m));
        prop_assert_eq!(extreme_rays_dd(&sd.n).rays, elementary_modes(&sd.n));
    }

    #[test]
    fn row_operations_keep_the_cone(seed in any::<u64>(), s in 2usize..=4, m in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = stoichiometric_data(&random_network(&mut rng, s, m));
        let mut n = sd.n.clone();
        let (a, b) = (rng.gen_range(0..s), rng.gen_range(0..s));
        if a != b {
            let k = rng.gen_range(-2..=2);
            let src = n[b].clone();
            for (x, y) in n[a].iter_mut().zip(&src) {
                *x += k * y;
            }
        }
        n[0].iter_mut().for_each(|v| *v = -*v);
        n.push(n[s - 1].iter().zip(&n[0]).map(|(x, y)| x + y).collect());
        prop_assert_eq!(extreme_rays_dd(&n), extreme_rays(&sd));
    }

    #[test]
    fn decomposition_reconstructs_flux(seed in any::<u64>(), s in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = stoichiometric_data(&random_flux_network(&mut rng, s, 8));
        let rays = extreme_rays(&sd);
        let lambda: Vec<Q> = (0..rays.len()).map(|_| qr(rng.gen_range(0..=9), rng.gen_range(1..=4))).collect();
        let gamma = combine(&lambda, &rays);
        let back = decompose_flux(&gamma, &rays).expect("γ is in the cone");
        prop_assert!(back.iter().all(|l| !l.is_negative()));
        prop_assert_eq!(combine(&back, &rays), gamma);
    }
}

#[test]
fn vectors_outside_the_cone_are_rejected() {
    let sd = stoichiometric_data(&zeroone_crn::network::parse_network("X1 -> X2\nX2 -> X1\n0 -> X1\nX1 -> 0").unwrap());
    let rays = extreme_rays(&sd);
    assert_eq!(rays.len(), 2);
    assert!(decompose_flux(&[qr(1, 1), qr(2, 1), qr(0, 1), qr(0, 1)], &rays).is_none());
    assert!(decompose_flux(&[qr(2, 1), qr(2, 1), qr(1, 1), qr(1, 1)], &rays).is_some());
}
