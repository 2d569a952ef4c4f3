#![allow(dead_code)]

use num::{BigInt, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use zeroone_crn::linalg::{Matrix, Q};
use zeroone_crn::network::{stoichiometric_data, zero_one_universe, ReactionNetwork, StoichiometricData};

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap()
}

/// Log-uniform rational in [1/10, 10] with two decimals.
pub fn rate(rng: &mut impl Rng) -> Q {
    let v: f64 = 10f64.powf(rng.gen_range(-1.0..1.0));
    qr((v * 100.0).round().max(1.0) as i64, 100)
}

pub fn rates(rng: &mut impl Rng, m: usize) -> Vec<Q> {
    (0..m).map(|_| rate(rng)).collect()
}

/// m distinct reactions drawn from the zero-one universe on s species.
pub fn random_network(rng: &mut impl Rng, s: usize, m: usize) -> ReactionNetwork {
    let mut u = zero_one_universe(s);
    u.shuffle(rng);
    u.truncate(m);
    ReactionNetwork::from_masks(s, &u)
}

/// Rank-one zero-one network: every column is ±u for one direction u, with optional catalysts.
pub fn random_rank_one(rng: &mut impl Rng, s: usize) -> ReactionNetwork {
    loop {
        let u: Vec<i32> = (0..s).map(|_| rng.gen_range(-1..=1)).collect();
        if u.iter().all(|&v| v == 0) {
            continue;
        }
        let count = rng.gen_range(1..=4);
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for _ in 0..count * 3 {
            if pairs.len() == count {
                break;
            }
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let (mut a, mut b) = (0u32, 0u32);
            for (i, &ui) in u.iter().enumerate() {
                match ui * sign {
                    1 => b |= 1 << i,
                    -1 => a |= 1 << i,
                    _ => {
                        if rng.gen_bool(0.3) {
                            a |= 1 << i;
                            b |= 1 << i;
                        }
                    }
                }
            }
            if !pairs.contains(&(a, b)) {
                pairs.push((a, b));
            }
        }
        return ReactionNetwork::from_masks(s, &pairs);
    }
}

/// Random network with a strictly positive flux, s species, up to `max_m` reactions.
pub fn random_flux_network(rng: &mut impl Rng, s: usize, max_m: usize) -> ReactionNetwork {
    loop {
        let m = rng.gen_range(2..=max_m);
        let net = random_network(rng, s, m);
        let sd = stoichiometric_data(&net);
        let rays = zeroone_crn::fluxcone::extreme_rays(&sd);
        if zeroone_crn::fluxcone::strictly_positive_flux_exists(&rays) {
            return net;
        }
    }
}

pub fn w_times_n_is_zero(sd: &StoichiometricData) -> bool {
    let n = sd.n_matrix();
    let wn: Matrix = sd.w.mul(&n);
    wn.is_zero()
}
