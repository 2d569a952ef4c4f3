mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zeroone_crn::linalg::int_rank;
use zeroone_crn::network::{
    canonical_form, enumerate_networks, is_canonical_representative, parse_network, relabel, stoichiometric_data,
    FilterSet,
};

use common::{random_network, w_times_n_is_zero};

fn perm_from(seed: u64, s: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..s).collect();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stoichiometry_is_zero_one(seed in any::<u64>(), s in 1usize..=5, m in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, s, m.min(s * 4));
        let sd = stoichiometric_data(&net);
        prop_assert!(sd.is_zero_one());
        prop_assert!(sd.n.iter().flatten().all(|v| (-1..=1).contains(v)));
    }

    #[test]
    fn conservation_laws_annihilate_n(seed in any::<u64>(), s in 1usize..=5, m in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, s, m);
        let sd = stoichiometric_data(&net);
        prop_assert!(w_times_n_is_zero(&sd));
        prop_assert_eq!(sd.d() + sd.rank, s);
        prop_assert_eq!(sd.rank, int_rank(&sd.n));
        prop_assert_eq!(sd.w.rank(), sd.d());
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), s in 1usize..=4, m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, s, m);
        let back = parse_network(&net.to_string()).unwrap();
        prop_assert_eq!(back, net);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant(seed in any::<u64>(), s in 1usize..=4, m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = random_network(&mut rng, s, m);
        let moved = relabel(&net, &perm_from(seed ^ 1, s));
        let c = canonical_form(&net);
        prop_assert_eq!(&c, &canonical_form(&moved));
        prop_assert!(is_canonical_representative(&c));
        prop_assert_eq!(stoichiometric_data(&moved).rank, stoichiometric_data(&net).rank);
    }
}

#[test]
fn canonical_enumeration_has_no_isomorphic_pairs() {
    for (s, m) in [(2, 2), (2, 3), (3, 2)] {
        let all: Vec<_> = enumerate_networks(s, m, &FilterSet::default()).unwrap().collect();
        let canon: Vec<_> =
            enumerate_networks(s, m, &FilterSet { canonical: true, ..Default::default() }).unwrap().collect();
        let mut forms: Vec<_> = canon.iter().map(canonical_form).collect();
        let n = forms.len();
        forms.sort_by_key(|f| f.reactions_line());
        forms.dedup();
        assert_eq!(forms.len(), n, "isomorphic canonical networks at s={s}, m={m}");
        let mut every: Vec<_> = all.iter().map(|n| canonical_form(n).reactions_line()).collect();
        every.sort();
        every.dedup();
        assert_eq!(every.len(), n, "canonical list misses classes at s={s}, m={m}");
    }
}
