use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uconf_core::laws::{all_laws, run_law, Params};
use uconf_core::random::{random_kernel, random_weighted_base};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_law_holds_on_random_models(seed in any::<u64>(), n in 1usize..=5, max_rank in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_weighted_base(&mut rng, n, max_rank);
        let k = random_kernel(&mut rng, &base);
        let params = Params { max_points: 2, max_degree: 2, max_terms: 2 };
        for (i, law) in all_laws().iter().enumerate() {
            let report = run_law(law, &base, &k, &params, seed, i as u64, 3);
            prop_assert!(report.passed(), "{}: {:?}", law.name, report.first_failure);
        }
    }
}
