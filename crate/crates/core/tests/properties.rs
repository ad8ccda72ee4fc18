mod common;

use gapsmith::debreu::remove_all;
use gapsmith::plmap::PlMap;
use gapsmith::pointset::PointSet;
use gapsmith::rational::Rational;
use gapsmith::semiorder::{
    brute_canonical_form, canonical_form, check_ss, enumerate_semiorders, synthesize_ss, SsVerdict,
};
use gapsmith::structure::check_all;
use gapsmith::threshold::{remove_strong, ThresholdError};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn set_from_seed(seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::debreu_instance(&mut rng)
}

fn small_set_from_seed(seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rand::Rng::gen_range(&mut rng, 2..=4);
    common::random_set(&mut rng, 8, 3, k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trips(n in -10_000i64..10_000, d in 1i64..500) {
        let r = Rational::new(n, d);
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(&back, &r);
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }

    #[test]
    fn point_sets_round_trip(seed in any::<u64>()) {
        let s = set_from_seed(seed);
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<PointSet>(&json).unwrap(), s);
    }

    #[test]
    fn weak_removal_is_idempotent(seed in any::<u64>()) {
        let s = set_from_seed(seed);
        let t = remove_all(&s).unwrap();
        let again = remove_all(&t.final_set).unwrap();
        prop_assert!(again.steps.is_empty());
        prop_assert_eq!(again.final_set, t.final_set.clone());
        prop_assert_eq!(t.final_set.span().unwrap(), s.span().unwrap());
    }

    #[test]
    fn weak_map_round_trips(seed in any::<u64>()) {
        let s = set_from_seed(seed);
        let t = remove_all(&s).unwrap();
        let json = serde_json::to_string(&t.total_map).unwrap();
        let back: PlMap = serde_json::from_str(&json).unwrap();
        for x in s.sample_points() {
            prop_assert_eq!(back.apply(&x).unwrap(), t.total_map.apply(&x).unwrap());
        }
    }

    #[test]
    fn strong_removal_agrees_with_verdict(seed in any::<u64>()) {
        let s = small_set_from_seed(seed);
        let verdict = check_all(&s).unwrap();
        match remove_strong(&s) {
            Ok((map, img, _)) => {
                prop_assert!(verdict.passed());
                prop_assert!(img.bad_gaps().unwrap().is_empty());
                prop_assert!(map.is_strictly_increasing_on(&s).unwrap().passed());
                prop_assert!(map.threshold_equiv(&s).unwrap().passed());
            }
            Err(ThresholdError::StructureViolated(_)) => prop_assert!(!verdict.passed()),
            Err(e) => prop_assert!(false, "{s}: {e}"),
        }
    }
}

#[test]
fn canonical_forms_induce_the_same_classes() {
    for n in 0..=4 {
        let all = enumerate_semiorders(n, false).unwrap().instances;
        let fast: Vec<_> = all.iter().map(canonical_form).collect();
        let slow: Vec<_> = all.iter().map(brute_canonical_form).collect();
        for i in 0..all.len() {
            for j in 0..i {
                assert_eq!(
                    fast[i] == fast[j],
                    slow[i] == slow[j],
                    "{:?} {:?}",
                    all[i],
                    all[j]
                );
            }
        }
    }
}

#[test]
fn synthesized_values_survive_json() {
    for r in enumerate_semiorders(4, true).unwrap().instances {
        let u = synthesize_ss(&r).unwrap();
        let back = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        assert_eq!(check_ss(&r, &back).unwrap(), SsVerdict::Represents);
    }
}
