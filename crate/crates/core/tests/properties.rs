use proptest::prelude::*;

use keyrecycle::attack::{posterior_entropy, run_attack_exact};
use keyrecycle::compose::{compose_simulate_exact, ComposeEnv};
use keyrecycle::dist::{total_variation, Dist};
use keyrecycle::hashfam::{measure_asu2, measure_axu2, EvalTable};
use keyrecycle::ratio::ratio;
use keyrecycle::ucsim::{worst_case_distance, worst_case_distance_scheme, WcScheme};
use keyrecycle::{Budget, HashFamily};

fn small_family() -> impl Strategy<Value = HashFamily> {
    prop_oneof![
        (1u32..=4).prop_map(|m| HashFamily::mul(m).unwrap()),
        (1u32..=3, 1u32..=2).prop_map(|(m, l)| HashFamily::poly(m, l).unwrap()),
        (1u32..=4, 1u32..=3).prop_map(|(n, m)| HashFamily::toeplitz(n, m).unwrap()),
        (1u32..=3).prop_map(|m| HashFamily::counterexample(m).unwrap()),
    ]
}

fn tight_family() -> impl Strategy<Value = HashFamily> {
    prop_oneof![
        (1u32..=4).prop_map(|m| HashFamily::mul(m).unwrap()),
        (2u32..=4, 1u32..=2).prop_map(|(n, m)| HashFamily::toeplitz(n, m).unwrap()),
    ]
}

fn small_dist() -> impl Strategy<Value = Dist<u8>> {
    prop::collection::vec(1u128..20, 1..6).prop_map(|ws| {
        let total: u128 = ws.iter().sum();
        Dist::new(ws.into_iter().enumerate().map(|(i, w)| (i as u8, ratio(w, total)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn descriptor_round_trip(fam in small_family()) {
        let back = HashFamily::parse(&fam.descriptor()).unwrap();
        prop_assert_eq!(back, fam);
    }

    #[test]
    fn table_json_preserves_evaluations(fam in small_family()) {
        let tab = HashFamily::table_from_json(&fam.to_table_json()).unwrap();
        let a = EvalTable::build(&fam, Budget::default()).unwrap();
        let b = EvalTable::build(&tab, Budget::default()).unwrap();
        for x in 0..a.messages() {
            prop_assert_eq!(a.column(x), b.column(x));
        }
        prop_assert_eq!(measure_axu2(&fam).unwrap().epsilon, measure_axu2(&tab).unwrap().epsilon);
    }

    #[test]
    fn lifting_turns_xor_universal_into_strongly_universal(fam in small_family()) {
        let base = measure_axu2(&fam).unwrap().epsilon;
        let lifted = measure_asu2(&fam.lift()).unwrap().epsilon;
        prop_assert_eq!(lifted, base);
    }

    #[test]
    fn recycled_distance_never_exceeds_axu2(fam in small_family()) {
        let eps = measure_axu2(&fam).unwrap().epsilon;
        let wc = worst_case_distance(&fam, true).unwrap();
        prop_assert!(wc.distance <= eps);
        prop_assert!(wc.impersonation_distance <= wc.substitution_distance);
    }

    #[test]
    fn standard_distance_never_exceeds_asu2(fam in small_family()) {
        let lifted = fam.lift();
        let eps = measure_asu2(&lifted).unwrap().epsilon;
        let wc = worst_case_distance_scheme(&WcScheme::new(&lifted, false), Budget::default()).unwrap();
        prop_assert!(wc.distance <= eps);
    }

    #[test]
    fn attack_success_is_linear(fam in tight_family(), pick in 0u64..16) {
        let t = fam.tag_count();
        let l = 1 + pick % t;
        prop_assert_eq!(run_attack_exact(&fam, l).unwrap().success_prob, ratio(l as u128, t as u128));
    }

    #[test]
    fn leakage_is_monotone(fam in tight_family()) {
        let mut prev = f64::INFINITY;
        for l in 0..=fam.tag_count() {
            let h = posterior_entropy(&fam, l).unwrap();
            prop_assert!(h.matches());
            let bits = h.computed.to_f64();
            prop_assert!(bits <= prev + 1e-12);
            prop_assert!(bits >= 0.0);
            prev = bits;
        }
    }

    #[test]
    fn composed_distance_within_bound(m in 1u32..=2, r in 1u64..=2, l in 1u64..=2) {
        let fam = HashFamily::mul(m).unwrap();
        for env in [ComposeEnv::Identity, ComposeEnv::ListElimination] {
            let sim = compose_simulate_exact(&fam, r, l, env).unwrap();
            prop_assert!(sim.distance <= sim.bound);
        }
    }

    #[test]
    fn total_variation_is_a_metric(p in small_dist(), q in small_dist(), s in small_dist()) {
        prop_assert_eq!(total_variation(&p, &q), total_variation(&q, &p));
        prop_assert!(total_variation(&p, &s) <= total_variation(&p, &q) + total_variation(&q, &s));
        prop_assert!(total_variation(&p, &q) <= ratio(1, 1));
    }
}
