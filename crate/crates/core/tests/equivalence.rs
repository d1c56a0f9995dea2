mod common;

use congest_cover::congest::{build_network, run_distributed};
use congest_cover::engine::{self, setup_params};
use congest_cover::instances::{gen_random_rs, parse_instance, serialize_instance, Instance};
use congest_cover::verify::{audit_trace, certify};
use proptest::prelude::*;

use common::bits_equal;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engines_agree_bit_for_bit(n in 1usize..25, m in 1usize..25, k in 1usize..5, a_max in 1.0f64..6.0, seed: u64, e in 0usize..3) {
        let k = k.min(m);
        let eps = [1.0, 0.5, 0.3][e];
        let inst = gen_random_rs(n, m, k, a_max, seed).unwrap();
        let central = engine::run(&inst, eps).unwrap();
        let distributed = run_distributed(&inst, eps).unwrap();
        prop_assert!(bits_equal(&central.solution.x, &distributed.solution.x));
        prop_assert!(bits_equal(&central.solution.y, &distributed.solution.y));
        prop_assert_eq!(central.trace.phases(), distributed.stats.phases);
        prop_assert!(distributed.stats.rounds <= distributed.stats.round_bound);
    }

    #[test]
    fn runs_are_certified_and_pass_audit(n in 1usize..30, m in 2usize..30, k in 1usize..5, seed: u64) {
        let k = k.min(m);
        let inst = gen_random_rs(n, m, k, 3.0, seed).unwrap();
        prop_assume!(inst.stats().gamma_p > 1.0);
        let out = engine::run(&inst, 0.5).unwrap();
        let cert = certify(&inst, &out.solution, 0.5).unwrap();
        prop_assert!(cert.valid);
        let report = audit_trace(&out.trace, &out.params, &inst);
        prop_assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn serialized_instances_solve_identically(n in 1usize..15, m in 1usize..15, seed: u64) {
        let inst = gen_random_rs(n, m, 2.min(m), 4.0, seed).unwrap();
        let Instance::Normalized(back) = parse_instance(&serialize_instance(&Instance::Normalized(inst.clone()))).unwrap() else {
            panic!("kind changed");
        };
        let a = engine::run(&inst, 0.5).unwrap();
        let b = engine::run(&back, 0.5).unwrap();
        prop_assert!(bits_equal(&a.solution.x, &b.solution.x));
    }
}

#[test]
fn phase_records_match_between_engines() {
    let inst = gen_random_rs(25, 18, 3, 3.0, 77).unwrap();
    let central = engine::run(&inst, 0.5).unwrap();
    let params = setup_params(0.5, &inst).unwrap();
    let mut net = build_network(&inst, params);
    for expected in &central.trace.records {
        let got = net.run_phase_protocol().unwrap();
        assert_eq!(got.selected, expected.selected, "phase {}", expected.phase);
        assert_eq!(got.newly_dead, expected.newly_dead);
        assert!(bits_equal(
            &got.rho_before.iter().map(|p| p.1).collect::<Vec<_>>(),
            &expected.rho_before.iter().map(|p| p.1).collect::<Vec<_>>()
        ));
        assert_eq!(got.rounds, 4);
    }
    assert!(net.all_dead());
}

#[test]
fn corpus_smoke() {
    for case in common::corpus(40, 9) {
        let out = engine::run(&case.instance, case.epsilon).unwrap();
        assert!(out.trace.phases() <= out.params.phase_limit, "{}", case.label);
    }
}
