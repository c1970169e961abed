mod common;

use common::{q, system};
use lineadm_core::format::fixtures;
use lineadm_core::*;
use num_traits::Zero;

fn oracle_finds(inc: &IncidenceStructure, ls: &LocalSystem, cert: &AdmCertificate) {
    let k = cert
        .trace
        .iter()
        .map(|s| s.amount.clone())
        .max()
        .map_or(1, |m| u32::try_from(m).unwrap().max(1));
    let cfg = ShiftSearchConfig {
        bound: k.max(3),
        node_budget: 50_000_000,
    };
    match oracle_search(inc, ls, &cfg) {
        SearchOutcome::Found { residues, .. } => assert!(verify_residues(inc, ls, &residues).is_ok()),
        other => panic!("oracle disagrees: {other:?}"),
    }
}

#[test]
fn path_step_moves_one_unit() {
    let (_, inc) = common::path_fixture();
    let ls = system(&[q(0, 1), q(1, 2), q(1, 2), q(0, 1), q(1, 3), q(2, 3)]);
    let h0 = choose_h0(&inc);
    assert_eq!(h0, 0);
    let rv = normalize(&ls, h0);
    let p1 = inc.find_point(&Point::new(0, 0, 1).unwrap()).unwrap();
    let cert = correct_no_cycle(&inc, &rv, h0).unwrap();
    assert_eq!(cert.trace.len(), 1);
    let step = &cert.trace[0];
    assert_eq!((step.to, step.point, step.amount.clone()), (h0, Some(p1), 1.into()));
    let at_p1: Q = inc.lines_through(p1).iter().map(|&l| cert.residues.get(l).clone()).sum();
    assert!(at_p1.is_zero());
    assert!(verify_certificate(&inc, &ls, &cert).is_ok());
    oracle_finds(&inc, &ls, &cert);
}

#[test]
fn two_triangles_share_a_line() {
    let (_, inc) = common::two_triangles();
    let cs = cycles(&inc);
    assert_eq!(cs.len(), 2);
    assert_eq!(classify(&inc).applicable, Strategy::CommonLine);
    for seed in 0..40 {
        let ls = random_local_system(seed, inc.n_lines(), 4);
        let cert = correct_common_line(&inc, &normalize(&ls, 3)).unwrap();
        assert_eq!(cert.h0, 0);
        assert!(verify_certificate(&inc, &ls, &cert).is_ok());
        if seed < 8 {
            oracle_finds(&inc, &ls, &cert);
        }
    }
}

#[test]
fn single_cycle_common_line_matches_no_cycle() {
    let (_, inc) = common::path_fixture();
    let ls = system(&[q(0, 1), q(1, 2), q(1, 2), q(0, 1), q(1, 3), q(2, 3)]);
    let a = correct_no_cycle(&inc, &normalize(&ls, 0), 0).unwrap();
    let b = correct_common_line(&inc, &normalize(&ls, 0)).unwrap();
    assert_eq!(a.residues, b.residues);
    assert_eq!(a.trace, b.trace);
}

fn example_two_with_quarter() -> (IncidenceStructure, LocalSystem) {
    let (arr, _) = fixtures::example_two();
    let inc = build_incidence(&arr).unwrap();
    let mut v = vec![q(0, 1); 12];
    for l in [1, 2, 3, 7, 8] {
        v[l] = q(1, 2);
    }
    v[4] = q(1, 4);
    v[0] = q(1, 4);
    (inc, system(&v))
}

#[test]
fn cycle_opened_through_quarter_line() {
    let (inc, ls) = example_two_with_quarter();
    assert_eq!(classify_system(&inc, &ls).applicable, Strategy::OpenCycles);
    let cert = correct_open_cycles(&inc, &normalize(&ls, 0), 0).unwrap();
    let p1 = inc.find_point(&Point::new(0, 0, 1).unwrap()).unwrap();
    let open = cert.trace.iter().find(|s| s.kind == StepKind::OpenCycle).unwrap();
    assert_eq!((open.to, open.point), (4, Some(p1)));
    assert!(verify_certificate(&inc, &ls, &cert).is_ok());
    oracle_finds(&inc, &ls, &cert);
}

#[test]
fn opening_needs_a_nonzero_single_point_line() {
    let (arr, systems) = fixtures::example_two();
    let inc = build_incidence(&arr).unwrap();
    let ls = &systems[0].1;
    assert!(matches!(
        correct_open_cycles(&inc, &normalize(ls, 0), 0),
        Err(StrategyError::NotOpenable(c)) if c == vec![1, 2, 3]
    ));
}

#[test]
fn without_cycles_opening_is_plain_peeling() {
    let (arr, systems) = fixtures::example_one();
    let inc = build_incidence(&arr).unwrap();
    let ls = &systems[0].1;
    let rv = normalize(ls, 0);
    let a = correct_open_cycles(&inc, &rv, 0).unwrap();
    let b = correct_no_cycle(&inc, &rv, 0).unwrap();
    assert_eq!((a.residues, a.trace), (b.residues, b.trace));
}

#[test]
fn quadrilateral_alternate_cover() {
    let (_, inc) = common::quadrilateral();
    assert_eq!(cycles(&inc).len(), 1);
    let ls = common::quadrilateral_system(q(0, 1));
    let rv = normalize(&ls, 0);
    let joints = &cycles(&inc)[0].joints;
    for &p in joints {
        let v: Q = inc.lines_through(p).iter().map(|&l| rv.get(l).clone()).sum();
        assert_eq!(v, q(1, 1));
    }
    let cert = correct_even_cycles(&inc, &rv, 0).unwrap();
    assert!(cert.trace.iter().all(|s| s.kind == StepKind::EvenCycleAlternate));
    assert_eq!(cert.trace.len(), 2);
    for &p in joints {
        let v: Q = inc.lines_through(p).iter().map(|&l| cert.residues.get(l).clone()).sum();
        assert!(v.is_zero());
    }
    assert!(verify_certificate(&inc, &ls, &cert).is_ok());
    oracle_finds(&inc, &ls, &cert);
}

#[test]
fn quadrilateral_with_third_breaks_a_joint() {
    let (_, inc) = common::quadrilateral();
    let ls = common::quadrilateral_system(q(1, 3));
    let cert = correct_even_cycles(&inc, &normalize(&ls, 0), 0).unwrap();
    assert!(cert.trace.iter().all(|s| s.kind == StepKind::LeafPeel));
    assert!(verify_certificate(&inc, &ls, &cert).is_ok());
    oracle_finds(&inc, &ls, &cert);
}

#[test]
fn quadrilateral_opened_when_every_joint_is_integral() {
    let (_, inc) = common::quadrilateral();
    let ls = system(&[
        q(2, 3),
        q(1, 6),
        q(1, 2),
        q(1, 6),
        q(5, 6),
        q(1, 3),
        q(1, 3),
        q(0, 1),
        q(0, 1),
    ]);
    let rv = normalize(&ls, 0);
    for &p in &cycles(&inc)[0].joints {
        let v: Q = inc.lines_through(p).iter().map(|&l| rv.get(l).clone()).sum();
        assert_eq!(v, q(1, 1));
    }
    let cert = correct_even_cycles(&inc, &rv, 0).unwrap();
    assert!(cert.trace.iter().any(|s| s.kind == StepKind::OpenCycle && s.to == 5));
    assert!(verify_certificate(&inc, &ls, &cert).is_ok());
    oracle_finds(&inc, &ls, &cert);
}

#[test]
fn odd_cycles_rejected_by_even_corrector() {
    let (arr, _) = fixtures::example_two();
    let inc = build_incidence(&arr).unwrap();
    let ls = LocalSystem::trivial(12);
    assert!(matches!(
        correct_even_cycles(&inc, &normalize(&ls, 0), 0),
        Err(StrategyError::OddCycle(_))
    ));
}

#[test]
fn example_one_random_systems() {
    let (arr, _) = fixtures::example_one();
    let inc = build_incidence(&arr).unwrap();
    let h0 = choose_h0(&inc);
    assert_eq!(h0, 0);
    for seed in 0..100 {
        let ls = random_local_system(seed, 13, 6);
        let cert = correct_no_cycle(&inc, &normalize(&ls, h0), h0).unwrap();
        assert!(verify_certificate(&inc, &ls, &cert).is_ok());
    }
}

#[test]
fn oracle_matches_example_one() {
    let (arr, _) = fixtures::example_one();
    let inc = build_incidence(&arr).unwrap();
    let cfg = ShiftSearchConfig {
        bound: 2,
        node_budget: 50_000_000,
    };
    for seed in 0..10 {
        let ls = random_local_system(seed, 13, 6);
        let cert = correct_no_cycle(&inc, &normalize(&ls, 0), 0).unwrap();
        let SearchOutcome::Found { residues, .. } = oracle_search(&inc, &ls, &cfg) else {
            panic!("seed {seed}: no lift within bound");
        };
        // Both lifts agree up to integer shifts.
        for l in 0..13 {
            assert!((residues.get(l) - cert.residues.get(l)).is_integer());
        }
    }
}

#[test]
fn dispatcher_examples() {
    let cfg = ShiftSearchConfig::default();
    let (arr, _) = fixtures::example_one();
    let inc = build_incidence(&arr).unwrap();
    for seed in 0..5 {
        let ls = random_local_system(seed, 13, 5);
        let Decision::Admissible(cert) = decide_admissible(&inc, &ls, &cfg) else {
            panic!("seed {seed} not admissible");
        };
        assert_eq!(cert.strategy, Strategy::NoCycle);
    }
    let (inc, ls) = example_two_with_quarter();
    let Decision::Admissible(cert) = decide_admissible(&inc, &ls, &cfg) else {
        panic!("expected a certificate");
    };
    assert_eq!(cert.strategy, Strategy::OpenCycles);
}

#[test]
fn condition_c_failure_goes_to_oracle() {
    let (_, inc) = common::arrangement(&[
        (1, 0, 0),
        (0, 1, 0),
        (1, -1, 0),
        (0, 0, 1),
        (1, 0, -1),
        (0, 1, -1),
        (1, -1, -1),
    ]);
    assert!(!inc.check_condition_c().holds());
    let ls = LocalSystem::trivial(7);
    let Decision::Admissible(cert) = decide_admissible(&inc, &ls, &ShiftSearchConfig::default()) else {
        panic!("trivial system is admissible");
    };
    assert_eq!(cert.strategy, Strategy::Oracle);
}
