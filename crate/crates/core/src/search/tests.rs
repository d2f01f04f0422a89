use super::*;
use crate::kernel::{fixtures, z2_homology_ranks};
use crate::moves::{classify_sequence, verify_sequence, SequenceClass};

fn cfg(strategy: Strategy, h: u32) -> SearchConfig {
    let mut cfg = SearchConfig::new(strategy, h);
    cfg.node_limit = 200_000;
    cfg
}

/// A triangulation and its image under one 2-3 move followed by one 3-2
/// move at a different site, with differing signatures. Every up-down image
/// of all three 2-tetrahedron fixtures is isomorphic to itself (after a 2-3
/// move their only degree-3 edge is the created one), so the base is a
/// 4-tetrahedron scramble image of the double tetrahedron.
fn small_pair() -> (Triangulation, Triangulation) {
    let base = scramble(&fixtures::double_tetrahedron(), 6, 5, 0).unwrap();
    let own = encode(&base).unwrap();
    let sk = Skeleton::compute(&base).unwrap();
    for up in enumerate_moves(&base, &sk, MoveKindSet::of(&[MoveKind::M23])).unwrap() {
        let mid = apply(&base, &sk, up).unwrap();
        let msk = Skeleton::compute(&mid).unwrap();
        for down in enumerate_moves(&mid, &msk, MoveKindSet::of(&[MoveKind::M32])).unwrap() {
            let result = apply(&mid, &msk, down).unwrap();
            if encode(&result).unwrap() != own {
                return (base, result);
            }
        }
    }
    panic!("no non-trivial up-down image");
}

#[test]
fn identical_seeds_connect_at_height_zero() {
    let t = fixtures::double_tetrahedron();
    let result = connect(&[t.clone(), t], &cfg(Strategy::Blind, 5)).unwrap();
    assert!(result.connected);
    assert_eq!(result.height_used, Some(0));
    assert_eq!(result.nodes_23_32, 1);
    assert!(!result.terminated_early);
}

#[test]
fn blind_connects_small_pair_at_height_one() {
    let (a, b) = small_pair();
    let mut c = cfg(Strategy::Blind, 4);
    c.reconstruct_paths = true;
    let result = connect(&[a.clone(), b.clone()], &c).unwrap();
    assert!(result.connected);
    assert_eq!(result.height_used, Some(1));
    let paths = result.paths.unwrap();
    assert_eq!(paths.len(), 1);
    let path = &paths[0].sequence;
    assert_eq!(path.steps.len(), 2);
    let start = if paths[0].from_seed == 0 { &a } else { &b };
    assert!(verify_sequence(start, path));
}

#[test]
fn no_height_zero_connection_when_signatures_differ() {
    let (a, b) = small_pair();
    assert_ne!(encode(&a).unwrap(), encode(&b).unwrap());
    let result = connect(&[a, b], &cfg(Strategy::Blind, 0)).unwrap();
    assert!(!result.connected);
    assert_eq!(result.height_used, None);
}

#[test]
fn node_limit_terminates_early() {
    let (a, b) = small_pair();
    let mut c = cfg(Strategy::Blind, 4);
    c.node_limit = 1;
    let result = connect(&[a, b], &c).unwrap();
    assert!(result.terminated_early);
    assert!(!result.connected);
}

#[test]
fn monotonic_and_semi_connect_small_pair() {
    let (a, b) = small_pair();
    for strategy in [Strategy::Monotonic, Strategy::SemiMonotonic] {
        let mut c = cfg(strategy, 6);
        c.reconstruct_paths = true;
        let result = connect(&[a.clone(), b.clone()], &c).unwrap();
        assert!(result.connected, "{strategy} failed to connect");
        let paths = result.paths.unwrap();
        assert_eq!(paths.len(), 1);
        let path = &paths[0].sequence;
        let class = classify_sequence(path);
        let strong_enough = match strategy {
            Strategy::Monotonic => class == SequenceClass::Monotonic,
            Strategy::SemiMonotonic => {
                class == SequenceClass::Monotonic || class == SequenceClass::SemiMonotonic
            }
            Strategy::Blind => true,
        };
        assert!(strong_enough, "{strategy} produced class {class:?}");
        let start = if paths[0].from_seed == 0 { &a } else { &b };
        assert!(verify_sequence(start, path));
    }
}

#[test]
fn compare_strategies_reports_nonnegative_gap() {
    let (a, b) = small_pair();
    let report = compare_strategies(&[a, b], 6, 200_000).unwrap();
    assert!(report.blind.connected);
    assert!(report.monotonic.connected);
    assert!(report.semi_monotonic.connected);
    assert!(report.height_gap.unwrap() >= 0);
    assert_eq!(report.blind.nodes_20, 0);
    assert_eq!(report.monotonic.nodes_20, 0);
}

#[test]
fn seed_validation() {
    let t = fixtures::double_tetrahedron();
    let bigger = {
        let sk = Skeleton::compute(&t).unwrap();
        apply(&t, &sk, MoveSite::TwoThree { triangle: 0 }).unwrap()
    };
    assert!(matches!(
        connect(&[t.clone(), bigger], &cfg(Strategy::Blind, 2)),
        Err(SearchError::SeedMismatch(_))
    ));
    assert!(matches!(
        connect(
            &[t.clone(), fixtures::figure_eight()],
            &cfg(Strategy::Blind, 2)
        ),
        Err(SearchError::SeedMismatch(_))
    ));
    assert!(matches!(
        connect(&[fixtures::reversed_edge()], &cfg(Strategy::Blind, 2)),
        Err(SearchError::IneligibleSeed(_))
    ));
    assert!(matches!(
        connect(&[], &cfg(Strategy::Blind, 2)),
        Err(SearchError::SeedMismatch(_))
    ));
}

#[test]
fn scramble_is_deterministic_and_invariant_preserving() {
    let t = fixtures::projective_space();
    let same = scramble(&t, 0, 9, 42).unwrap();
    assert_eq!(encode(&same).unwrap(), encode(&t).unwrap());

    let a = scramble(&t, 8, 9, 1234).unwrap();
    let b = scramble(&t, 8, 9, 1234).unwrap();
    assert_eq!(encode(&a).unwrap(), encode(&b).unwrap());
    assert!(a.size() <= 9);

    let sk_t = Skeleton::compute(&t).unwrap();
    let sk_a = Skeleton::compute(&a).unwrap();
    assert_eq!(
        z2_homology_ranks(&t, &sk_t).unwrap(),
        z2_homology_ranks(&a, &sk_a).unwrap()
    );
    let before = crate::kernel::validate(&t);
    let after = crate::kernel::validate(&a);
    assert_eq!(before.material_vertex_count, after.material_vertex_count);
}

#[test]
fn scramble_fails_when_no_move_fits() {
    // Size cap below any possible 2-3 result and no 3-2 available.
    let t = fixtures::double_tetrahedron();
    assert!(matches!(
        scramble(&t, 1, 2, 0),
        Err(SearchError::NoEligibleMove)
    ));
}

#[test]
fn parallel_mode_matches_deterministic_mode() {
    let (a, b) = small_pair();
    for strategy in [Strategy::Blind, Strategy::Monotonic, Strategy::SemiMonotonic] {
        let serial = connect(&[a.clone(), b.clone()], &cfg(strategy, 4)).unwrap();
        let mut pc = cfg(strategy, 4);
        pc.deterministic = false;
        pc.threads = 4;
        let parallel = connect(&[a.clone(), b.clone()], &pc).unwrap();
        assert_eq!(serial.connected, parallel.connected);
        assert_eq!(serial.height_used, parallel.height_used);
        assert_eq!(serial.nodes_23_32, parallel.nodes_23_32);
        assert_eq!(serial.nodes_20, parallel.nodes_20);
    }
}

#[test]
fn stats_row_format() {
    let result = SearchResult {
        connected: true,
        height_used: Some(2),
        nodes_23_32: 10,
        nodes_20: 1,
        terminated_early: false,
        paths: None,
    };
    assert_eq!(
        stats_csv_row("case7", Strategy::SemiMonotonic, &result, 12),
        "case7,semi-monotonic,true,2,10,1,false,12"
    );
    let unconnected = SearchResult {
        connected: false,
        height_used: None,
        ..result
    };
    assert_eq!(
        stats_csv_row("c", Strategy::Blind, &unconnected, 0),
        "c,blind,false,,10,1,false,0"
    );
}
