use super::*;
use crate::kernel::{fixtures, validate, z2_homology_ranks, Skeleton};
use crate::sig::encode;

fn skeleton(t: &Triangulation) -> Skeleton {
    Skeleton::compute(t).unwrap()
}

fn sites(t: &Triangulation, kinds: &[MoveKind]) -> Vec<MoveSite> {
    enumerate_moves(t, &skeleton(t), MoveKindSet::of(kinds)).unwrap()
}

#[test]
fn double_tetrahedron_has_four_two_three_sites() {
    let t = fixtures::double_tetrahedron();
    let found = sites(&t, &[MoveKind::M23]);
    assert_eq!(found.len(), 4);
    assert!(found.iter().all(|s| s.kind() == MoveKind::M23));
}

#[test]
fn double_tetrahedron_has_no_three_two_sites() {
    // All six edge classes have degree 2.
    let t = fixtures::double_tetrahedron();
    assert!(sites(&t, &[MoveKind::M32]).is_empty());
}

#[test]
fn two_three_after_effects() {
    let t = fixtures::double_tetrahedron();
    let sk = skeleton(&t);
    let result = apply(&t, &sk, MoveSite::TwoThree { triangle: 0 }).unwrap();
    assert_eq!(result.size(), 3);
    let rsk = skeleton(&result);
    assert_eq!(rsk.vertex_count(), 4);
    let report = validate(&result);
    assert!(report.is_closed_3_manifold);
    assert_eq!(report.material_vertex_count, 4);
    assert_eq!(z2_homology_ranks(&result, &rsk).unwrap(), (1, 0, 0, 1));
}

#[test]
fn created_degree_three_edge_is_an_eligible_inverse() {
    let t = fixtures::double_tetrahedron();
    let sk = skeleton(&t);
    for site in sites(&t, &[MoveKind::M23]) {
        let (result, inverse) = apply_with_inverse(&t, &sk, site).unwrap();
        let inverse = inverse.unwrap();
        assert_eq!(inverse.kind(), MoveKind::M32);
        assert!(sites(&result, &[MoveKind::M32]).contains(&inverse));
    }
}

#[test]
fn two_three_then_three_two_round_trips() {
    let t = fixtures::double_tetrahedron();
    let sk = skeleton(&t);
    let original = encode(&t).unwrap();
    for site in sites(&t, &[MoveKind::M23]) {
        let (mid, inverse) = apply_with_inverse(&t, &sk, site).unwrap();
        let back = apply(&mid, &skeleton(&mid), inverse.unwrap()).unwrap();
        assert_eq!(encode(&back).unwrap(), original);
    }
}

#[test]
fn zero_two_then_two_zero_round_trips() {
    for t in [
        fixtures::double_tetrahedron(),
        fixtures::projective_space(),
        fixtures::figure_eight(),
    ] {
        let sk = skeleton(&t);
        let original = encode(&t).unwrap();
        let zero_two_sites = sites(&t, &[MoveKind::M02]);
        assert!(!zero_two_sites.is_empty());
        for site in zero_two_sites {
            let (mid, inverse) = apply_with_inverse(&t, &sk, site).unwrap();
            assert_eq!(mid.size(), t.size() + 2);
            let inverse = inverse.unwrap();
            assert_eq!(inverse.kind(), MoveKind::M20);
            let back = apply(&mid, &skeleton(&mid), inverse).unwrap();
            assert_eq!(encode(&back).unwrap(), original);
        }
    }
}

#[test]
fn size_deltas_match_kinds() {
    let t = fixtures::figure_eight();
    let sk = skeleton(&t);
    for site in enumerate_moves(&t, &sk, MoveKindSet::ALL).unwrap() {
        let result = apply(&t, &sk, site).unwrap();
        assert_eq!(
            result.size() as i64 - t.size() as i64,
            site.kind().size_delta(),
            "site {site:?}"
        );
    }
}

#[test]
fn every_enumerated_site_preserves_classification() {
    for t in [
        fixtures::double_tetrahedron(),
        fixtures::projective_space(),
        fixtures::figure_eight(),
    ] {
        let sk = skeleton(&t);
        let before = validate(&t);
        for site in enumerate_moves(&t, &sk, MoveKindSet::ALL).unwrap() {
            let result = apply(&t, &sk, site).unwrap();
            let after = validate(&result);
            assert!(after.closed);
            assert_eq!(after.is_closed_3_manifold, before.is_closed_3_manifold);
            assert_eq!(after.is_pseudo_manifold, before.is_pseudo_manifold);
            assert_eq!(after.material_vertex_count, before.material_vertex_count);
            assert_eq!(after.ideal_vertices.len(), before.ideal_vertices.len());
        }
    }
}

#[test]
fn double_tetrahedron_two_zero_would_collapse() {
    // Every degree-2 edge of the double tetrahedron has its flattening
    // pairs glued directly to each other; flattening would collapse the
    // whole component, so no 2-0 site is eligible.
    let t = fixtures::double_tetrahedron();
    assert!(sites(&t, &[MoveKind::M20]).is_empty());
    let sk = skeleton(&t);
    for edge in 0..sk.edge_count() as u32 {
        assert_eq!(
            apply(&t, &sk, MoveSite::TwoZero { edge }),
            Err(MoveError::WouldCreateInvalid)
        );
    }
}

#[test]
fn stale_sites_are_rejected() {
    let t = fixtures::double_tetrahedron();
    let sk = skeleton(&t);
    assert!(matches!(
        apply(&t, &sk, MoveSite::ThreeTwo { edge: 0 }),
        Err(MoveError::IneligibleSite(_))
    ));
    assert!(matches!(
        apply(&t, &sk, MoveSite::TwoThree { triangle: 99 }),
        Err(MoveError::IneligibleSite(_))
    ));
    assert!(matches!(
        apply(&t, &sk, MoveSite::ZeroTwo { edge: 0, slots: (0, 0) }),
        Err(MoveError::IneligibleSite(_))
    ));
}

#[test]
fn moves_require_closed_input() {
    let open = Triangulation::build(1, []).unwrap();
    let sk = Skeleton::compute_partial(&open);
    assert!(enumerate_moves(&open, &sk, MoveKindSet::ALL).is_err());
}

#[test]
fn kind_inverses_pair_up() {
    assert_eq!(MoveKind::M23.inverse(), MoveKind::M32);
    assert_eq!(MoveKind::M32.inverse(), MoveKind::M23);
    assert_eq!(MoveKind::M02.inverse(), MoveKind::M20);
    assert_eq!(MoveKind::M20.inverse(), MoveKind::M02);
}
