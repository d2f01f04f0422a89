use super::*;
use crate::kernel::fixtures;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn random_relabel(t: &Triangulation, rng: &mut StdRng) -> Triangulation {
    let n = t.size();
    let mut tet_perm: Vec<usize> = (0..n).collect();
    tet_perm.shuffle(rng);
    let vertex_perms: Vec<Perm4> = (0..n)
        .map(|_| Perm4::from_code(rng.random_range(0..24)).unwrap())
        .collect();
    t.relabel(&tet_perm, &vertex_perms)
}

#[test]
fn encode_is_relabeling_invariant() {
    let mut rng = StdRng::seed_from_u64(7);
    for t in [
        fixtures::double_tetrahedron(),
        fixtures::projective_space(),
        fixtures::figure_eight(),
    ] {
        let sig = encode(&t).unwrap();
        for _ in 0..200 {
            let r = random_relabel(&t, &mut rng);
            assert_eq!(encode(&r).unwrap(), sig);
        }
    }
}

#[test]
fn decode_round_trips() {
    for t in [
        fixtures::double_tetrahedron(),
        fixtures::projective_space(),
        fixtures::figure_eight(),
    ] {
        let sig = encode(&t).unwrap();
        let back = decode(sig.as_str()).unwrap();
        assert_eq!(encode(&back).unwrap(), sig);
        assert!(is_isomorphic(&t, &back));
    }
}

#[test]
fn malformed_signatures_are_rejected() {
    assert!(matches!(decode(""), Err(SigError::Malformed(_))));
    assert!(matches!(decode("ab?c"), Err(SigError::Malformed(_))));
    assert!(matches!(decode("b"), Err(SigError::Malformed(_)))); // truncated
    // Trailing garbage after a valid component.
    let sig = encode(&fixtures::double_tetrahedron()).unwrap();
    let padded = format!("{sig}?");
    assert!(decode(&padded).is_err());
    assert!("".parse::<IsoSig>().is_err());
    assert!("ab cd".parse::<IsoSig>().is_err());
}

#[test]
fn empty_triangulation_encodes_as_a() {
    let empty = Triangulation::build(0, []).unwrap();
    let sig = encode(&empty).unwrap();
    assert_eq!(sig.as_str(), "a");
    assert!(decode("a").unwrap().is_empty());
}

#[test]
fn disjoint_unions_encode_componentwise() {
    let t = fixtures::double_tetrahedron();
    let u = fixtures::projective_space();
    let sig_tu = encode(&t.disjoint_union(&u)).unwrap();
    let sig_ut = encode(&u.disjoint_union(&t)).unwrap();
    assert_eq!(sig_tu, sig_ut);
    let back = decode(sig_tu.as_str()).unwrap();
    assert_eq!(back.size(), 4);
    assert_eq!(back.components().0, 2);
    assert_eq!(encode(&back).unwrap(), sig_tu);
}

#[test]
fn non_closed_triangulations_do_not_encode() {
    let open = Triangulation::build(1, []).unwrap();
    assert!(encode(&open).is_err());
}

#[test]
fn isomorphism_oracle_on_relabelings() {
    let mut rng = StdRng::seed_from_u64(11);
    for t in [fixtures::projective_space(), fixtures::figure_eight()] {
        for _ in 0..20 {
            let r = random_relabel(&t, &mut rng);
            assert!(is_isomorphic(&t, &r));
        }
    }
    assert!(!is_isomorphic(
        &fixtures::double_tetrahedron(),
        &fixtures::projective_space()
    ));
}

#[test]
fn isomorphism_oracle_distinguishes_sizes() {
    let t = fixtures::double_tetrahedron();
    let u = t.disjoint_union(&t);
    assert!(!is_isomorphic(&t, &u));
}

#[test]
fn isomorphism_matches_components_across_order() {
    let t = fixtures::double_tetrahedron();
    let u = fixtures::projective_space();
    assert!(is_isomorphic(&t.disjoint_union(&u), &u.disjoint_union(&t)));
    assert!(!is_isomorphic(&t.disjoint_union(&t), &u.disjoint_union(&t)));
}

#[test]
fn canonical_form_is_a_relabeling_fixed_point() {
    let t = fixtures::figure_eight();
    let (canon, tet_perm, vertex_perms) = canonical_form(&t).unwrap();
    assert_eq!(t.relabel(&tet_perm, &vertex_perms), canon);
    assert_eq!(encode(&canon).unwrap(), encode(&t).unwrap());
    // Canonicalising the canonical representative is the identity.
    let (canon2, tet_perm2, vertex_perms2) = canonical_form(&canon).unwrap();
    assert_eq!(canon2, canon);
    assert!(tet_perm2.iter().enumerate().all(|(i, &p)| i == p));
    assert!(vertex_perms2.iter().all(|p| p.is_identity()));
}
