use super::link::vertex_links_partial;
use super::{Skeleton, Triangulation};

/// Total classification of a triangulation: closed 3-manifold,
/// pseudo-manifold (closed, no reversed edges, but possibly ideal vertices),
/// or invalid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub closed: bool,
    /// Edge classes identified with themselves in reverse.
    pub invalid_edges: Vec<u32>,
    /// Vertex classes whose link is not a sphere.
    pub ideal_vertices: Vec<u32>,
    pub material_vertex_count: usize,
    pub is_closed_3_manifold: bool,
    pub is_pseudo_manifold: bool,
}

/// Classifies a triangulation. Never fails: the report carries all failure
/// modes, and non-closed input simply classifies as neither a closed
/// 3-manifold nor a pseudo-manifold.
pub fn validate(t: &Triangulation) -> ValidityReport {
    let sk = Skeleton::compute_partial(t);
    validate_with_skeleton(t, &sk)
}

pub(crate) fn validate_with_skeleton(t: &Triangulation, sk: &Skeleton) -> ValidityReport {
    let closed = t.is_closed();
    let invalid_edges = sk.reversed_edges();
    let links = vertex_links_partial(t, sk);
    let ideal_vertices: Vec<u32> = links
        .iter()
        .filter(|l| !l.is_sphere())
        .map(|l| l.vertex_class)
        .collect();
    let material_vertex_count = links.len() - ideal_vertices.len();
    ValidityReport {
        closed,
        is_closed_3_manifold: closed && invalid_edges.is_empty() && ideal_vertices.is_empty(),
        is_pseudo_manifold: closed && invalid_edges.is_empty(),
        invalid_edges,
        ideal_vertices,
        material_vertex_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fixtures;

    #[test]
    fn double_tetrahedron_is_a_closed_manifold() {
        let r = validate(&fixtures::double_tetrahedron());
        assert!(r.is_closed_3_manifold);
        assert!(r.is_pseudo_manifold);
        assert_eq!(r.material_vertex_count, 4);
        assert!(r.invalid_edges.is_empty());
        assert!(r.ideal_vertices.is_empty());
    }

    #[test]
    fn reversed_edge_is_invalid() {
        let r = validate(&fixtures::reversed_edge());
        assert!(!r.invalid_edges.is_empty());
        assert!(!r.is_closed_3_manifold);
        assert!(!r.is_pseudo_manifold);
    }

    #[test]
    fn open_triangulation_classifies_as_neither() {
        let t = Triangulation::build(1, []).unwrap();
        let r = validate(&t);
        assert!(!r.closed);
        assert!(!r.is_closed_3_manifold);
        assert!(!r.is_pseudo_manifold);
    }
}
