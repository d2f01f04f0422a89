//! Small reference triangulations used across tests and the CLI examples.
//! Each fixture is stored in the plain-text gluing-table format and parsed
//! on demand, so the text files double as format examples.

use super::Triangulation;

/// Two tetrahedra glued facet-to-facet by the identity on all four facets:
/// a 3-sphere with 4 vertices, 6 edges (all of degree 2) and 4 triangles.
pub fn double_tetrahedron() -> Triangulation {
    Triangulation::parse(include_str!("../../fixtures/double_tetrahedron.txt")).unwrap()
}

/// A one-tetrahedron triangulation whose edge `{0,1}` is identified with
/// itself in reverse; not a pseudo-manifold.
pub fn reversed_edge() -> Triangulation {
    Triangulation::parse(include_str!("../../fixtures/reversed_edge.txt")).unwrap()
}

/// The two-tetrahedron ideal triangulation of the figure-eight knot
/// complement: one vertex with torus link, two edges of degree 6.
pub fn figure_eight() -> Triangulation {
    Triangulation::parse(include_str!("../../fixtures/figure_eight.txt")).unwrap()
}

/// A two-tetrahedron one-vertex triangulation of real projective 3-space.
pub fn projective_space() -> Triangulation {
    Triangulation::parse(include_str!("../../fixtures/projective_space.txt")).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{validate, vertex_links, z2_homology_ranks, Skeleton};

    #[test]
    fn figure_eight_vertex_and_edges() {
        let t = figure_eight();
        let sk = Skeleton::compute(&t).unwrap();
        assert_eq!(sk.vertex_count(), 1);
        assert_eq!(sk.edge_count(), 2);
        let mut degs: Vec<usize> = (0..2).map(|c| sk.edge_degree(c)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![6, 6]);
    }

    #[test]
    fn figure_eight_has_torus_link() {
        let t = figure_eight();
        let sk = Skeleton::compute(&t).unwrap();
        let links = vertex_links(&t, &sk).unwrap();
        assert_eq!(links.len(), 1);
        assert_eq!(links[0].euler_characteristic, 0);
        assert!(links[0].orientable);
        assert!(links[0].connected);
        assert!(links[0].is_torus());
    }

    #[test]
    fn figure_eight_is_ideal_pseudo_manifold() {
        let r = validate(&figure_eight());
        assert!(r.is_pseudo_manifold);
        assert!(!r.is_closed_3_manifold);
        assert_eq!(r.material_vertex_count, 0);
        assert_eq!(r.ideal_vertices.len(), 1);
    }

    #[test]
    fn projective_space_classification_and_homology() {
        let t = projective_space();
        let r = validate(&t);
        assert!(r.is_closed_3_manifold);
        let sk = Skeleton::compute(&t).unwrap();
        assert_eq!(z2_homology_ranks(&t, &sk).unwrap(), (1, 1, 1, 1));
    }
}
