use super::{KernelError, Skeleton, Triangulation};

/// The link of a vertex class: the surface obtained by gluing one small
/// triangle per incident tetrahedron corner, with sides identified along the
/// facet gluings. Carries the invariants needed to decide whether the vertex
/// is material (spherical link) or ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexLink {
    pub vertex_class: u32,
    pub triangle_count: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub connected: bool,
    pub boundary_sides: usize,
}

impl VertexLink {
    /// A link is a sphere exactly when it is a connected orientable closed
    /// surface of Euler characteristic 2. (Surfaces with boundary have
    /// characteristic at most 1, so the characteristic test subsumes the
    /// closedness requirement.)
    pub fn is_sphere(&self) -> bool {
        self.connected && self.orientable && self.euler_characteristic == 2
    }

    /// Torus test used by the ideal fixtures.
    pub fn is_torus(&self) -> bool {
        self.connected
            && self.orientable
            && self.euler_characteristic == 0
            && self.boundary_sides == 0
    }
}

/// Computes the link of every vertex class of a closed triangulation, in
/// vertex-class order.
pub fn vertex_links(t: &Triangulation, sk: &Skeleton) -> Result<Vec<VertexLink>, KernelError> {
    t.ensure_closed()?;
    Ok(vertex_links_partial(t, sk))
}

/// Link computation tolerating unglued facets (links may then be surfaces
/// with boundary); `validate` relies on this.
pub(crate) fn vertex_links_partial(t: &Triangulation, sk: &Skeleton) -> Vec<VertexLink> {
    (0..sk.vertex_count() as u32)
        .map(|c| link_of_class(t, sk, c))
        .collect()
}

/// In the reference orientation (w0, w1, w2) of a link triangle whose
/// corners are the ascending labels != v, the side opposite corner
/// `side_label` is directed as returned here.
fn side_direction(corners: [u8; 3], side_label: u8) -> (u8, u8) {
    let [w0, w1, w2] = corners;
    if side_label == w0 {
        (w1, w2)
    } else if side_label == w1 {
        (w2, w0)
    } else {
        (w0, w1)
    }
}

fn corners_of(v: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut i = 0;
    for w in 0..4u8 {
        if w != v {
            out[i] = w;
            i += 1;
        }
    }
    out
}

fn link_of_class(t: &Triangulation, sk: &Skeleton, class: u32) -> VertexLink {
    let members = sk.vertex_members(class);
    let local_index = |tet: u32, v: u8| members.binary_search(&(tet, v)).unwrap();

    // Link vertices are the directed-edge orbits whose tail lies in this
    // class: the corner of triangle (t, v) on the edge towards w is carried
    // around exactly by the maps defining the orbit of the directed edge
    // (v -> w).
    let mut corner_orbits: Vec<u32> = Vec::with_capacity(members.len() * 3);
    for &(tet, v) in members {
        for w in corners_of(v) {
            corner_orbits.push(sk.directed_orbit_of(tet as usize, v, w));
        }
    }
    corner_orbits.sort_unstable();
    corner_orbits.dedup();
    let link_vertices = corner_orbits.len();

    // Sides: one per (member, facet != v); glued in pairs along facet
    // gluings, or boundary when the facet is unglued.
    let mut glued_sides = 0usize;
    let mut boundary_sides = 0usize;
    for &(tet, v) in members {
        for f in corners_of(v) {
            match t.gluing(tet as usize, f) {
                Some(_) => glued_sides += 1,
                None => boundary_sides += 1,
            }
        }
    }
    let link_edges = glued_sides / 2 + boundary_sides;
    let link_faces = members.len();
    let euler = link_vertices as i64 - link_edges as i64 + link_faces as i64;

    // Connectivity and orientability by breadth-first colouring over the
    // side gluings. `color[i]` is +1/-1 relative to the reference
    // orientation; a forced contradiction means non-orientable.
    let mut color: Vec<i8> = vec![0; members.len()];
    let mut connected_pieces = 0usize;
    let mut orientable = true;
    let mut queue = Vec::new();
    for start in 0..members.len() {
        if color[start] != 0 {
            continue;
        }
        connected_pieces += 1;
        color[start] = 1;
        queue.push(start);
        while let Some(i) = queue.pop() {
            let (tet, v) = members[i];
            let corners = corners_of(v);
            for f in corners {
                let Some(g) = t.gluing(tet as usize, f) else { continue };
                let pv = g.map.apply(v);
                let j = local_index(g.tet, pv);
                let (s, e) = side_direction(corners, f);
                let mapped = (g.map.apply(s), g.map.apply(e));
                let dir2 = side_direction(corners_of(pv), g.facet);
                // Coherent orientations induce opposite directions on a
                // shared side: same mapped direction forces opposite colours.
                let same_color = if mapped == dir2 {
                    -color[i]
                } else {
                    debug_assert_eq!(mapped, (dir2.1, dir2.0));
                    color[i]
                };
                if color[j] == 0 {
                    color[j] = same_color;
                    queue.push(j);
                } else if color[j] != same_color {
                    orientable = false;
                }
            }
        }
    }

    VertexLink {
        vertex_class: class,
        triangle_count: members.len(),
        euler_characteristic: euler,
        orientable,
        connected: connected_pieces <= 1,
        boundary_sides,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fixtures;

    #[test]
    fn double_tetrahedron_links_are_spheres() {
        let t = fixtures::double_tetrahedron();
        let sk = Skeleton::compute(&t).unwrap();
        let links = vertex_links(&t, &sk).unwrap();
        assert_eq!(links.len(), 4);
        for l in &links {
            assert_eq!(l.triangle_count, 2);
            assert_eq!(l.euler_characteristic, 2);
            assert!(l.orientable);
            assert!(l.connected);
            assert!(l.is_sphere());
        }
    }

    #[test]
    fn link_triangle_totals_match_corners() {
        let t = fixtures::double_tetrahedron();
        let sk = Skeleton::compute(&t).unwrap();
        let links = vertex_links(&t, &sk).unwrap();
        let total: usize = links.iter().map(|l| l.triangle_count).sum();
        assert_eq!(total, 4 * t.size());
    }

    #[test]
    fn open_triangulation_has_disk_links() {
        // A single unglued tetrahedron: each vertex link is a triangle disk.
        let t = Triangulation::build(1, []).unwrap();
        let sk = Skeleton::compute_partial(&t);
        let links = vertex_links_partial(&t, &sk);
        assert_eq!(links.len(), 4);
        for l in &links {
            assert_eq!(l.euler_characteristic, 1);
            assert_eq!(l.boundary_sides, 3);
            assert!(!l.is_sphere());
        }
        assert!(vertex_links(&t, &sk).is_err());
    }
}
