use super::{KernelError, Triangulation};

/// Endpoint pairs of the six tetrahedron edges, in slot order.
pub const EDGE_ENDPOINTS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot index of the edge with endpoints `{a, b}`.
pub fn edge_slot(a: u8, b: u8) -> u8 {
    debug_assert!(a != b && a < 4 && b < 4);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!(),
    }
}

/// One appearance of an edge class inside a tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeIncidence {
    pub tet: u32,
    pub slot: u8,
    /// Whether the class's chosen orientation runs from the slot's smaller
    /// endpoint label to the larger one. Meaningless on reversed classes.
    pub forward: bool,
}

/// The derived skeleton of a triangulation: identification classes of
/// vertices, edges and triangles, together with incidence data.
///
/// Classes are numbered deterministically by their least member under
/// `(tetrahedron, slot)` lexicographic order; all move sites and sequence
/// serialisations rely on this ordering.
#[derive(Clone, Debug)]
pub struct Skeleton {
    size: usize,
    vertex_class: Vec<[u32; 4]>,
    edge_class: Vec<[u32; 6]>,
    triangle_class: Vec<[u32; 4]>,
    vertex_members: Vec<Vec<(u32, u8)>>,
    edge_members: Vec<Vec<EdgeIncidence>>,
    triangle_members: Vec<Vec<(u32, u8)>>,
    edge_reversed: Vec<bool>,
    /// Orbit id of each directed edge; used by the link builder, where
    /// directed-edge orbits are exactly link vertices.
    directed_orbit: Vec<u32>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Attach the larger root to the smaller so that the least member
            // of each class is also its root; class numbering reads this off.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    /// Relabels roots to consecutive ids in order of least member.
    fn number_classes(&mut self) -> (usize, Vec<u32>) {
        let n = self.parent.len();
        let mut class = vec![u32::MAX; n];
        let mut count = 0u32;
        for i in 0..n as u32 {
            let r = self.find(i);
            if class[r as usize] == u32::MAX {
                class[r as usize] = count;
                count += 1;
            }
            class[i as usize] = class[r as usize];
        }
        (count as usize, class)
    }
}

impl Skeleton {
    /// Computes the skeleton of a closed triangulation.
    pub fn compute(t: &Triangulation) -> Result<Skeleton, KernelError> {
        t.ensure_closed()?;
        Ok(Self::compute_partial(t))
    }

    /// Orbit computation that also tolerates unglued facets; used internally
    /// by `validate`, which must classify non-closed triangulations too.
    pub(crate) fn compute_partial(t: &Triangulation) -> Skeleton {
        let n = t.size();
        let mut vertices = UnionFind::new(4 * n);
        let mut directed = UnionFind::new(12 * n);
        let mut triangles = UnionFind::new(4 * n);

        for tet in 0..n {
            for f in 0..4u8 {
                let Some(g) = t.gluing(tet, f) else { continue };
                let dest = g.tet as usize;
                triangles.union((tet * 4 + f as usize) as u32, (dest * 4 + g.facet as usize) as u32);
                for v in 0..4u8 {
                    if v == f {
                        continue;
                    }
                    vertices.union(
                        (tet * 4 + v as usize) as u32,
                        (dest * 4 + g.map.apply(v) as usize) as u32,
                    );
                    for w in 0..4u8 {
                        if w == f || w == v {
                            continue;
                        }
                        directed.union(
                            directed_index(tet, v, w),
                            directed_index(dest, g.map.apply(v), g.map.apply(w)),
                        );
                    }
                }
            }
        }

        let (_, vertex_flat) = vertices.number_classes();
        let (_, triangle_flat) = triangles.number_classes();
        let (_, directed_flat) = directed.number_classes();

        // Undirected edge classes: directed orbits merged with their reverses,
        // numbered by least (tet, slot) member.
        let mut edge_flat = vec![u32::MAX; 6 * n];
        let mut edge_reversed_by_class = Vec::new();
        let mut orbit_to_edge = vec![u32::MAX; 12 * n];
        let mut edge_members: Vec<Vec<EdgeIncidence>> = Vec::new();
        for tet in 0..n {
            for slot in 0..6u8 {
                let (a, b) = EDGE_ENDPOINTS[slot as usize];
                let fwd = directed_flat[directed_index(tet, a, b) as usize];
                let bwd = directed_flat[directed_index(tet, b, a) as usize];
                let class = if orbit_to_edge[fwd as usize] != u32::MAX {
                    orbit_to_edge[fwd as usize]
                } else {
                    let class = edge_members.len() as u32;
                    orbit_to_edge[fwd as usize] = class;
                    orbit_to_edge[bwd as usize] = class;
                    edge_members.push(Vec::new());
                    edge_reversed_by_class.push(fwd == bwd);
                    class
                };
                edge_flat[tet * 6 + slot as usize] = class;
                // Orientation convention: the class representative's smaller
                // endpoint -> larger endpoint direction is "forward"; a later
                // member is forward when its canonical direction lies in the
                // same directed orbit as the representative's.
                let rep_fwd = {
                    let first = &edge_members[class as usize];
                    match first.first() {
                        Some(rep) => {
                            let (ra, rb) = EDGE_ENDPOINTS[rep.slot as usize];
                            directed_flat[directed_index(rep.tet as usize, ra, rb) as usize]
                        }
                        None => fwd,
                    }
                };
                edge_members[class as usize].push(EdgeIncidence {
                    tet: tet as u32,
                    slot,
                    forward: fwd == rep_fwd,
                });
            }
        }

        let mut vertex_class = vec![[0u32; 4]; n];
        let mut edge_class = vec![[0u32; 6]; n];
        let mut triangle_class = vec![[0u32; 4]; n];
        for tet in 0..n {
            for v in 0..4 {
                vertex_class[tet][v] = vertex_flat[tet * 4 + v];
            }
            for s in 0..6 {
                edge_class[tet][s] = edge_flat[tet * 6 + s];
            }
            for f in 0..4 {
                triangle_class[tet][f] = triangle_flat[tet * 4 + f];
            }
        }

        let mut vertex_members: Vec<Vec<(u32, u8)>> = Vec::new();
        for tet in 0..n {
            for v in 0..4u8 {
                let c = vertex_class[tet][v as usize] as usize;
                if c >= vertex_members.len() {
                    vertex_members.resize_with(c + 1, Vec::new);
                }
                vertex_members[c].push((tet as u32, v));
            }
        }
        let mut triangle_members: Vec<Vec<(u32, u8)>> = Vec::new();
        for tet in 0..n {
            for f in 0..4u8 {
                let c = triangle_class[tet][f as usize] as usize;
                if c >= triangle_members.len() {
                    triangle_members.resize_with(c + 1, Vec::new);
                }
                triangle_members[c].push((tet as u32, f));
            }
        }

        Skeleton {
            size: n,
            vertex_class,
            edge_class,
            triangle_class,
            vertex_members,
            edge_members,
            triangle_members,
            edge_reversed: edge_reversed_by_class,
            directed_orbit: directed_flat,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_members.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangle_members.len()
    }

    #[inline]
    pub fn vertex_class_of(&self, tet: usize, vertex: u8) -> u32 {
        self.vertex_class[tet][vertex as usize]
    }

    #[inline]
    pub fn edge_class_of(&self, tet: usize, slot: u8) -> u32 {
        self.edge_class[tet][slot as usize]
    }

    #[inline]
    pub fn triangle_class_of(&self, tet: usize, facet: u8) -> u32 {
        self.triangle_class[tet][facet as usize]
    }

    pub fn vertex_members(&self, class: u32) -> &[(u32, u8)] {
        &self.vertex_members[class as usize]
    }

    pub fn edge_members(&self, class: u32) -> &[EdgeIncidence] {
        &self.edge_members[class as usize]
    }

    pub fn triangle_members(&self, class: u32) -> &[(u32, u8)] {
        &self.triangle_members[class as usize]
    }

    /// Number of tetrahedron-edge incidences in the class.
    pub fn edge_degree(&self, class: u32) -> usize {
        self.edge_members[class as usize].len()
    }

    /// Whether the edge class is identified with itself in reverse.
    pub fn edge_is_reversed(&self, class: u32) -> bool {
        self.edge_reversed[class as usize]
    }

    /// Edge classes identified with themselves in reverse.
    pub fn reversed_edges(&self) -> Vec<u32> {
        (0..self.edge_count() as u32)
            .filter(|&c| self.edge_reversed[c as usize])
            .collect()
    }

    pub(crate) fn directed_orbit_of(&self, tet: usize, from: u8, to: u8) -> u32 {
        self.directed_orbit[directed_index(tet, from, to) as usize]
    }

    /// Walks once around an edge class of a closed triangulation.
    ///
    /// Returns `None` when the walk cannot close consistently (reversed
    /// edge classes, or boundary facets on non-closed input). The walk is
    /// deterministic: it starts at the class's least `(tet, slot)` member,
    /// oriented from the slot's smaller endpoint to the larger, and first
    /// exits through the facet with the smaller off-edge label.
    pub fn edge_ring(&self, t: &Triangulation, class: u32) -> Option<EdgeRing> {
        let rep = *self.edge_members[class as usize].first()?;
        let (a, b) = EDGE_ENDPOINTS[rep.slot as usize];
        let (c, d) = off_edge_labels(a, b);
        let degree = self.edge_degree(class);
        let mut steps = Vec::with_capacity(degree);
        let mut tet = rep.tet as usize;
        let (mut tail, mut head, mut enter, mut exit) = (a, b, d, c);
        loop {
            steps.push(RingStep {
                tet: tet as u32,
                tail,
                head,
                enter,
                exit,
            });
            if steps.len() > degree {
                return None;
            }
            let g = t.gluing(tet, exit)?;
            let (nt, nx, ny, nent) = (
                g.tet as usize,
                g.map.apply(tail),
                g.map.apply(head),
                g.map.apply(exit),
            );
            if nt == rep.tet as usize && edge_slot(nx, ny) == rep.slot {
                // Back at the starting incidence. A proper closure arrives
                // with the original direction, through the facet opposite the
                // first exit, having visited every incidence exactly once;
                // anything else signals a reversed identification.
                let ok = (nx, ny) == (a, b) && nent == d && steps.len() == degree;
                return ok.then_some(EdgeRing { steps });
            }
            tet = nt;
            (tail, head, enter, exit) = (nx, ny, nent, other_label(nx, ny, nent));
        }
    }
}

/// One incidence visited while walking around an edge: the tetrahedron, the
/// directed edge endpoints, and the facet labels through which the walk
/// enters and leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RingStep {
    pub tet: u32,
    pub tail: u8,
    pub head: u8,
    pub enter: u8,
    pub exit: u8,
}

/// The closed cyclic walk around an edge class. Transition `j` crosses the
/// gluing between `steps[j].exit` and `steps[j+1].enter` (indices mod
/// length); transitions are the "slots" addressed by 0-2 moves.
#[derive(Clone, Debug)]
pub struct EdgeRing {
    pub steps: Vec<RingStep>,
}

impl EdgeRing {
    pub fn degree(&self) -> usize {
        self.steps.len()
    }

    /// The `(tet, facet)` pair on the exit side of transition `j`.
    pub fn transition_exit(&self, j: usize) -> (u32, u8) {
        let s = &self.steps[j];
        (s.tet, s.exit)
    }

    /// The `(tet, facet)` pair on the enter side of transition `j`.
    pub fn transition_enter(&self, j: usize) -> (u32, u8) {
        let s = &self.steps[(j + 1) % self.steps.len()];
        (s.tet, s.enter)
    }
}

#[inline]
fn directed_index(tet: usize, from: u8, to: u8) -> u32 {
    debug_assert!(from != to);
    // 12 directed edges per tetrahedron: 4*from + to, skipping from == to.
    let local = from as usize * 3 + if to > from { to as usize - 1 } else { to as usize };
    (tet * 12 + local) as u32
}

/// The two labels of `{0,1,2,3}` distinct from both `a` and `b`, ascending.
pub(crate) fn off_edge_labels(a: u8, b: u8) -> (u8, u8) {
    let mut out = [0u8; 2];
    let mut i = 0;
    for v in 0..4u8 {
        if v != a && v != b {
            out[i] = v;
            i += 1;
        }
    }
    (out[0], out[1])
}

#[inline]
fn other_label(a: u8, b: u8, c: u8) -> u8 {
    (0..4u8).find(|&v| v != a && v != b && v != c).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fixtures;

    #[test]
    fn double_tetrahedron_counts() {
        let t = fixtures::double_tetrahedron();
        let sk = Skeleton::compute(&t).unwrap();
        assert_eq!(sk.vertex_count(), 4);
        assert_eq!(sk.edge_count(), 6);
        assert_eq!(sk.triangle_count(), 4);
        for c in 0..sk.edge_count() as u32 {
            assert_eq!(sk.edge_degree(c), 2);
            assert!(!sk.edge_is_reversed(c));
        }
    }

    #[test]
    fn triangle_classes_have_two_members_when_closed() {
        let t = fixtures::double_tetrahedron();
        let sk = Skeleton::compute(&t).unwrap();
        let total: usize = (0..sk.triangle_count() as u32)
            .map(|c| sk.triangle_members(c).len())
            .sum();
        assert_eq!(total, 4 * t.size());
        for c in 0..sk.triangle_count() as u32 {
            assert_eq!(sk.triangle_members(c).len(), 2);
        }
    }

    #[test]
    fn reversed_edge_detected() {
        let t = fixtures::reversed_edge();
        let sk = Skeleton::compute(&t).unwrap();
        let reversed = sk.reversed_edges();
        assert!(!reversed.is_empty());
        // Edge {0,1} of tet 0 (slot 0) must be among the reversed classes.
        assert!(reversed.contains(&sk.edge_class_of(0, 0)));
    }

    #[test]
    fn not_closed_is_reported() {
        let t = Triangulation::build(1, []).unwrap();
        assert!(matches!(Skeleton::compute(&t), Err(KernelError::NotClosed)));
    }

    #[test]
    fn edge_rings_close_with_correct_degree() {
        let t = fixtures::double_tetrahedron();
        let sk = Skeleton::compute(&t).unwrap();
        for c in 0..sk.edge_count() as u32 {
            let ring = sk.edge_ring(&t, c).expect("valid edge should close");
            assert_eq!(ring.degree(), sk.edge_degree(c));
            // Consecutive steps are glued exit -> enter.
            for j in 0..ring.degree() {
                let (ta, fa) = ring.transition_exit(j);
                let g = t.gluing(ta as usize, fa).unwrap();
                let (tb, fb) = ring.transition_enter(j);
                assert_eq!((g.tet, g.facet), (tb, fb));
            }
        }
    }

    #[test]
    fn ring_fails_on_reversed_edge() {
        let t = fixtures::reversed_edge();
        let sk = Skeleton::compute(&t).unwrap();
        for &c in &sk.reversed_edges() {
            assert!(sk.edge_ring(&t, c).is_none());
        }
    }

    #[test]
    fn class_sizes_invariant_under_relabeling() {
        use crate::kernel::Perm4;
        let t = fixtures::double_tetrahedron();
        let sk = Skeleton::compute(&t).unwrap();
        let r = t.relabel(&[1, 0], &[Perm4::from_code(17).unwrap(), Perm4::swap(1, 2)]);
        let sk2 = Skeleton::compute(&r).unwrap();
        assert_eq!(sk.vertex_count(), sk2.vertex_count());
        assert_eq!(sk.edge_count(), sk2.edge_count());
        assert_eq!(sk.triangle_count(), sk2.triangle_count());
        let mut d1: Vec<usize> = (0..sk.edge_count() as u32).map(|c| sk.edge_degree(c)).collect();
        let mut d2: Vec<usize> = (0..sk2.edge_count() as u32).map(|c| sk2.edge_degree(c)).collect();
        d1.sort_unstable();
        d2.sort_unstable();
        assert_eq!(d1, d2);
    }
}
