use super::skeleton::EDGE_ENDPOINTS;
use super::{KernelError, Skeleton, Triangulation};

/// Betti numbers over the two-element field of the chain complex generated
/// by the vertex/edge/triangle/tetrahedron classes of a closed
/// pseudo-manifold, with boundary maps given by mod-2 incidence counts.
///
/// Working mod 2 sidesteps orientation bookkeeping in identified complexes,
/// which is all the move-invariance tests need.
pub fn z2_homology_ranks(
    t: &Triangulation,
    sk: &Skeleton,
) -> Result<(usize, usize, usize, usize), KernelError> {
    t.ensure_closed()?;
    if !sk.reversed_edges().is_empty() {
        return Err(KernelError::InvalidEdge);
    }

    let v = sk.vertex_count();
    let e = sk.edge_count();
    let f = sk.triangle_count();
    let n = t.size();

    // d1: edges -> vertices. Rows indexed by edge class.
    let mut d1 = BitMatrix::new(e, v);
    for class in 0..e as u32 {
        let rep = sk.edge_members(class)[0];
        let (a, b) = EDGE_ENDPOINTS[rep.slot as usize];
        d1.toggle(class as usize, sk.vertex_class_of(rep.tet as usize, a) as usize);
        d1.toggle(class as usize, sk.vertex_class_of(rep.tet as usize, b) as usize);
    }

    // d2: triangles -> edges.
    let mut d2 = BitMatrix::new(f, e);
    for class in 0..f as u32 {
        let (tet, facet) = sk.triangle_members(class)[0];
        let labels: Vec<u8> = (0..4u8).filter(|&x| x != facet).collect();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let slot = super::skeleton::edge_slot(labels[i], labels[j]);
                d2.toggle(class as usize, sk.edge_class_of(tet as usize, slot) as usize);
            }
        }
    }

    // d3: tetrahedra -> triangles.
    let mut d3 = BitMatrix::new(n, f);
    for tet in 0..n {
        for facet in 0..4u8 {
            d3.toggle(tet, sk.triangle_class_of(tet, facet) as usize);
        }
    }

    let r1 = d1.rank();
    let r2 = d2.rank();
    let r3 = d3.rank();

    let b0 = v - r1;
    let b1 = (e - r1) - r2;
    let b2 = (f - r2) - r3;
    let b3 = n - r3;
    Ok((b0, b1, b2, b3))
}

/// Dense GF(2) matrix with 64-bit packed rows; only rank is ever needed.
struct BitMatrix {
    rows: Vec<Vec<u64>>,
    words: usize,
}

impl BitMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix {
            rows: vec![vec![0u64; words]; rows],
            words,
        }
    }

    fn toggle(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] ^= 1u64 << (c % 64);
    }

    fn rank(mut self) -> usize {
        let mut rank = 0;
        let nrows = self.rows.len();
        for col in 0..self.words * 64 {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..nrows).find(|&r| self.rows[r][w] & bit != 0) else {
                continue;
            };
            self.rows.swap(rank, pivot);
            for r in 0..nrows {
                if r != rank && self.rows[r][w] & bit != 0 {
                    let (pivot_row, other) = if r < rank {
                        let (lo, hi) = self.rows.split_at_mut(rank);
                        (&hi[0], &mut lo[r])
                    } else {
                        let (lo, hi) = self.rows.split_at_mut(r);
                        (&lo[rank], &mut hi[0])
                    };
                    for i in 0..pivot_row.len() {
                        other[i] ^= pivot_row[i];
                    }
                }
            }
            rank += 1;
            if rank == nrows {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fixtures;

    #[test]
    fn three_sphere_ranks() {
        let t = fixtures::double_tetrahedron();
        let sk = Skeleton::compute(&t).unwrap();
        assert_eq!(z2_homology_ranks(&t, &sk).unwrap(), (1, 0, 0, 1));
    }

    #[test]
    fn ranks_add_over_disjoint_union() {
        let t = fixtures::double_tetrahedron();
        let u = t.disjoint_union(&t);
        let sk = Skeleton::compute(&u).unwrap();
        assert_eq!(z2_homology_ranks(&u, &sk).unwrap(), (2, 0, 0, 2));
    }

    #[test]
    fn invalid_edges_are_rejected() {
        let t = fixtures::reversed_edge();
        let sk = Skeleton::compute(&t).unwrap();
        assert!(matches!(
            z2_homology_ranks(&t, &sk),
            Err(KernelError::InvalidEdge)
        ));
    }

    #[test]
    fn open_triangulations_are_rejected() {
        let t = Triangulation::build(1, []).unwrap();
        let sk = Skeleton::compute_partial(&t);
        assert!(matches!(
            z2_homology_ranks(&t, &sk),
            Err(KernelError::NotClosed)
        ));
    }
}
