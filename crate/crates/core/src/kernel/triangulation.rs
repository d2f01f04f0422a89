use std::fmt;

use super::{KernelError, Perm4, MAX_TETRAHEDRA};

/// One side of a facet identification: the destination tetrahedron/facet and
/// the affine map carrying source vertex labels to destination labels.
///
/// The map is a permutation of all four labels with `map(source_facet) ==
/// facet`, which forces the three vertices of the source facet onto the
/// three vertices of the destination facet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: u32,
    pub facet: u8,
    pub map: Perm4,
}

/// A generalised triangulation: `n` tetrahedra whose facets are affinely
/// identified in pairs. Entries may be empty only while a triangulation is
/// being assembled; all moves and searches require a closed triangulation.
///
/// Triangulations are immutable once built: every mutation (moves, relabel,
/// disjoint union) produces a fresh value, so instances can be shared freely
/// across threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    tets: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    /// Builds a triangulation from a list of proposed gluings.
    ///
    /// Each entry glues `(tet, facet)` to `gluing`. The reverse gluing is
    /// filled in automatically; if both directions are listed they must be
    /// mutually inverse. Rejects out-of-range indices, facets glued to
    /// themselves, maps that do not send facet to facet, and conflicting
    /// assignments.
    pub fn build(
        size: usize,
        gluings: impl IntoIterator<Item = (usize, u8, Gluing)>,
    ) -> Result<Triangulation, KernelError> {
        if size > MAX_TETRAHEDRA {
            return Err(KernelError::TooLarge(size));
        }
        let mut tets = vec![[None; 4]; size];
        for (tet, facet, g) in gluings {
            if tet >= size || facet >= 4 || (g.tet as usize) >= size || g.facet >= 4 {
                return Err(KernelError::IndexOutOfRange {
                    tet: tet.max(g.tet as usize),
                    facet: facet.max(g.facet) as usize,
                });
            }
            if g.map.apply(facet) != g.facet {
                return Err(KernelError::BadFacetMap {
                    src: facet as usize,
                    dst: g.facet as usize,
                });
            }
            if (g.tet as usize, g.facet) == (tet, facet) {
                return Err(KernelError::FacetSelfGluing {
                    tet,
                    facet: facet as usize,
                });
            }
            let reverse = Gluing {
                tet: tet as u32,
                facet,
                map: g.map.inverse(),
            };
            for (side_tet, side_facet, side_val) in
                [(tet, facet, g), (g.tet as usize, g.facet, reverse)]
            {
                let slot = &mut tets[side_tet][side_facet as usize];
                match slot {
                    None => *slot = Some(side_val),
                    Some(existing) if *existing == side_val => {}
                    Some(_) => {
                        return Err(KernelError::InconsistentGluing {
                            a: tet,
                            fa: facet as usize,
                            b: g.tet as usize,
                            fb: g.facet as usize,
                        })
                    }
                }
            }
        }
        Ok(Triangulation { tets })
    }

    /// Assembles a triangulation directly from a full gluing table.
    /// Validates the same invariants as [`Triangulation::build`].
    pub fn from_table(tets: Vec<[Option<Gluing>; 4]>) -> Result<Triangulation, KernelError> {
        let size = tets.len();
        let gluings = tets.iter().enumerate().flat_map(|(t, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(f, g)| g.map(|g| (t, f as u8, g)))
        });
        let built = Triangulation::build(size, gluings.collect::<Vec<_>>())?;
        // `build` fills reverse entries; reject tables whose explicit entries
        // disagree with the induced ones (non-involutive input).
        if built.tets != tets {
            for (t, row) in tets.iter().enumerate() {
                for (f, g) in row.iter().enumerate() {
                    if built.tets[t][f] != *g {
                        let b = g.or(built.tets[t][f]).unwrap();
                        return Err(KernelError::InconsistentGluing {
                            a: t,
                            fa: f,
                            b: b.tet as usize,
                            fb: b.facet as usize,
                        });
                    }
                }
            }
        }
        Ok(built)
    }

    pub fn size(&self) -> usize {
        self.tets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    /// The gluing attached to `(tet, facet)`, or `None` on an unglued facet.
    #[inline]
    pub fn gluing(&self, tet: usize, facet: u8) -> Option<Gluing> {
        self.tets[tet][facet as usize]
    }

    /// A triangulation is closed when every facet is glued.
    pub fn is_closed(&self) -> bool {
        self.tets
            .iter()
            .all(|row| row.iter().all(|g| g.is_some()))
    }

    pub fn ensure_closed(&self) -> Result<(), KernelError> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(KernelError::NotClosed)
        }
    }

    /// Relabels tetrahedra by `tet_perm` (old index -> new index) and the
    /// vertices of each old tetrahedron `t` by `vertex_perms[t]`. The result
    /// is isomorphic to `self` by construction.
    pub fn relabel(&self, tet_perm: &[usize], vertex_perms: &[Perm4]) -> Triangulation {
        let n = self.size();
        assert_eq!(tet_perm.len(), n);
        assert_eq!(vertex_perms.len(), n);
        let mut tets = vec![[None; 4]; n];
        for t in 0..n {
            let phi = vertex_perms[t];
            for f in 0..4u8 {
                if let Some(g) = self.tets[t][f as usize] {
                    let d = g.tet as usize;
                    let psi = vertex_perms[d];
                    let new_map = psi.compose(g.map).compose(phi.inverse());
                    tets[tet_perm[t]][phi.apply(f) as usize] = Some(Gluing {
                        tet: tet_perm[d] as u32,
                        facet: psi.apply(g.facet),
                        map: new_map,
                    });
                }
            }
        }
        Triangulation { tets }
    }

    /// The disjoint union of two triangulations (the second one's indices
    /// are shifted past the first).
    pub fn disjoint_union(&self, other: &Triangulation) -> Triangulation {
        let offset = self.size() as u32;
        let mut tets = self.tets.clone();
        tets.extend(other.tets.iter().map(|row| {
            row.map(|g| {
                g.map(|g| Gluing {
                    tet: g.tet + offset,
                    ..g
                })
            })
        }));
        Triangulation { tets }
    }

    /// Connected components of the face-pairing graph, as a map from
    /// tetrahedron to component id (components numbered by least member).
    pub fn components(&self) -> (usize, Vec<u32>) {
        let n = self.size();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != u32::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(t) = stack.pop() {
                for f in 0..4 {
                    if let Some(g) = self.tets[t][f] {
                        let d = g.tet as usize;
                        if comp[d] == u32::MAX {
                            comp[d] = count;
                            stack.push(d);
                        }
                    }
                }
            }
            count += 1;
        }
        (count as usize, comp)
    }

    /// Extracts the sub-triangulation induced by `tet_ids` (which must be
    /// closed under gluings); tetrahedra are re-indexed in the given order.
    pub fn restrict(&self, tet_ids: &[usize]) -> Triangulation {
        let mut new_index = vec![u32::MAX; self.size()];
        for (i, &t) in tet_ids.iter().enumerate() {
            new_index[t] = i as u32;
        }
        let tets = tet_ids
            .iter()
            .map(|&t| {
                self.tets[t].map(|g| {
                    g.map(|g| {
                        debug_assert_ne!(new_index[g.tet as usize], u32::MAX);
                        Gluing {
                            tet: new_index[g.tet as usize],
                            ..g
                        }
                    })
                })
            })
            .collect();
        Triangulation { tets }
    }

    /// Parses the plain-text gluing-table format: one line per tetrahedron
    /// with four whitespace-separated entries `destTet:destFacet:permCode`,
    /// `_` for an unglued facet, `#` starting a comment line.
    pub fn parse(text: &str) -> Result<Triangulation, KernelError> {
        let mut rows: Vec<[Option<Gluing>; 4]> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| KernelError::Parse {
                line: lineno + 1,
                msg,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(err(format!("expected 4 entries, found {}", fields.len())));
            }
            let mut row = [None; 4];
            for (f, field) in fields.iter().enumerate() {
                if *field == "_" {
                    continue;
                }
                let parts: Vec<&str> = field.split(':').collect();
                if parts.len() != 3 {
                    return Err(err(format!("bad entry `{field}`")));
                }
                let tet: u32 = parts[0]
                    .parse()
                    .map_err(|_| err(format!("bad tetrahedron index `{}`", parts[0])))?;
                let facet: u8 = parts[1]
                    .parse()
                    .ok()
                    .filter(|v| *v < 4)
                    .ok_or_else(|| err(format!("bad facet `{}`", parts[1])))?;
                let code: u8 = parts[2]
                    .parse()
                    .ok()
                    .filter(|v| *v < 24)
                    .ok_or_else(|| err(format!("bad permutation code `{}`", parts[2])))?;
                row[f] = Some(Gluing {
                    tet,
                    facet,
                    map: Perm4::from_code(code).unwrap(),
                });
            }
            rows.push(row);
        }
        Triangulation::from_table(rows)
    }

    /// Renders the triangulation in the plain-text gluing-table format
    /// accepted by [`Triangulation::parse`].
    pub fn to_table_text(&self) -> String {
        let mut out = String::new();
        for row in &self.tets {
            let mut first = true;
            for g in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                match g {
                    Some(g) => {
                        out.push_str(&format!("{}:{}:{}", g.tet, g.facet, g.map.code()))
                    }
                    None => out.push('_'),
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Triangulation[{} tets]\n{}", self.size(), self.to_table_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fixtures;

    #[test]
    fn double_tetrahedron_is_closed_and_involutive() {
        let t = fixtures::double_tetrahedron();
        assert_eq!(t.size(), 2);
        assert!(t.is_closed());
        for tet in 0..2 {
            for f in 0..4u8 {
                let g = t.gluing(tet, f).unwrap();
                let back = t.gluing(g.tet as usize, g.facet).unwrap();
                assert_eq!(back.tet as usize, tet);
                assert_eq!(back.facet, f);
                assert_eq!(back.map, g.map.inverse());
                assert_ne!((g.tet as usize, g.facet), (tet, f));
            }
        }
    }

    #[test]
    fn empty_gluing_list_gives_open_triangulation() {
        let t = Triangulation::build(1, []).unwrap();
        assert_eq!(t.size(), 1);
        assert!(!t.is_closed());
        assert_eq!((0..4).filter(|&f| t.gluing(0, f).is_none()).count(), 4);
    }

    #[test]
    fn facet_self_gluing_rejected() {
        let g = Gluing {
            tet: 0,
            facet: 0,
            map: Perm4::IDENTITY,
        };
        let err = Triangulation::build(1, [(0usize, 0u8, g)]).unwrap_err();
        assert!(matches!(err, KernelError::FacetSelfGluing { .. }));
    }

    #[test]
    fn non_involutive_table_rejected() {
        // Facet 0 of tet 0 -> tet 1 facet 0, but tet 1 facet 0 -> tet 0 facet 1.
        let id = Perm4::IDENTITY;
        let sw = Perm4::swap(0, 1);
        let table = vec![
            [
                Some(Gluing { tet: 1, facet: 0, map: id }),
                None,
                None,
                None,
            ],
            [
                Some(Gluing { tet: 0, facet: 1, map: sw }),
                None,
                None,
                None,
            ],
        ];
        assert!(Triangulation::from_table(table).is_err());
    }

    #[test]
    fn bad_facet_map_rejected() {
        // swap(2,3) maps facet 0 to 0, not to facet 1.
        let g = Gluing {
            tet: 1,
            facet: 1,
            map: Perm4::swap(2, 3),
        };
        let err = Triangulation::build(2, [(0usize, 0u8, g)]).unwrap_err();
        assert!(matches!(err, KernelError::BadFacetMap { .. }));
    }

    #[test]
    fn parse_round_trip() {
        let t = fixtures::double_tetrahedron();
        let text = t.to_table_text();
        let back = Triangulation::parse(&text).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Triangulation::parse("1:0:0 nonsense 1:2:0 1:3:0").is_err());
        assert!(Triangulation::parse("1:0:99 1:1:0 1:2:0 1:3:0").is_err());
        assert!(Triangulation::parse("1:0:0 1:1:0 1:2:0").is_err());
    }

    #[test]
    fn relabel_preserves_closedness() {
        let t = fixtures::double_tetrahedron();
        let r = t.relabel(&[1, 0], &[Perm4::swap(0, 3), Perm4::from_code(9).unwrap()]);
        assert!(r.is_closed());
        assert_eq!(r.size(), 2);
        // Relabeling by inverse data round-trips.
        let inv_perms = [Perm4::from_code(9).unwrap().inverse(), Perm4::swap(0, 3).inverse()];
        let back = r.relabel(&[1, 0], &inv_perms);
        assert_eq!(back, t);
    }

    #[test]
    fn components_of_disjoint_union() {
        let t = fixtures::double_tetrahedron();
        let u = t.disjoint_union(&t);
        let (count, comp) = u.components();
        assert_eq!(count, 2);
        assert_eq!(comp, vec![0, 0, 1, 1]);
    }
}
