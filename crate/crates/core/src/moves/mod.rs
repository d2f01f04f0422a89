//! The four elementary moves on closed triangulations.
//!
//! * 2-3: replace two distinct tetrahedra sharing a triangle with three
//!   tetrahedra around a new degree-3 edge.
//! * 3-2: the inverse, at a degree-3 edge whose incidences lie in three
//!   distinct tetrahedra.
//! * 0-2: cut the book of tetrahedra around an edge open at two distinct
//!   transitions and insert a two-tetrahedron pillow, splitting the edge and
//!   creating a new degree-2 edge.
//! * 2-0: the inverse, flattening the pillow around a degree-2 edge.
//!
//! Sites are addressed by skeleton-class indices of the specific
//! triangulation they were enumerated on; the deterministic class numbering
//! makes sequences replayable.

mod sequence;

pub use sequence::{
    classify_sequence, classify_kinds, verify_sequence, verify_sequence_detailed, MoveSequence,
    SequenceClass, VerifyFailure,
};

use crate::kernel::{
    edge_slot, validate, Gluing, KernelError, Perm4, RingStep, Skeleton, Triangulation,
};
use thiserror::Error;

/// The kind of an elementary move, named by its tetrahedron-count effect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    M23,
    M32,
    M02,
    M20,
}

impl MoveKind {
    pub fn inverse(self) -> MoveKind {
        match self {
            MoveKind::M23 => MoveKind::M32,
            MoveKind::M32 => MoveKind::M23,
            MoveKind::M02 => MoveKind::M20,
            MoveKind::M20 => MoveKind::M02,
        }
    }

    /// Tetrahedron-count delta of applying a move of this kind.
    pub fn size_delta(self) -> i64 {
        match self {
            MoveKind::M23 => 1,
            MoveKind::M32 => -1,
            MoveKind::M02 => 2,
            MoveKind::M20 => -2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::M23 => "M23",
            MoveKind::M32 => "M32",
            MoveKind::M02 => "M02",
            MoveKind::M20 => "M20",
        }
    }
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of move kinds, for filtering enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveKindSet(u8);

impl MoveKindSet {
    pub const NONE: MoveKindSet = MoveKindSet(0);
    pub const ALL: MoveKindSet = MoveKindSet(0b1111);
    pub const UP_DOWN: MoveKindSet = MoveKindSet(0b0011); // 2-3 and 3-2

    pub fn of(kinds: &[MoveKind]) -> MoveKindSet {
        kinds.iter().fold(MoveKindSet::NONE, |s, &k| s.with(k))
    }

    pub fn with(self, kind: MoveKind) -> MoveKindSet {
        MoveKindSet(self.0 | 1 << kind as u8)
    }

    pub fn contains(self, kind: MoveKind) -> bool {
        self.0 & (1 << kind as u8) != 0
    }
}

/// A located, eligible elementary move on a specific triangulation.
///
/// Loci refer to skeleton-class indices of the triangulation the site was
/// enumerated on; 0-2 sites also carry the two distinct transition indices
/// of the edge's deterministic ring walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveSite {
    TwoThree { triangle: u32 },
    ThreeTwo { edge: u32 },
    ZeroTwo { edge: u32, slots: (u16, u16) },
    TwoZero { edge: u32 },
}

impl MoveSite {
    pub fn kind(self) -> MoveKind {
        match self {
            MoveSite::TwoThree { .. } => MoveKind::M23,
            MoveSite::ThreeTwo { .. } => MoveKind::M32,
            MoveSite::ZeroTwo { .. } => MoveKind::M02,
            MoveSite::TwoZero { .. } => MoveKind::M20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("site is not eligible: {0}")]
    IneligibleSite(String),
    #[error("2-0 move would produce an invalid or degenerate triangulation")]
    WouldCreateInvalid,
}

/// Enumerates every eligible site of the requested kinds, in deterministic
/// order: kinds in the order 2-3, 3-2, 0-2, 2-0; within a kind by class
/// index (and lexicographic slot pairs for 0-2 sites).
///
/// Requires a closed pseudo-manifold.
pub fn enumerate_moves(
    t: &Triangulation,
    sk: &Skeleton,
    kinds: MoveKindSet,
) -> Result<Vec<MoveSite>, MoveError> {
    t.ensure_closed()?;
    if !sk.reversed_edges().is_empty() {
        return Err(MoveError::Kernel(KernelError::InvalidEdge));
    }
    let mut out = Vec::new();
    if kinds.contains(MoveKind::M23) {
        for class in 0..sk.triangle_count() as u32 {
            if two_three_eligible(sk, class) {
                out.push(MoveSite::TwoThree { triangle: class });
            }
        }
    }
    if kinds.contains(MoveKind::M32) {
        for class in 0..sk.edge_count() as u32 {
            if three_two_frame(t, sk, class).is_some() {
                out.push(MoveSite::ThreeTwo { edge: class });
            }
        }
    }
    if kinds.contains(MoveKind::M02) {
        for class in 0..sk.edge_count() as u32 {
            let degree = sk.edge_degree(class);
            if degree < 2 {
                continue;
            }
            let Some(ring) = sk.edge_ring(t, class) else { continue };
            for s in 0..degree as u16 {
                for tt in (s + 1)..degree as u16 {
                    if zero_two_eligible(sk, &ring, s, tt) {
                        out.push(MoveSite::ZeroTwo {
                            edge: class,
                            slots: (s, tt),
                        });
                    }
                }
            }
        }
    }
    if kinds.contains(MoveKind::M20) {
        for class in 0..sk.edge_count() as u32 {
            if try_two_zero(t, sk, class).is_ok() {
                out.push(MoveSite::TwoZero { edge: class });
            }
        }
    }
    Ok(out)
}

/// Applies an eligible move, returning the new triangulation. The input is
/// never mutated. Fails with `IneligibleSite` when the site does not
/// currently satisfy its eligibility conditions and with
/// `WouldCreateInvalid` for a 2-0 site whose formal application would break
/// validity (such sites are already excluded by `enumerate_moves`).
pub fn apply(t: &Triangulation, sk: &Skeleton, site: MoveSite) -> Result<Triangulation, MoveError> {
    t.ensure_closed()?;
    match site {
        MoveSite::TwoThree { triangle } => two_three(t, sk, triangle),
        MoveSite::ThreeTwo { edge } => three_two(t, sk, edge),
        MoveSite::ZeroTwo { edge, slots } => zero_two(t, sk, edge, slots),
        MoveSite::TwoZero { edge } => try_two_zero(t, sk, edge),
    }
}

/// Like [`apply`], but also locates the inverse move on the result:
/// * a 2-3 move returns the 3-2 site at the created degree-3 edge,
/// * a 3-2 move returns the 2-3 site at the created triangle,
/// * a 0-2 move returns the 2-0 site at the created degree-2 edge,
/// * a 2-0 move returns no site (nothing reconstructs its 0-2 inverse
///   cheaply, and no caller reverses 2-0 steps).
pub fn apply_with_inverse(
    t: &Triangulation,
    sk: &Skeleton,
    site: MoveSite,
) -> Result<(Triangulation, Option<MoveSite>), MoveError> {
    let result = apply(t, sk, site)?;
    let inverse = match site {
        MoveSite::TwoThree { .. } => {
            // The central edge is edge {0,1} of the first new tetrahedron,
            // which sits at index size-3 of the result.
            let rsk = Skeleton::compute(&result)?;
            let tet = result.size() - 3;
            Some(MoveSite::ThreeTwo {
                edge: rsk.edge_class_of(tet, edge_slot(0, 1)),
            })
        }
        MoveSite::ThreeTwo { .. } => {
            // The created triangle is facet 3 of the next-to-last tet.
            let rsk = Skeleton::compute(&result)?;
            let tet = result.size() - 2;
            Some(MoveSite::TwoThree {
                triangle: rsk.triangle_class_of(tet, 3),
            })
        }
        MoveSite::ZeroTwo { .. } => {
            // The pillow's internal degree-2 edge is edge {2,3} of the first
            // new tetrahedron.
            let rsk = Skeleton::compute(&result)?;
            let tet = result.size() - 2;
            Some(MoveSite::TwoZero {
                edge: rsk.edge_class_of(tet, edge_slot(2, 3)),
            })
        }
        MoveSite::TwoZero { .. } => None,
    };
    Ok((result, inverse))
}

fn ineligible(msg: impl Into<String>) -> MoveError {
    MoveError::IneligibleSite(msg.into())
}

// ---------------------------------------------------------------------------
// 2-3

fn two_three_eligible(sk: &Skeleton, class: u32) -> bool {
    if class as usize >= sk.triangle_count() {
        return false;
    }
    let members = sk.triangle_members(class);
    members.len() == 2 && members[0].0 != members[1].0
}

fn two_three(t: &Triangulation, sk: &Skeleton, class: u32) -> Result<Triangulation, MoveError> {
    if !two_three_eligible(sk, class) {
        return Err(ineligible(format!(
            "2-3 needs a triangle class spanning two distinct tetrahedra (class {class})"
        )));
    }
    let (a, fa) = sk.triangle_members(class)[0];
    let g = t.gluing(a as usize, fa).expect("closed");
    let (b, _fb) = (g.tet, g.facet);

    // Triangle vertices in ascending label order on the A side, carried to
    // the B side by the gluing. Apexes are the facet labels themselves.
    let av: Vec<u8> = (0..4u8).filter(|&x| x != fa).collect();
    let bv: Vec<u8> = av.iter().map(|&x| g.map.apply(x)).collect();

    // New tet k holds (apexA, apexB, v_k, v_{k+1}); interface maps carry the
    // six boundary triangles of the bipyramid onto the new tetrahedra.
    let mut interface = Vec::with_capacity(6);
    for k in 0..3 {
        let k1 = (k + 1) % 3;
        let k2 = (k + 2) % 3;
        // Facet opposite triangle vertex v_k on the A side lands in new tet
        // k+1 as facet 1; on the B side as facet 0.
        let mut ia = [0u8; 4];
        ia[fa as usize] = 0;
        ia[av[k] as usize] = 1;
        ia[av[k1] as usize] = 2;
        ia[av[k2] as usize] = 3;
        interface.push(((a, av[k]), (k1, Perm4::from_images(ia))));
        let mut ib = [0u8; 4];
        ib[g.map.apply(fa) as usize] = 1;
        ib[bv[k] as usize] = 0;
        ib[bv[k1] as usize] = 2;
        ib[bv[k2] as usize] = 3;
        interface.push(((b, bv[k]), (k1, Perm4::from_images(ib))));
    }

    let glue_internal = Perm4::from_images([0, 1, 3, 2]);
    let internal = (0..3)
        .map(|k| (k, 2u8, (k + 1) % 3, 3u8, glue_internal))
        .collect();

    Ok(rebuild(
        t,
        &mut [a as usize, b as usize],
        3,
        internal,
        interface,
    ))
}

// ---------------------------------------------------------------------------
// 3-2

/// The three ring steps of an eligible 3-2 site, or None.
fn three_two_frame(t: &Triangulation, sk: &Skeleton, class: u32) -> Option<Vec<RingStep>> {
    if class as usize >= sk.edge_count() || sk.edge_degree(class) != 3 {
        return None;
    }
    let ring = sk.edge_ring(t, class)?;
    let tets: Vec<u32> = ring.steps.iter().map(|s| s.tet).collect();
    (tets[0] != tets[1] && tets[0] != tets[2] && tets[1] != tets[2]).then_some(ring.steps)
}

fn three_two(t: &Triangulation, sk: &Skeleton, class: u32) -> Result<Triangulation, MoveError> {
    let steps = three_two_frame(t, sk, class).ok_or_else(|| {
        ineligible(format!(
            "3-2 needs a degree-3 edge spanning three distinct tetrahedra (class {class})"
        ))
    })?;

    // New tet 0 carries the central triangle (v0, v1, v2) with the tail-side
    // apex as vertex 3; new tet 1 is the head-side copy. In ring step k the
    // ring vertices are v_k = exit label and v_{k+1} = enter label.
    let mut removed: Vec<usize> = steps.iter().map(|s| s.tet as usize).collect();
    let mut interface = Vec::with_capacity(6);
    for (k, s) in steps.iter().enumerate() {
        let k1 = ((k + 1) % 3) as u8;
        let k2 = ((k + 2) % 3) as u8;
        let mut to_tail_side = [0u8; 4];
        to_tail_side[s.tail as usize] = 3;
        to_tail_side[s.exit as usize] = k as u8;
        to_tail_side[s.enter as usize] = k1;
        to_tail_side[s.head as usize] = k2;
        interface.push(((s.tet, s.head), (0usize, Perm4::from_images(to_tail_side))));
        let mut to_head_side = [0u8; 4];
        to_head_side[s.head as usize] = 3;
        to_head_side[s.exit as usize] = k as u8;
        to_head_side[s.enter as usize] = k1;
        to_head_side[s.tail as usize] = k2;
        interface.push(((s.tet, s.tail), (1usize, Perm4::from_images(to_head_side))));
    }

    let internal = vec![(0usize, 3u8, 1usize, 3u8, Perm4::IDENTITY)];
    Ok(rebuild(t, &mut removed, 2, internal, interface))
}

// ---------------------------------------------------------------------------
// generic replacement of a removed region by new tetrahedra

/// Rebuilds a triangulation after removing `removed` and appending
/// `new_count` fresh tetrahedra.
///
/// `internal` glues new tets among themselves: `(local_a, facet_a, local_b,
/// facet_b, map a->b)` in new-tet labels. `interface` maps each boundary
/// facet of the removed region, keyed by its old `(tet, facet)`, to `(local
/// new tet, psi)` where `psi` sends old vertex labels of that tetrahedron to
/// new labels (so the slot becomes facet `psi(facet)` of the new tet).
/// Every facet of a removed tetrahedron must either appear in `interface`
/// or be glued to another removed tetrahedron's non-interface facet
/// (consumed interior).
fn rebuild(
    t: &Triangulation,
    removed: &mut [usize],
    new_count: usize,
    internal: Vec<(usize, u8, usize, u8, Perm4)>,
    interface: Vec<((u32, u8), (usize, Perm4))>,
) -> Triangulation {
    removed.sort_unstable();
    let n = t.size();
    let survivors = n - removed.len();
    let mut new_of_old = vec![u32::MAX; n];
    {
        let mut next = 0u32;
        let mut rm = removed.iter().peekable();
        for old in 0..n {
            if rm.peek() == Some(&&old) {
                rm.next();
                continue;
            }
            new_of_old[old] = next;
            next += 1;
        }
    }
    let new_tet_index = |local: usize| (survivors + local) as u32;
    let find_interface = |key: (u32, u8)| -> Option<&(usize, Perm4)> {
        interface.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    };

    let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; survivors + new_count];

    // Surviving tetrahedra, with gluings into the removed region redirected
    // through the interface maps.
    for old in 0..n {
        let new = new_of_old[old];
        if new == u32::MAX {
            continue;
        }
        for f in 0..4u8 {
            let Some(g) = t.gluing(old, f) else { continue };
            let entry = if new_of_old[g.tet as usize] != u32::MAX {
                Gluing {
                    tet: new_of_old[g.tet as usize],
                    facet: g.facet,
                    map: g.map,
                }
            } else {
                let (local, psi) = find_interface((g.tet, g.facet))
                    .expect("boundary facet of removed region must be in the interface");
                Gluing {
                    tet: new_tet_index(*local),
                    facet: psi.apply(g.facet),
                    map: psi.compose(g.map),
                }
            };
            table[new as usize][f as usize] = Some(entry);
        }
    }

    // Interface facets: attach the new side to the old neighbour, or to the
    // image of another interface facet when the neighbour was also removed.
    for ((rt, rf), (local, psi)) in &interface {
        let g = t.gluing(*rt as usize, *rf).expect("closed");
        let me = (new_tet_index(*local), psi.apply(*rf));
        let entry = if new_of_old[g.tet as usize] != u32::MAX {
            Gluing {
                tet: new_of_old[g.tet as usize],
                facet: g.facet,
                map: g.map.compose(psi.inverse()),
            }
        } else {
            let (local2, psi2) = find_interface((g.tet, g.facet))
                .expect("removed neighbour of an interface facet must itself be interface");
            Gluing {
                tet: new_tet_index(*local2),
                facet: psi2.apply(g.facet),
                map: psi2.compose(g.map).compose(psi.inverse()),
            }
        };
        table[me.0 as usize][me.1 as usize] = Some(entry);
    }

    for (la, fa, lb, fb, map) in internal {
        table[new_tet_index(la) as usize][fa as usize] = Some(Gluing {
            tet: new_tet_index(lb),
            facet: fb,
            map,
        });
        table[new_tet_index(lb) as usize][fb as usize] = Some(Gluing {
            tet: new_tet_index(la),
            facet: fa,
            map: map.inverse(),
        });
    }

    match Triangulation::from_table(table) {
        Ok(t) => t,
        Err(e) => unreachable!("move construction produced an invalid table: {e}"),
    }
}

// ---------------------------------------------------------------------------
// 0-2

fn zero_two_eligible(sk: &Skeleton, ring: &crate::kernel::EdgeRing, s: u16, tt: u16) -> bool {
    let degree = ring.degree();
    if s == tt || s as usize >= degree || tt as usize >= degree {
        return false;
    }
    // The two transitions must cross distinct triangle classes; when a
    // single triangle carries two edge-slots of this class, the pillow
    // facets would need the same partner slot, which no facet pairing can
    // express.
    let (ta, fa) = ring.transition_exit(s as usize);
    let (tb, fb) = ring.transition_exit(tt as usize);
    sk.triangle_class_of(ta as usize, fa) != sk.triangle_class_of(tb as usize, fb)
}

fn zero_two(
    t: &Triangulation,
    sk: &Skeleton,
    class: u32,
    slots: (u16, u16),
) -> Result<Triangulation, MoveError> {
    if class as usize >= sk.edge_count() {
        return Err(ineligible(format!("no edge class {class}")));
    }
    let ring = sk
        .edge_ring(t, class)
        .ok_or_else(|| ineligible(format!("edge class {class} has no closed ring")))?;
    let (s, tt) = if slots.0 < slots.1 { slots } else { (slots.1, slots.0) };
    if !zero_two_eligible(sk, &ring, s, tt) {
        return Err(ineligible(format!(
            "0-2 slots ({s}, {tt}) on edge {class} are not two distinct triangle classes"
        )));
    }
    let degree = ring.degree();
    let n = t.size();
    let step = |j: usize| &ring.steps[j % degree];
    let (s, tt) = (s as usize, tt as usize);

    let mut table: Vec<[Option<Gluing>; 4]> =
        (0..n).map(|i| std::array::from_fn(|f| t.gluing(i, f as u8))).collect();
    table.push([None; 4]); // N1 = n
    table.push([None; 4]); // N2 = n + 1

    // New tet N1 joins the ring arc (s+1 .. t]; N2 joins the complementary
    // arc. Vertices: 0 = tail, 1 = head, {2,3} = the new degree-2 edge, with
    // facet 3 glued to the enter side of the cut and facet 2 to the exit
    // side.
    let mut glue = |ta: usize, fa: u8, tb: usize, fb: u8, map: Perm4| {
        debug_assert_eq!(map.apply(fa), fb);
        table[ta][fa as usize] = Some(Gluing {
            tet: tb as u32,
            facet: fb,
            map,
        });
        table[tb][fb as usize] = Some(Gluing {
            tet: ta as u32,
            facet: fa,
            map: map.inverse(),
        });
    };

    // N1 facet 2 -> exit side of transition t; N1 facet 3 -> enter side of
    // transition s.
    let (n1, n2) = (n, n + 1);
    let et = step(tt);
    let mu = assignment(|img| {
        img[0] = et.tail;
        img[1] = et.head;
        img[3] = et.enter;
        img[2] = et.exit;
    });
    glue(n1, 2, et.tet as usize, et.exit, mu);
    let es1 = step(s + 1);
    let nu = assignment(|img| {
        img[0] = es1.tail;
        img[1] = es1.head;
        img[2] = es1.exit;
        img[3] = es1.enter;
    });
    glue(n1, 3, es1.tet as usize, es1.enter, nu);

    // N2 facet 2 -> exit side of transition s; N2 facet 3 -> enter side of
    // transition t.
    let es = step(s);
    let mu2 = assignment(|img| {
        img[0] = es.tail;
        img[1] = es.head;
        img[3] = es.enter;
        img[2] = es.exit;
    });
    glue(n2, 2, es.tet as usize, es.exit, mu2);
    let et1 = step(tt + 1);
    let nu2 = assignment(|img| {
        img[0] = et1.tail;
        img[1] = et1.head;
        img[2] = et1.exit;
        img[3] = et1.enter;
    });
    glue(n2, 3, et1.tet as usize, et1.enter, nu2);

    // Pillow interior: facets 0 and 1 glued across, exchanging labels 2 and 3.
    let sigma = Perm4::from_images([0, 1, 3, 2]);
    glue(n1, 0, n2, 0, sigma);
    glue(n1, 1, n2, 1, sigma);

    match Triangulation::from_table(table) {
        Ok(t) => Ok(t),
        Err(e) => unreachable!("0-2 construction produced an invalid table: {e}"),
    }
}

/// Builds a Perm4 from an images array filled in by the closure.
fn assignment(fill: impl FnOnce(&mut [u8; 4])) -> Perm4 {
    let mut img = [u8::MAX; 4];
    fill(&mut img);
    Perm4::from_images(img)
}

// ---------------------------------------------------------------------------
// 2-0

/// Full 2-0 eligibility check and application in one step: the structural
/// conditions are local, but the distinct-merge contract also demands that
/// the flattened result keeps the validity classification, which is cheapest
/// to decide on the candidate itself.
fn try_two_zero(t: &Triangulation, sk: &Skeleton, class: u32) -> Result<Triangulation, MoveError> {
    if class as usize >= sk.edge_count() || sk.edge_degree(class) != 2 {
        return Err(ineligible(format!("2-0 needs a degree-2 edge (class {class})")));
    }
    let ring = sk
        .edge_ring(t, class)
        .ok_or_else(|| ineligible(format!("edge class {class} has no closed ring")))?;
    let (a, b) = (&ring.steps[0], &ring.steps[1]);
    if a.tet == b.tet {
        return Err(ineligible(
            "2-0 needs the two incidences in distinct tetrahedra".to_string(),
        ));
    }

    // Around a degree-2 edge both gluings carry the same permutation p; the
    // flattening identifies facet x of A with facet p(x) of B via p, for the
    // two endpoint labels x.
    let p = t.gluing(a.tet as usize, a.exit).expect("closed").map;
    debug_assert_eq!(
        t.gluing(b.tet as usize, b.exit).expect("closed").map,
        p.inverse()
    );
    let flat_sides = [
        ((a.tet, a.tail), (b.tet, p.apply(a.tail))),
        ((a.tet, a.head), (b.tet, p.apply(a.head))),
    ];

    // Distinct-merge: a flattened pair must not already be glued to each
    // other (the two triangle classes being identified must be distinct).
    for &(sa, sb) in &flat_sides {
        let g = t.gluing(sa.0 as usize, sa.1).expect("closed");
        if (g.tet, g.facet) == sb {
            return Err(MoveError::WouldCreateInvalid);
        }
    }

    // Walk each flattening chain from its external ends. `cross` maps one
    // side of a flattened triangle to the other.
    let cross = |slot: (u32, u8)| -> Option<((u32, u8), Perm4)> {
        for &(sa, sb) in &flat_sides {
            if slot == sa {
                return Some((sb, p));
            }
            if slot == sb {
                return Some((sa, p.inverse()));
            }
        }
        None
    };
    let removed = [a.tet, b.tet];
    let is_removed = |tet: u32| removed.contains(&tet);

    // Each chain is entered from an external facet, crosses flattened
    // triangles (and any gluings between outer pillow facets) and exits at
    // another external facet; `acc` accumulates the label map from the
    // entry neighbour into the current pillow tetrahedron.
    let mut healed: Vec<((u32, u8), (u32, u8), Perm4)> = Vec::new();
    let mut resolved: Vec<(u32, u8)> = Vec::new();
    for &(sa, _) in &flat_sides {
        for start_side in [sa, cross(sa).unwrap().0] {
            let g = t.gluing(start_side.0 as usize, start_side.1).expect("closed");
            if is_removed(g.tet) || resolved.contains(&start_side) {
                continue;
            }
            let entry = (g.tet, g.facet);
            let mut acc = g.map.inverse();
            let mut cur = start_side;
            loop {
                resolved.push(cur);
                let (other, m) = cross(cur).expect("chain stays within flattened sides");
                resolved.push(other);
                acc = m.compose(acc);
                let g2 = t.gluing(other.0 as usize, other.1).expect("closed");
                if !is_removed(g2.tet) {
                    healed.push((entry, (g2.tet, g2.facet), g2.map.compose(acc)));
                    break;
                }
                acc = g2.map.compose(acc);
                cur = (g2.tet, g2.facet);
            }
        }
    }
    // Any flattened side never reached from outside means the chains close
    // into a loop: flattening would pinch off the component.
    if resolved.len() != 4 {
        return Err(MoveError::WouldCreateInvalid);
    }

    // Each chain is discovered from exactly one of its two ends (the other
    // end is marked resolved), so pairs appear once. A triangle glued to
    // itself cannot be expressed and rejects the move.
    for (from, to, _) in &healed {
        if from == to {
            return Err(MoveError::WouldCreateInvalid);
        }
    }

    // Assemble the flattened triangulation without the pillow.
    let keep: Vec<usize> = (0..t.size()).filter(|&i| !is_removed(i as u32)).collect();
    let mut new_of_old = vec![u32::MAX; t.size()];
    for (new, &old) in keep.iter().enumerate() {
        new_of_old[old] = new as u32;
    }
    let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; keep.len()];
    for &old in &keep {
        for f in 0..4u8 {
            let g = t.gluing(old, f).expect("closed");
            if !is_removed(g.tet) {
                table[new_of_old[old] as usize][f as usize] = Some(Gluing {
                    tet: new_of_old[g.tet as usize],
                    facet: g.facet,
                    map: g.map,
                });
            }
        }
    }
    for &(from, to, map) in &healed {
        table[new_of_old[from.0 as usize] as usize][from.1 as usize] = Some(Gluing {
            tet: new_of_old[to.0 as usize],
            facet: to.1,
            map,
        });
        table[new_of_old[to.0 as usize] as usize][to.1 as usize] = Some(Gluing {
            tet: new_of_old[from.0 as usize],
            facet: from.1,
            map: map.inverse(),
        });
    }
    let candidate =
        Triangulation::from_table(table).map_err(|_| MoveError::WouldCreateInvalid)?;

    // Post-application re-check: the flattening must leave the validity
    // classification and the vertex counts untouched.
    let before = validate(t);
    let after = validate(&candidate);
    let same = after.closed
        && after.is_pseudo_manifold == before.is_pseudo_manifold
        && after.is_closed_3_manifold == before.is_closed_3_manifold
        && after.material_vertex_count == before.material_vertex_count
        && after.ideal_vertices.len() == before.ideal_vertices.len();
    if !same {
        return Err(MoveError::WouldCreateInvalid);
    }
    Ok(candidate)
}

#[cfg(test)]
mod tests;
