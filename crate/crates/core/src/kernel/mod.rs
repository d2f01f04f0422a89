//! The triangulation kernel: tetrahedra glued along facets, derived
//! skeleta, vertex links, validity classification and Z/2 homology.
//!
//! Conventions used throughout the crate:
//!
//! * Tetrahedron vertices carry labels `0..4`. Facet `f` is the triangle
//!   opposite vertex `f`, so facet `f` contains exactly the vertices
//!   `{0,1,2,3} \ {f}`.
//! * The six edges of a tetrahedron are numbered `0..6` in lexicographic
//!   order of their endpoint pairs: `01, 02, 03, 12, 13, 23`.
//! * A gluing of facet `f` of one tetrahedron to facet `g` of another is an
//!   affine identification, recorded as a permutation of all four vertex
//!   labels that maps `f` to `g` (and therefore the facet onto the facet).

pub mod fixtures;
mod homology;
mod link;
mod perm;
mod skeleton;
mod triangulation;
mod validity;

pub use homology::z2_homology_ranks;
pub use link::{vertex_links, VertexLink};
pub use perm::Perm4;
pub use skeleton::{edge_slot, EdgeIncidence, EdgeRing, RingStep, Skeleton, EDGE_ENDPOINTS};
pub use triangulation::{Gluing, Triangulation};
pub use validity::{validate, ValidityReport};

use thiserror::Error;

/// Errors raised by kernel operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("tetrahedron or facet index out of range: tet {tet}, facet {facet}")]
    IndexOutOfRange { tet: usize, facet: usize },
    #[error("facet glued to itself: tet {tet}, facet {facet}")]
    FacetSelfGluing { tet: usize, facet: usize },
    #[error("inconsistent gluing between tet {a} facet {fa} and tet {b} facet {fb}")]
    InconsistentGluing { a: usize, fa: usize, b: usize, fb: usize },
    #[error("permutation does not map facet {src} to facet {dst}")]
    BadFacetMap { src: usize, dst: usize },
    #[error("operation requires a closed triangulation")]
    NotClosed,
    #[error("operation requires a triangulation without reversed self-identified edges")]
    InvalidEdge,
    #[error("triangulation parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("too many tetrahedra: {0} exceeds the supported maximum of 2^24")]
    TooLarge(usize),
}

/// Hard cap on the number of tetrahedra in a single triangulation. Keeps
/// per-node memory bounded during census-scale searches and lets signature
/// destination indices stay within 24 bits.
pub const MAX_TETRAHEDRA: usize = 1 << 24;
