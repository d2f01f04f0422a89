//! Generalised 3-manifold triangulations and the machinery needed to run
//! connection experiments on them: the four elementary moves (2-3, 3-2,
//! 0-2, 2-0), canonical isomorphism signatures, and blind / monotonic /
//! semi-monotonic searches over sets of seed triangulations.
//!
//! * [`kernel`] — tetrahedra with affine facet gluings, derived skeleta
//!   (vertex/edge/triangle classes), vertex links, validity classification
//!   and Z/2 homology ranks.
//! * [`moves`] — enumeration and application of the elementary moves, plus
//!   move-sequence classification, replay and (de)serialisation.
//! * [`sig`] — canonical relabeling-invariant signatures with a binary
//!   codec, and a brute-force isomorphism test kept independent of the
//!   canonical form so the two can oracle each other.
//! * [`search`] — the three connection strategies with union-find meeting
//!   detection, deterministic statistics and path reconstruction.

pub mod kernel;
pub mod moves;
pub mod search;
pub mod sig;

pub use kernel::{
    validate, vertex_links, z2_homology_ranks, Gluing, KernelError, Perm4, Skeleton,
    Triangulation, ValidityReport, VertexLink,
};
pub use moves::{
    apply, apply_with_inverse, classify_kinds, classify_sequence, enumerate_moves,
    verify_sequence, verify_sequence_detailed, MoveError, MoveKind, MoveKindSet, MoveSequence,
    MoveSite, SequenceClass,
};
pub use search::{
    compare_strategies, connect, scramble, CompareReport, PairPath, SearchConfig, SearchError,
    SearchResult, Strategy, DEFAULT_NODE_LIMIT,
};
pub use sig::{canonical_form, decode, encode, is_isomorphic, IsoSig, SigError};
