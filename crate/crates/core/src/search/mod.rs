//! Connection search over sets of seed triangulations.
//!
//! Three strategies explore the graph whose vertices are isomorphism
//! signatures and whose edges are elementary moves:
//!
//! * Blind: iterative deepening on the height allowance `h`; at each level
//!   the reachability graph under 2-3 and 3-2 moves within tetrahedron
//!   counts `[n, n+h]` is exhausted, seeding all components simultaneously.
//! * Monotonic: each seed's component grows upward by 2-3 moves only, one
//!   height level at a time, merging components on signature collisions.
//! * Semi-monotonic: as monotonic, but after each new 2-3 node the closure
//!   under all sequences of 2-0 moves is explored; closure signatures are
//!   recorded (but never 2-3-expanded) and merge components when they
//!   collide with a 2-3 tree node.
//!
//! Nodes are stored as signatures with compact back-pointers only;
//! triangulations are re-decoded on demand for expansion. All expansion is
//! organised in two-phase waves (pure fan-out, then serial commit in node
//! order), so results are bit-identical whether the fan-out runs serially
//! or on a thread pool.

mod union_find;

pub use union_find::UnionFind;

use crate::kernel::{validate, Skeleton, Triangulation};
use crate::moves::{
    apply, apply_with_inverse, enumerate_moves, MoveKind, MoveKindSet, MoveSequence, MoveSite,
};
use crate::sig::{canonical_form, decode, encode, IsoSig, SigError};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use thiserror::Error;

/// Default cap on stored signatures, matching the census experiments'
/// memory-driven limit.
pub const DEFAULT_NODE_LIMIT: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Blind,
    Monotonic,
    SemiMonotonic,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Blind => "blind",
            Strategy::Monotonic => "monotonic",
            Strategy::SemiMonotonic => "semi-monotonic",
        }
    }

    pub fn all() -> [Strategy; 3] {
        [Strategy::Blind, Strategy::Monotonic, Strategy::SemiMonotonic]
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Maximum extra tetrahedra above the seeds' common size.
    pub max_extra_tets: u32,
    /// Abort (with `terminated_early`) once this many distinct signatures
    /// are stored.
    pub node_limit: usize,
    /// Force single-threaded expansion. Parallel expansion produces
    /// identical results; this only pins the execution mode.
    pub deterministic: bool,
    /// Thread count for parallel expansion (used when `deterministic` is
    /// false; values <= 1 run serially).
    pub threads: usize,
    /// Reconstruct a move sequence per connected seed pair.
    pub reconstruct_paths: bool,
}

impl SearchConfig {
    pub fn new(strategy: Strategy, max_extra_tets: u32) -> SearchConfig {
        SearchConfig {
            strategy,
            max_extra_tets,
            node_limit: DEFAULT_NODE_LIMIT,
            deterministic: true,
            threads: 1,
            reconstruct_paths: false,
        }
    }
}

/// A reconstructed witness path between two seeds.
#[derive(Clone, Debug)]
pub struct PairPath {
    /// Seed index the sequence starts from.
    pub from_seed: usize,
    /// Seed index the sequence ends at.
    pub to_seed: usize,
    pub sequence: MoveSequence,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub connected: bool,
    /// Least height at which all seeds merged, when connected.
    pub height_used: Option<u32>,
    /// Distinct signatures generated by 2-3/3-2 expansion (seeds included).
    pub nodes_23_32: usize,
    /// Distinct signatures first reached by 2-0 closure and never
    /// re-derived as 2-3 tree nodes.
    pub nodes_20: usize,
    pub terminated_early: bool,
    /// Present when paths were requested and the search connected; one
    /// entry per seed pair for which a witness could be assembled.
    pub paths: Option<Vec<PairPath>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("seed mismatch: {0}")]
    SeedMismatch(String),
    #[error("ineligible seed: {0}")]
    IneligibleSeed(String),
    #[error("bad search configuration: {0}")]
    Config(String),
    #[error("no eligible move within the size bound")]
    NoEligibleMove,
    #[error(transparent)]
    Kernel(#[from] crate::kernel::KernelError),
    #[error(transparent)]
    Move(#[from] crate::moves::MoveError),
    #[error(transparent)]
    Sig(#[from] SigError),
}

// ---------------------------------------------------------------------------
// run state

#[derive(Clone, Debug)]
struct Node {
    size: u32,
    /// 2-3/3-2 edge from a tree parent (None for seeds); present exactly
    /// when the node belongs to the 2-3 expansion tree.
    tree_parent: Option<(u32, MoveSite)>,
    /// 2-0 edge this node was first reached by, when discovered as a
    /// closure node.
    closure_parent: Option<(u32, MoveSite)>,
    is_tree: bool,
}

/// A collision of an expansion edge with an already-stored signature that
/// merged two components: applying `site` to `parent`'s triangulation
/// yields `target`'s signature.
#[derive(Clone, Copy, Debug)]
struct MeetEvent {
    parent: u32,
    site: MoveSite,
    target: u32,
}

struct RunState {
    base_size: u32,
    sigs: Vec<IsoSig>,
    nodes: Vec<Node>,
    index: HashMap<String, u32>,
    uf: UnionFind,
    seed_nodes: Vec<u32>,
    events: Vec<MeetEvent>,
    connected_at: Option<u32>,
    terminated_early: bool,
}

impl RunState {
    fn all_connected(&mut self) -> bool {
        let first = self.seed_nodes[0];
        let seeds = self.seed_nodes.clone();
        seeds.iter().all(|&s| self.uf.same(first, s))
    }

    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn tree_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_tree).count()
    }
}

// ---------------------------------------------------------------------------
// public operations

/// Runs the configured strategy over the seeds.
///
/// All seeds must be closed pseudo-manifolds of one common size with equal
/// material-vertex counts (both searches' height bookkeeping and the
/// connectivity theorems are stated under those hypotheses).
pub fn connect(seeds: &[Triangulation], cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    let mut state = run_search(seeds, cfg)?;
    let connected = state.connected_at.is_some();
    let paths = if cfg.reconstruct_paths && connected {
        Some(reconstruct_all_pairs(&mut state, seeds, cfg))
    } else {
        None
    };
    Ok(SearchResult {
        connected,
        height_used: state.connected_at,
        nodes_23_32: state.tree_count(),
        nodes_20: state.node_count() - state.tree_count(),
        terminated_early: state.terminated_early,
        paths,
    })
}

/// Side-by-side runs of all three strategies on identical seeds.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub blind: SearchResult,
    pub monotonic: SearchResult,
    pub semi_monotonic: SearchResult,
    /// `h_monotonic - h_blind` when both connected.
    pub height_gap: Option<i64>,
}

pub fn compare_strategies(
    seeds: &[Triangulation],
    max_extra_tets: u32,
    node_limit: usize,
) -> Result<CompareReport, SearchError> {
    let run = |strategy| {
        let mut cfg = SearchConfig::new(strategy, max_extra_tets);
        cfg.node_limit = node_limit;
        connect(seeds, &cfg)
    };
    let blind = run(Strategy::Blind)?;
    let monotonic = run(Strategy::Monotonic)?;
    let semi_monotonic = run(Strategy::SemiMonotonic)?;
    let height_gap = match (blind.height_used, monotonic.height_used) {
        (Some(b), Some(m)) => Some(m as i64 - b as i64),
        _ => None,
    };
    Ok(CompareReport {
        blind,
        monotonic,
        semi_monotonic,
        height_gap,
    })
}

/// Random 2-3/3-2 walk of `walk_length` uniformly chosen eligible moves,
/// never exceeding `max_size` tetrahedra. Deterministic for a fixed seed.
pub fn scramble(
    t: &Triangulation,
    walk_length: usize,
    max_size: usize,
    rng_seed: u64,
) -> Result<Triangulation, SearchError> {
    let report = validate(t);
    if !report.is_pseudo_manifold {
        return Err(SearchError::IneligibleSeed(
            "scramble requires a closed pseudo-manifold".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut current = t.clone();
    for _ in 0..walk_length {
        let sk = Skeleton::compute(&current)?;
        let mut sites = enumerate_moves(&current, &sk, MoveKindSet::UP_DOWN)?;
        if current.size() + 1 > max_size {
            sites.retain(|s| s.kind() != MoveKind::M23);
        }
        let Some(&site) = sites.choose(&mut rng) else {
            return Err(SearchError::NoEligibleMove);
        };
        current = apply(&current, &sk, site)?;
    }
    Ok(current)
}

// ---------------------------------------------------------------------------
// the search proper

fn run_search(seeds: &[Triangulation], cfg: &SearchConfig) -> Result<RunState, SearchError> {
    if seeds.is_empty() {
        return Err(SearchError::SeedMismatch("no seeds given".into()));
    }
    if cfg.node_limit == 0 {
        return Err(SearchError::Config("node_limit must be positive".into()));
    }
    let base_size = seeds[0].size();
    let mut material = None;
    for (i, s) in seeds.iter().enumerate() {
        let report = validate(s);
        if !report.is_pseudo_manifold {
            return Err(SearchError::IneligibleSeed(format!(
                "seed {i} is not a closed pseudo-manifold"
            )));
        }
        if s.size() != base_size {
            return Err(SearchError::SeedMismatch(format!(
                "seed {i} has {} tetrahedra, seed 0 has {base_size}",
                s.size()
            )));
        }
        match material {
            None => material = Some(report.material_vertex_count),
            Some(m) if m != report.material_vertex_count => {
                return Err(SearchError::SeedMismatch(format!(
                    "seed {i} has {} material vertices, seed 0 has {m}",
                    report.material_vertex_count
                )));
            }
            _ => {}
        }
    }

    let mut state = RunState {
        base_size: base_size as u32,
        sigs: Vec::new(),
        nodes: Vec::new(),
        index: HashMap::new(),
        uf: UnionFind::new(),
        seed_nodes: Vec::new(),
        events: Vec::new(),
        connected_at: None,
        terminated_early: false,
    };
    for seed in seeds {
        let sig = encode(seed)?;
        let id = match state.index.get(sig.as_str()) {
            Some(&id) => id,
            None => insert_node(
                &mut state,
                sig,
                Node {
                    size: base_size as u32,
                    tree_parent: None,
                    closure_parent: None,
                    is_tree: true,
                },
            ),
        };
        state.seed_nodes.push(id);
    }
    if state.all_connected() {
        state.connected_at = Some(0);
        return Ok(state);
    }

    match cfg.strategy {
        Strategy::Blind => run_blind(&mut state, cfg),
        Strategy::Monotonic => run_upward(&mut state, cfg, false),
        Strategy::SemiMonotonic => run_upward(&mut state, cfg, true),
    }
    Ok(state)
}

fn insert_node(state: &mut RunState, sig: IsoSig, node: Node) -> u32 {
    let id = state.uf.push();
    debug_assert_eq!(id as usize, state.nodes.len());
    state.index.insert(sig.as_str().to_string(), id);
    state.sigs.push(sig);
    state.nodes.push(node);
    id
}

/// Pure fan-out of one node under the given move kinds: every eligible site
/// applied, children canonicalised.
fn expand_node(sig: &IsoSig, kinds: MoveKindSet) -> Vec<(MoveSite, IsoSig, u32)> {
    let t = decode(sig.as_str()).expect("stored signatures decode");
    let sk = Skeleton::compute(&t).expect("stored triangulations are closed");
    let sites = enumerate_moves(&t, &sk, kinds).expect("stored nodes are pseudo-manifolds");
    sites
        .into_iter()
        .map(|site| {
            let child = apply(&t, &sk, site).expect("enumerated sites apply");
            let sig = encode(&child).expect("children are closed");
            (site, sig, child.size() as u32)
        })
        .collect()
}

/// Runs `expand_node` over a wave, serially or on a thread pool; output
/// order equals wave order either way.
fn fan_out(
    state: &RunState,
    wave: &[u32],
    kinds_for: impl Fn(&Node) -> MoveKindSet + Sync,
    cfg: &SearchConfig,
) -> Vec<Vec<(MoveSite, IsoSig, u32)>> {
    let job = |&id: &u32| {
        let node = &state.nodes[id as usize];
        let kinds = kinds_for(node);
        if kinds == MoveKindSet::NONE {
            Vec::new()
        } else {
            expand_node(&state.sigs[id as usize], kinds)
        }
    };
    if cfg.deterministic || cfg.threads <= 1 {
        wave.iter().map(job).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .expect("thread pool");
        pool.install(|| wave.par_iter().map(job).collect())
    }
}

// ---------------------------------------------------------------------------
// blind search

fn run_blind(state: &mut RunState, cfg: &SearchConfig) {
    let n = state.base_size;
    let mut blocked: Vec<u32> = (0..state.nodes.len() as u32).collect();
    for h in 0..=cfg.max_extra_tets {
        let cap = n + h;
        let mut wave = std::mem::take(&mut blocked);
        while !wave.is_empty() {
            let fanned = fan_out(
                state,
                &wave,
                |node| {
                    let mut kinds = MoveKindSet::NONE;
                    if node.size + 1 <= cap {
                        kinds = kinds.with(MoveKind::M23);
                    }
                    if node.size > n {
                        kinds = kinds.with(MoveKind::M32);
                    }
                    kinds
                },
                cfg,
            );
            let mut next_wave = Vec::new();
            for (&id, children) in wave.iter().zip(fanned) {
                for (site, sig, size) in children {
                    match state.index.get(sig.as_str()) {
                        Some(&existing) => {
                            if state.uf.union(id, existing) {
                                state.events.push(MeetEvent {
                                    parent: id,
                                    site,
                                    target: existing,
                                });
                            }
                        }
                        None => {
                            let child = insert_node(
                                state,
                                sig,
                                Node {
                                    size,
                                    tree_parent: Some((id, site)),
                                    closure_parent: None,
                                    is_tree: true,
                                },
                            );
                            state.uf.union(id, child);
                            next_wave.push(child);
                            if state.node_count() >= cfg.node_limit {
                                state.terminated_early = true;
                                if state.all_connected() {
                                    state.connected_at = Some(h);
                                }
                                return;
                            }
                        }
                    }
                }
                if state.nodes[id as usize].size + 1 > cap {
                    // 2-3 expansion was size-blocked; revisit when the cap
                    // rises.
                    blocked.push(id);
                }
            }
            // Levels are tried in increasing order, so a merge observed at
            // any point during level h already witnesses the least h; no
            // need to exhaust the rest of the level.
            if state.all_connected() {
                state.connected_at = Some(h);
                return;
            }
            wave = next_wave;
        }
    }
}

// ---------------------------------------------------------------------------
// monotonic / semi-monotonic search

fn run_upward(state: &mut RunState, cfg: &SearchConfig, closures: bool) {
    let n = state.base_size;
    // Frontier of unexpanded tree nodes at the previous height.
    let mut frontier: Vec<u32> = (0..state.nodes.len() as u32).collect();
    for h in 1..=cfg.max_extra_tets {
        let fanned = fan_out(state, &frontier, |_| MoveKindSet::of(&[MoveKind::M23]), cfg);
        let mut next_frontier = Vec::new();
        for (&id, children) in frontier.iter().zip(fanned) {
            for (site, sig, size) in children {
                debug_assert_eq!(size, n + h);
                let child = match state.index.get(sig.as_str()) {
                    Some(&existing) => {
                        if state.uf.union(id, existing) {
                            state.events.push(MeetEvent {
                                parent: id,
                                site,
                                target: existing,
                            });
                        }
                        let target = &mut state.nodes[existing as usize];
                        if target.is_tree {
                            None
                        } else {
                            // A closure record re-derived as a 2-3 node:
                            // upgrade it into the tree and expand it later.
                            target.is_tree = true;
                            target.tree_parent = Some((id, site));
                            Some(existing)
                        }
                    }
                    None => {
                        let child = insert_node(
                            state,
                            sig,
                            Node {
                                size,
                                tree_parent: Some((id, site)),
                                closure_parent: None,
                                is_tree: true,
                            },
                        );
                        state.uf.union(id, child);
                        Some(child)
                    }
                };
                if let Some(child) = child {
                    next_frontier.push(child);
                    if state.node_count() >= cfg.node_limit {
                        state.terminated_early = true;
                        if state.all_connected() {
                            state.connected_at = Some(h);
                        }
                        return;
                    }
                }
            }
        }
        if closures && !closure_pass(state, &next_frontier, cfg) {
            state.terminated_early = true;
            if state.all_connected() {
                state.connected_at = Some(h);
            }
            return;
        }
        if state.all_connected() {
            state.connected_at = Some(h);
            return;
        }
        if next_frontier.is_empty() {
            return;
        }
        frontier = next_frontier;
    }
}

/// Local exploration of everything reachable from one signature by 2-0
/// moves (breadth-first, deduplicated within the closure). Entry 0 is the
/// start itself; each later entry records its local parent and move.
fn explore_closure(sig: &IsoSig) -> Vec<(IsoSig, usize, MoveSite)> {
    let mut local: Vec<(IsoSig, usize, MoveSite)> =
        vec![(sig.clone(), usize::MAX, MoveSite::TwoZero { edge: 0 })];
    let mut seen: HashMap<String, ()> = HashMap::from([(sig.as_str().to_string(), ())]);
    let mut next = 0usize;
    while next < local.len() {
        let children = expand_node(&local[next].0, MoveKindSet::of(&[MoveKind::M20]));
        for (site, child_sig, _) in children {
            if seen.insert(child_sig.as_str().to_string(), ()).is_none() {
                local.push((child_sig, next, site));
            }
        }
        next += 1;
    }
    local
}

/// Runs the 2-0 closure of every newly generated 2-3 node. Closure
/// signatures are recorded and counted but never 2-3-expanded; a closure
/// signature colliding with a 2-3 tree node of another component merges
/// components (closure/closure collisions certify no semi-monotonic path
/// and are ignored). Returns false when the node limit was reached.
fn closure_pass(state: &mut RunState, new_nodes: &[u32], cfg: &SearchConfig) -> bool {
    let explored: Vec<Vec<(IsoSig, usize, MoveSite)>> = {
        let job = |&id: &u32| explore_closure(&state.sigs[id as usize]);
        if cfg.deterministic || cfg.threads <= 1 {
            new_nodes.iter().map(job).collect()
        } else {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .expect("thread pool");
            pool.install(|| new_nodes.par_iter().map(job).collect())
        }
    };
    for (&start, local) in new_nodes.iter().zip(explored) {
        // Map local closure indices to global node ids as we commit.
        let mut global = vec![u32::MAX; local.len()];
        global[0] = start;
        for (i, (sig, parent_local, site)) in local.iter().enumerate().skip(1) {
            let parent = global[*parent_local];
            debug_assert_ne!(parent, u32::MAX);
            let id = match state.index.get(sig.as_str()) {
                Some(&existing) => {
                    if state.nodes[existing as usize].is_tree
                        && state.uf.union(parent, existing)
                    {
                        state.events.push(MeetEvent {
                            parent,
                            site: *site,
                            target: existing,
                        });
                    }
                    existing
                }
                None => {
                    let size = state.nodes[parent as usize].size - 2;
                    let id = insert_node(
                        state,
                        sig.clone(),
                        Node {
                            size,
                            tree_parent: None,
                            closure_parent: Some((parent, *site)),
                            is_tree: false,
                        },
                    );
                    state.uf.union(parent, id);
                    if state.node_count() >= cfg.node_limit {
                        return false;
                    }
                    id
                }
            };
            global[i] = id;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// path reconstruction

/// The seed index at the root of a node's ancestry: tree nodes walk the
/// 2-3 tree; closure nodes walk their 2-0 chain back into the tree first.
fn ancestry_seed(state: &RunState, mut id: u32) -> usize {
    loop {
        let node = &state.nodes[id as usize];
        let parent = if node.is_tree {
            node.tree_parent
        } else {
            node.closure_parent
        };
        match parent {
            Some((p, _)) => id = p,
            None => {
                return state
                    .seed_nodes
                    .iter()
                    .position(|&s| s == id)
                    .expect("ancestry terminates at a seed");
            }
        }
    }
}

/// Ancestry edges of a node, ordered from the seed outward.
fn ancestry_edges(state: &RunState, mut id: u32) -> Vec<(u32, MoveSite)> {
    let mut edges = Vec::new();
    loop {
        let node = &state.nodes[id as usize];
        let parent = if node.is_tree {
            node.tree_parent
        } else {
            node.closure_parent
        };
        match parent {
            Some((p, site)) => {
                edges.push((p, site));
                id = p;
            }
            None => break,
        }
    }
    edges.reverse();
    edges
}

/// The inverse of applying `site` to `decode(parent_sig)`, located on the
/// canonical representative of the child.
fn inverse_site_on_canonical(parent_sig: &IsoSig, site: MoveSite) -> MoveSite {
    use crate::kernel::{edge_slot, EDGE_ENDPOINTS};
    let t = decode(parent_sig.as_str()).expect("stored signatures decode");
    let sk = Skeleton::compute(&t).expect("closed");
    let (raw, inverse) = apply_with_inverse(&t, &sk, site).expect("recorded sites apply");
    let inverse = inverse.expect("search never reverses 2-0 edges");
    let raw_sk = Skeleton::compute(&raw).expect("closed");
    let (canon, tet_perm, vertex_perms) = canonical_form(&raw).expect("connected");
    let canon_sk = Skeleton::compute(&canon).expect("closed");
    match inverse {
        MoveSite::ThreeTwo { edge } => {
            let rep = raw_sk.edge_members(edge)[0];
            let (a, b) = EDGE_ENDPOINTS[rep.slot as usize];
            let phi = vertex_perms[rep.tet as usize];
            let new_tet = tet_perm[rep.tet as usize];
            let new_slot = edge_slot(phi.apply(a), phi.apply(b));
            MoveSite::ThreeTwo {
                edge: canon_sk.edge_class_of(new_tet, new_slot),
            }
        }
        MoveSite::TwoThree { triangle } => {
            let (tet, facet) = raw_sk.triangle_members(triangle)[0];
            let phi = vertex_perms[tet as usize];
            MoveSite::TwoThree {
                triangle: canon_sk.triangle_class_of(tet_perm[tet as usize], phi.apply(facet)),
            }
        }
        MoveSite::TwoZero { .. } | MoveSite::ZeroTwo { .. } => {
            unreachable!("search never reverses 0-2/2-0 edges")
        }
    }
}

/// Assembles the seed-to-seed move sequence witnessed by one meet event.
/// The orientation puts the closure-bearing leg first, so monotonic
/// searches yield (2-3)*(3-2)* paths and semi-monotonic searches yield
/// (2-3)*(2-0)*(3-2)* paths.
fn assemble_path(state: &RunState, event: &MeetEvent) -> PairPath {
    let parent_side_closure = !state.nodes[event.parent as usize].is_tree;
    let target_side_closure = !state.nodes[event.target as usize].is_tree;
    debug_assert!(!(parent_side_closure && target_side_closure));

    let mut steps: Vec<MoveSite> = Vec::new();
    let (from_node, to_node, forward_parent_leg) = if target_side_closure {
        // Forward along the target's ancestry, reverse across the event,
        // then reverse down the parent's tree.
        (event.target, event.parent, false)
    } else {
        (event.parent, event.target, true)
    };

    for &(_, site) in &ancestry_edges(state, from_node) {
        steps.push(site);
    }
    if forward_parent_leg {
        steps.push(event.site);
    } else {
        steps.push(inverse_site_on_canonical(
            &state.sigs[event.parent as usize],
            event.site,
        ));
    }
    let down = ancestry_edges(state, to_node);
    for &(p, site) in down.iter().rev() {
        steps.push(inverse_site_on_canonical(&state.sigs[p as usize], site));
    }

    let from_seed = ancestry_seed(state, from_node);
    let to_seed = ancestry_seed(state, to_node);
    PairPath {
        from_seed,
        to_seed,
        sequence: MoveSequence {
            source: state.sigs[state.seed_nodes[from_seed] as usize].clone(),
            target: state.sigs[state.seed_nodes[to_seed] as usize].clone(),
            steps,
        },
    }
}

fn reconstruct_all_pairs(
    state: &mut RunState,
    seeds: &[Triangulation],
    cfg: &SearchConfig,
) -> Vec<PairPath> {
    let mut paths = Vec::new();
    let count = state.seed_nodes.len();
    for i in 0..count {
        for j in (i + 1)..count {
            if state.seed_nodes[i] == state.seed_nodes[j] {
                let sig = state.sigs[state.seed_nodes[i] as usize].clone();
                paths.push(PairPath {
                    from_seed: i,
                    to_seed: j,
                    sequence: MoveSequence {
                        source: sig.clone(),
                        target: sig,
                        steps: Vec::new(),
                    },
                });
                continue;
            }
            if let Some(path) = direct_pair_path(state, i, j) {
                paths.push(path);
            } else if let Some(mut path) = rerun_pair_path(seeds, cfg, i, j) {
                path.from_seed = if path.from_seed == 0 { i } else { j };
                path.to_seed = if path.to_seed == 0 { i } else { j };
                paths.push(path);
            }
        }
    }
    paths
}

/// A path for seeds (i, j) via a meet event directly linking their trees.
fn direct_pair_path(state: &RunState, i: usize, j: usize) -> Option<PairPath> {
    state.events.iter().find_map(|event| {
        let sa = ancestry_seed(state, event.parent);
        let sb = ancestry_seed(state, event.target);
        ((sa, sb) == (i, j) || (sa, sb) == (j, i)).then(|| assemble_path(state, event))
    })
}

/// Transitively merged pairs may lack a direct meet; rerun the search on
/// the pair alone to obtain one.
fn rerun_pair_path(
    seeds: &[Triangulation],
    cfg: &SearchConfig,
    i: usize,
    j: usize,
) -> Option<PairPath> {
    let pair = [seeds[i].clone(), seeds[j].clone()];
    let state = run_search(&pair, cfg).ok()?;
    state.connected_at?;
    let event = state.events.iter().find(|e| {
        let sa = ancestry_seed(&state, e.parent);
        let sb = ancestry_seed(&state, e.target);
        sa != sb
    })?;
    Some(assemble_path(&state, event))
}

// ---------------------------------------------------------------------------
// statistics

/// Header of the statistics CSV emitted by the experiment tooling.
pub const STATS_CSV_HEADER: &str =
    "case_id,strategy,connected,height,nodes_23_32,nodes_20,terminated_early,wall_ms";

/// One statistics row; `height` is blank when the search did not connect.
pub fn stats_csv_row(
    case_id: &str,
    strategy: Strategy,
    result: &SearchResult,
    wall_ms: u128,
) -> String {
    format!(
        "{case_id},{strategy},{},{},{},{},{},{wall_ms}",
        result.connected,
        result
            .height_used
            .map(|h| h.to_string())
            .unwrap_or_default(),
        result.nodes_23_32,
        result.nodes_20,
        result.terminated_early,
    )
}

#[cfg(test)]
mod tests;
