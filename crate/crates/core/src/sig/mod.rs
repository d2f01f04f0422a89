//! Canonical isomorphism signatures.
//!
//! A signature is a relabeling-invariant string over the 64-character
//! alphabet `a-z A-Z 0-9 + -` that determines a closed triangulation up to
//! isomorphism. Searches use signatures to deduplicate triangulations.
//!
//! # Canonical form
//!
//! For a connected closed triangulation with `n` tetrahedra, every pair
//! (start tetrahedron, start permutation) of the `24n` anchors induces a
//! breadth-first relabeling: the start tetrahedron becomes index 0 with its
//! vertices relabeled by the start permutation, facets are visited in
//! relabeled order 0-3, newly discovered tetrahedra take indices in
//! discovery order and inherit the labeling that turns the discovering
//! gluing into the identity, and all gluing permutations are conjugated into
//! the new labels. Each anchor yields the entry stream
//! `(destination, destination facet, permutation code)` over all `4n`
//! relabeled facets; the lexicographically least stream is the canonical
//! form. Disconnected triangulations encode each component separately, with
//! the component strings sorted and concatenated.
//!
//! # Byte packing (normative)
//!
//! Values are packed into a little-endian bit stream emitted 6 bits at a
//! time through the alphabet (value 0 -> 'a', ..., 63 -> '-'); bits of each
//! value are appended least-significant first, and the final partial group
//! of a component is padded with zero bits.
//!
//! * size `n`: one or more 6-bit groups, each holding 5 payload bits
//!   (little-endian) and a continuation flag in bit 5;
//! * then, for each of the `4n` entries in canonical order: the destination
//!   index in `w` bits where `w = max(1, bit_length(n - 1))`, the
//!   destination facet in 2 bits, and the permutation code in 5 bits.

use crate::kernel::{KernelError, Perm4, Triangulation, MAX_TETRAHEDRA};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

const ALPHABET: &[u8; 64] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

fn alphabet_value(c: u8) -> Option<u8> {
    match c {
        b'a'..=b'z' => Some(c - b'a'),
        b'A'..=b'Z' => Some(c - b'A' + 26),
        b'0'..=b'9' => Some(c - b'0' + 52),
        b'+' => Some(62),
        b'-' => Some(63),
        _ => None,
    }
}

/// A canonical, relabeling-invariant signature of a closed triangulation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsoSig(String);

impl IsoSig {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for IsoSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for IsoSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsoSig({})", self.0)
    }
}

impl FromStr for IsoSig {
    type Err = SigError;

    /// Accepts any string over the signature alphabet; decoding performs the
    /// structural validation.
    fn from_str(s: &str) -> Result<Self, SigError> {
        if s.is_empty() {
            return Err(SigError::Malformed("empty signature".into()));
        }
        if let Some(c) = s.bytes().find(|&c| alphabet_value(c).is_none()) {
            return Err(SigError::Malformed(format!(
                "character {:?} is outside the signature alphabet",
                c as char
            )));
        }
        Ok(IsoSig(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("malformed signature: {0}")]
    Malformed(String),
}

// ---------------------------------------------------------------------------
// canonical form

/// One gluing entry of a canonical stream, packed for cheap comparison.
#[inline]
fn pack_entry(dest: u32, facet: u8, perm: u8) -> u32 {
    (dest << 7) | ((facet as u32) << 5) | perm as u32
}

/// Canonical entry stream of a connected closed triangulation, together
/// with the relabeling (tetrahedron order and vertex permutations) that
/// produced it.
fn canonical_stream(t: &Triangulation) -> (Vec<u32>, Vec<usize>, Vec<Perm4>) {
    let n = t.size();
    debug_assert!(n >= 1);
    let mut best: Option<Vec<u32>> = None;
    let mut best_relabel: Option<(Vec<usize>, Vec<Perm4>)> = None;

    let mut candidate = Vec::with_capacity(4 * n);
    for start in 0..n {
        for start_perm in Perm4::all() {
            candidate.clear();
            let mut new_of_old = vec![u32::MAX; n];
            let mut old_of_new = Vec::with_capacity(n);
            let mut perm_of_old = vec![Perm4::IDENTITY; n];
            new_of_old[start] = 0;
            old_of_new.push(start);
            perm_of_old[start] = start_perm;

            let mut next_idx = 0usize;
            while next_idx < old_of_new.len() {
                let old = old_of_new[next_idx];
                let phi = perm_of_old[old];
                for new_facet in 0..4u8 {
                    let old_facet = phi.inverse().apply(new_facet);
                    let g = t.gluing(old, old_facet).expect("closed");
                    let d = g.tet as usize;
                    if new_of_old[d] == u32::MAX {
                        new_of_old[d] = old_of_new.len() as u32;
                        // The discovering gluing becomes the identity in the
                        // new labels.
                        perm_of_old[d] = phi.compose(g.map.inverse());
                        old_of_new.push(d);
                    }
                    let conj = perm_of_old[d].compose(g.map).compose(phi.inverse());
                    candidate.push(pack_entry(
                        new_of_old[d],
                        conj.apply(new_facet),
                        conj.code(),
                    ));
                }
                next_idx += 1;
            }
            debug_assert_eq!(old_of_new.len(), n, "triangulation must be connected");

            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate.clone());
                best_relabel = Some((old_of_new, perm_of_old));
            }
        }
    }
    let (old_of_new, perm_of_old) = best_relabel.unwrap();
    (best.unwrap(), old_of_new, perm_of_old)
}

fn index_width(n: usize) -> u32 {
    if n <= 1 {
        1
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

struct BitWriter {
    out: String,
    acc: u64,
    bits: u32,
}

impl BitWriter {
    fn new() -> Self {
        BitWriter {
            out: String::new(),
            acc: 0,
            bits: 0,
        }
    }

    fn push(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value < (1 << width));
        self.acc |= value << self.bits;
        self.bits += width;
        while self.bits >= 6 {
            self.out.push(ALPHABET[(self.acc & 63) as usize] as char);
            self.acc >>= 6;
            self.bits -= 6;
        }
    }

    fn finish(mut self) -> String {
        if self.bits > 0 {
            self.out.push(ALPHABET[(self.acc & 63) as usize] as char);
        }
        self.out
    }
}

fn encode_component(t: &Triangulation) -> String {
    let n = t.size();
    let (stream, _, _) = canonical_stream(t);
    let mut w = BitWriter::new();
    write_size(&mut w, n);
    let width = index_width(n);
    for packed in stream {
        let dest = packed >> 7;
        let facet = (packed >> 5) & 3;
        let perm = packed & 31;
        w.push(dest as u64, width);
        w.push(facet as u64, 2);
        w.push(perm as u64, 5);
    }
    w.finish()
}

fn write_size(w: &mut BitWriter, mut n: usize) {
    loop {
        let mut group = (n & 31) as u64;
        n >>= 5;
        if n > 0 {
            group |= 32;
        }
        w.push(group, 6);
        if n == 0 {
            break;
        }
    }
}

/// Encodes a closed triangulation as its canonical signature.
pub fn encode(t: &Triangulation) -> Result<IsoSig, SigError> {
    t.ensure_closed()?;
    if t.is_empty() {
        // The empty triangulation is a single size-0 group.
        return Ok(IsoSig("a".to_string()));
    }
    let (count, comp) = t.components();
    if count == 1 {
        return Ok(IsoSig(encode_component(t)));
    }
    let mut parts: Vec<String> = (0..count as u32)
        .map(|c| {
            let ids: Vec<usize> = (0..t.size()).filter(|&i| comp[i] == c).collect();
            encode_component(&t.restrict(&ids))
        })
        .collect();
    parts.sort_unstable();
    Ok(IsoSig(parts.concat()))
}

/// The canonical representative of a connected closed triangulation,
/// together with the relabeling onto it: `tet_perm[old] = new` and
/// per-old-tetrahedron vertex permutations. Used by callers that must carry
/// move loci across the canonicalisation.
pub fn canonical_form(t: &Triangulation) -> Result<(Triangulation, Vec<usize>, Vec<Perm4>), SigError> {
    t.ensure_closed()?;
    let (count, _) = t.components();
    if count != 1 {
        return Err(SigError::Malformed(
            "canonical_form requires a connected triangulation".into(),
        ));
    }
    let (_, old_of_new, perm_of_old) = canonical_stream(t);
    let mut tet_perm = vec![0usize; t.size()];
    for (new, &old) in old_of_new.iter().enumerate() {
        tet_perm[old] = new;
    }
    let canon = t.relabel(&tet_perm, &perm_of_old);
    Ok((canon, tet_perm, perm_of_old))
}

// ---------------------------------------------------------------------------
// decoding

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    acc: u64,
    bits: u32,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader {
            bytes,
            pos: 0,
            acc: 0,
            bits: 0,
        }
    }

    fn read(&mut self, width: u32) -> Result<u64, SigError> {
        while self.bits < width {
            let Some(&c) = self.bytes.get(self.pos) else {
                return Err(SigError::Malformed("truncated signature".into()));
            };
            let v = alphabet_value(c).ok_or_else(|| {
                SigError::Malformed(format!(
                    "character {:?} is outside the signature alphabet",
                    c as char
                ))
            })?;
            self.acc |= (v as u64) << self.bits;
            self.bits += 6;
            self.pos += 1;
        }
        let value = self.acc & ((1u64 << width) - 1);
        self.acc >>= width;
        self.bits -= width;
        Ok(value)
    }

    /// Discards padding up to the next character boundary, insisting it is
    /// zero, and reports whether input remains.
    fn finish_component(&mut self) -> Result<bool, SigError> {
        if self.acc != 0 {
            return Err(SigError::Malformed("nonzero padding bits".into()));
        }
        self.acc = 0;
        self.bits = 0;
        Ok(self.pos < self.bytes.len())
    }
}

fn read_size(r: &mut BitReader) -> Result<usize, SigError> {
    let mut n: usize = 0;
    let mut shift = 0u32;
    loop {
        let group = r.read(6)?;
        n |= ((group & 31) as usize) << shift;
        shift += 5;
        if group & 32 == 0 {
            return Ok(n);
        }
        if shift > 30 {
            return Err(SigError::Malformed("size field too large".into()));
        }
    }
}

/// Decodes a signature back into a triangulation. Accepts exactly the
/// strings produced by [`encode`] up to non-canonical but well-formed entry
/// streams; all structural violations are `Malformed`.
pub fn decode(sig: &str) -> Result<Triangulation, SigError> {
    if sig.is_empty() {
        return Err(SigError::Malformed("empty signature".into()));
    }
    let mut r = BitReader::new(sig.as_bytes());
    let mut result = Triangulation::build(0, [])?;
    let mut first = true;
    loop {
        let n = read_size(&mut r)?;
        if n == 0 {
            if !first || r.finish_component()? {
                return Err(SigError::Malformed("unexpected empty component".into()));
            }
            return Ok(result);
        }
        if n > MAX_TETRAHEDRA {
            return Err(SigError::Malformed(format!("component size {n} too large")));
        }
        let width = index_width(n);
        let mut table = vec![[None; 4]; n];
        for tet in 0..n {
            for facet in 0..4usize {
                let dest = r.read(width)? as usize;
                let dest_facet = r.read(2)? as u8;
                let perm = r.read(5)? as u8;
                if dest >= n {
                    return Err(SigError::Malformed(format!(
                        "destination index {dest} out of range"
                    )));
                }
                let map = Perm4::from_code(perm).ok_or_else(|| {
                    SigError::Malformed(format!("permutation code {perm} out of range"))
                })?;
                if map.apply(facet as u8) != dest_facet {
                    return Err(SigError::Malformed(
                        "permutation does not carry facet to destination facet".into(),
                    ));
                }
                table[tet][facet] = Some(crate::kernel::Gluing {
                    tet: dest as u32,
                    facet: dest_facet,
                    map,
                });
            }
        }
        let component = Triangulation::from_table(table)
            .map_err(|e| SigError::Malformed(format!("inconsistent gluing table: {e}")))?;
        if !component.is_closed() {
            return Err(SigError::Malformed("component is not closed".into()));
        }
        result = result.disjoint_union(&component);
        first = false;
        if !r.finish_component()? {
            return Ok(result);
        }
    }
}

// ---------------------------------------------------------------------------
// brute-force isomorphism oracle

/// Decides whether two triangulations are related by a relabeling
/// isomorphism, by exhaustive rooted search over (start tetrahedron,
/// permutation) anchors, component by component. Independent of the
/// canonical-form machinery, so the two can be checked against each other.
pub fn is_isomorphic(a: &Triangulation, b: &Triangulation) -> bool {
    if a.size() != b.size() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let (ca, comp_a) = a.components();
    let (cb, comp_b) = b.components();
    if ca != cb {
        return false;
    }
    let comp_ids = |comp: &[u32], count: usize, t: &Triangulation| -> Vec<Vec<usize>> {
        (0..count as u32)
            .map(|c| (0..t.size()).filter(|&i| comp[i] == c as u32).collect())
            .collect()
    };
    let parts_a = comp_ids(&comp_a, ca, a);
    let parts_b = comp_ids(&comp_b, cb, b);
    let mut used = vec![false; cb];
    match_components(a, b, &parts_a, &parts_b, 0, &mut used)
}

fn match_components(
    a: &Triangulation,
    b: &Triangulation,
    parts_a: &[Vec<usize>],
    parts_b: &[Vec<usize>],
    idx: usize,
    used: &mut [bool],
) -> bool {
    if idx == parts_a.len() {
        return true;
    }
    for j in 0..parts_b.len() {
        if used[j] || parts_a[idx].len() != parts_b[j].len() {
            continue;
        }
        if component_isomorphic(a, b, &parts_a[idx], &parts_b[j]) {
            used[j] = true;
            if match_components(a, b, parts_a, parts_b, idx + 1, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

fn component_isomorphic(
    a: &Triangulation,
    b: &Triangulation,
    part_a: &[usize],
    part_b: &[usize],
) -> bool {
    let root = part_a[0];
    for &b_start in part_b {
        for perm in Perm4::all() {
            if rooted_match(a, b, root, b_start, perm) {
                return true;
            }
        }
    }
    false
}

/// Attempts to extend `root -> (b_start, perm)` to a full isomorphism of
/// the component containing `root`; the extension is forced, so this is a
/// single propagation pass.
fn rooted_match(
    a: &Triangulation,
    b: &Triangulation,
    root: usize,
    b_start: usize,
    perm: Perm4,
) -> bool {
    let n = a.size();
    let mut tet_map = vec![u32::MAX; n];
    let mut perm_map = vec![Perm4::IDENTITY; n];
    let mut b_used = vec![false; b.size()];
    tet_map[root] = b_start as u32;
    perm_map[root] = perm;
    b_used[b_start] = true;
    let mut queue = vec![root];
    while let Some(at) = queue.pop() {
        let bt = tet_map[at] as usize;
        let phi = perm_map[at];
        for f in 0..4u8 {
            match (a.gluing(at, f), b.gluing(bt, phi.apply(f))) {
                (None, None) => {}
                (Some(ga), Some(gb)) => {
                    let expected = gb.map.compose(phi).compose(ga.map.inverse());
                    let ad = ga.tet as usize;
                    if tet_map[ad] == u32::MAX {
                        if b_used[gb.tet as usize] {
                            return false;
                        }
                        tet_map[ad] = gb.tet;
                        perm_map[ad] = expected;
                        b_used[gb.tet as usize] = true;
                        queue.push(ad);
                    } else if tet_map[ad] != gb.tet || perm_map[ad] != expected {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests;
