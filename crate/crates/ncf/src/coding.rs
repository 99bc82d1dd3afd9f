//! The network-coded forwarding pipeline.
//!
//! Gateways that overhear the same uplinks normally forward every copy,
//! so the backhaul carries one packet per (node, hearing gateway) pair.
//! Here each node is *owned* by exactly one of the gateways that covers
//! it, owners emit random linear combinations of the owned packets they
//! received, and the server solves the resulting linear system — one
//! encoded packet per delivered owned packet instead of one per copy.
//!
//! The stages, in order:
//!
//! 1. [`infer_connectivity`] — build the node/gateway coverage matrix
//!    from forwarding observations.
//! 2. [`generate_encoding_vectors`] — assign owners (first-come by
//!    gateway index) and draw per-gateway coefficient vectors.
//! 3. [`encode_at_gateway`] / [`GatewayEncoder`] — combine one
//!    generation's received packets into encoded packets.
//! 4. [`decode_at_server`] — assemble the coefficient system, drop
//!    untouched columns, and solve it back to the original payloads.
//!
//! [`pure_forward`] scores the forward-every-copy baseline and
//! [`analytic_bound`] gives the closed-form bandwidth ratio between the
//! two schemes.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::Ratio;
use rand::Rng;
use thiserror::Error;

use crate::gf::{mat_solve, Field, GfError, Matrix, Solve};

/// Errors from pipeline operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodingError {
    /// A node or gateway index is outside the declared dimensions.
    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    /// Packets handed to one encode/decode call span generations.
    #[error("generation mismatch: expected {expected}, found {found}")]
    GenerationMismatch { expected: u32, found: u32 },
    /// Payloads in one batch have different symbol counts.
    #[error("payload length mismatch: expected {expected}, found {found}")]
    PayloadLengthMismatch { expected: usize, found: usize },
    /// Coefficient vectors in one batch have different lengths.
    #[error("coefficient length mismatch: expected {expected}, found {found}")]
    CoeffLengthMismatch { expected: usize, found: usize },
    /// A coefficient or payload symbol lies outside the field in use;
    /// raw wire bytes are full octets, so this guards every table lookup.
    #[error("symbol {symbol:#04x} outside GF(2^{exp})")]
    SymbolOutOfField { symbol: u8, exp: u32 },
    /// The assembled decode system admits no solution; the claimed
    /// combinations contradict the payloads (possible only with corrupt
    /// or forged input).
    #[error("inconsistent decode system (contradictory rows {rows:?})")]
    InconsistentSystem { rows: Vec<usize> },
    /// The analytic bound needs at least one gateway.
    #[error("gateway count must be at least 1")]
    NoGateways,
    /// A serialized packet does not follow the wire layout.
    #[error("malformed wire bytes: {0}")]
    WireFormat(String),
    /// Field-level failure bubbled up from matrix arithmetic.
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// Binary coverage matrix: entry (i, j) is 1 iff gateway j hears node i.
///
/// Rows are nodes, columns are gateways. Stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityMatrix {
    n: usize,
    m: usize,
    bits: Vec<bool>,
}

impl ConnectivityMatrix {
    /// All-zero matrix for n nodes and m gateways.
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            bits: vec![false; n * m],
        }
    }

    /// Builds from per-node rows of 0/1 entries (one column per gateway).
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        let mut c = Self::new(n, m);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m, "ragged coverage rows");
            for (j, &bit) in row.iter().enumerate() {
                c.set(i, j, bit != 0);
            }
        }
        c
    }

    /// Every node heard by every gateway.
    pub fn all_ones(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            bits: vec![true; n * m],
        }
    }

    /// Small 3-node / 3-gateway mesh with 7 coverage links, handy as a
    /// worked example: forwarding every copy costs 7 packets per full
    /// generation, coded forwarding costs 3.
    pub fn toy() -> Self {
        Self::from_rows(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]])
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn gateways(&self) -> usize {
        self.m
    }

    pub fn get(&self, node: usize, gateway: usize) -> bool {
        self.bits[node * self.m + gateway]
    }

    pub fn set(&mut self, node: usize, gateway: usize, covered: bool) {
        self.bits[node * self.m + gateway] = covered;
    }

    /// Number of nodes gateway j hears.
    pub fn column_weight(&self, gateway: usize) -> usize {
        (0..self.n).filter(|&i| self.get(i, gateway)).count()
    }

    /// Number of gateways that hear node i.
    pub fn row_weight(&self, node: usize) -> usize {
        (0..self.m).filter(|&j| self.get(node, j)).count()
    }

    /// Whether at least one gateway hears node i.
    pub fn is_covered(&self, node: usize) -> bool {
        self.row_weight(node) > 0
    }

    /// Nodes heard by at least one gateway, ascending.
    pub fn covered_nodes(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_covered(i)).collect()
    }

    /// Total number of coverage links (the cost of forwarding one full
    /// generation without coding).
    pub fn total_links(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Builds the coverage matrix from a log of (gateway, node) observations,
/// e.g. raw forwards seen by the server during a calibration window.
///
/// Order-insensitive and idempotent: repeats set the same bit. Coverage
/// can be refreshed after topology changes by re-running this and then
/// [`generate_encoding_vectors`].
pub fn infer_connectivity(
    log: &[(usize, usize)],
    n: usize,
    m: usize,
) -> Result<ConnectivityMatrix, CodingError> {
    let mut c = ConnectivityMatrix::new(n, m);
    for &(gateway, node) in log {
        if gateway >= m {
            return Err(CodingError::IndexOutOfRange {
                what: "gateway",
                index: gateway,
                limit: m,
            });
        }
        if node >= n {
            return Err(CodingError::IndexOutOfRange {
                what: "node",
                index: node,
                limit: n,
            });
        }
        c.set(node, gateway, true);
    }
    Ok(c)
}

/// Which gateway owns each node.
///
/// A node's owner is the lowest-index gateway that hears it; nodes heard
/// by nobody have no owner. Owners partition the covered nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnershipAssignment {
    owner: Vec<Option<usize>>,
    owned_nodes: Vec<Vec<usize>>,
}

impl OwnershipAssignment {
    /// Owner gateway of `node`, if any gateway hears it.
    pub fn owner(&self, node: usize) -> Option<usize> {
        self.owner[node]
    }

    /// Nodes owned by `gateway`, ascending.
    pub fn owned_nodes(&self, gateway: usize) -> &[usize] {
        &self.owned_nodes[gateway]
    }

    pub fn gateways(&self) -> usize {
        self.owned_nodes.len()
    }
}

/// Per-gateway coefficient vectors drawn by [`generate_encoding_vectors`].
///
/// Gateway j holds one length-n vector per node it owns; each vector is
/// nonzero exactly on j's owned nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingVectorSet {
    vectors: Vec<Vec<Vec<u8>>>,
}

impl EncodingVectorSet {
    /// Vectors assigned to `gateway`.
    pub fn for_gateway(&self, gateway: usize) -> &[Vec<u8>] {
        &self.vectors[gateway]
    }

    /// Total vector count across gateways (= covered node count).
    pub fn total(&self) -> usize {
        self.vectors.iter().map(Vec::len).sum()
    }

    pub fn gateways(&self) -> usize {
        self.vectors.len()
    }
}

/// Assigns owners and draws encoding vectors from the coverage matrix.
///
/// Ownership is first-come: scanning gateways in increasing index, each
/// covered node sticks to the first gateway that hears it and is erased
/// from later columns. Gateway j then receives as many vectors as it owns
/// nodes, each with independent nonzero draws on those nodes and zeros
/// elsewhere. Draw order is fixed (gateway-major, then vector, then node
/// index), so a seeded stream reproduces the set exactly.
///
/// Coefficients are drawn from the nonzero elements so a vector's support
/// always equals the owned-node set; a zero draw would silently drop a
/// packet from a combination.
pub fn generate_encoding_vectors<R: Rng + ?Sized>(
    c: &ConnectivityMatrix,
    field: &Field,
    rng: &mut R,
) -> (OwnershipAssignment, EncodingVectorSet) {
    let (n, m) = (c.nodes(), c.gateways());

    // First-come ownership scan: keep the first set bit in each row,
    // clearing the node from every later gateway column.
    let mut kept = c.clone();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for j in 0..m {
        for (i, o) in owner.iter_mut().enumerate() {
            if kept.get(i, j) {
                if o.is_some() {
                    kept.set(i, j, false);
                } else {
                    *o = Some(j);
                }
            }
        }
    }

    let mut owned_nodes = vec![Vec::new(); m];
    for (i, &o) in owner.iter().enumerate() {
        if let Some(j) = o {
            owned_nodes[j].push(i);
        }
    }

    let mut vectors = Vec::with_capacity(m);
    for j in 0..m {
        let count = kept.column_weight(j);
        let mut per_gateway = Vec::with_capacity(count);
        for _ in 0..count {
            let mut g = vec![0u8; n];
            for (i, slot) in g.iter_mut().enumerate() {
                if kept.get(i, j) {
                    *slot = field.rand_nonzero(rng);
                }
            }
            per_gateway.push(g);
        }
        vectors.push(per_gateway);
    }

    (
        OwnershipAssignment { owner, owned_nodes },
        EncodingVectorSet { vectors },
    )
}

/// An uplink as transmitted by a node: L field symbols plus the
/// generation it belongs to. At most one per node per generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NativePacket {
    pub node: usize,
    pub generation: u32,
    pub payload: Vec<u8>,
}

impl NativePacket {
    pub fn new(node: usize, generation: u32, payload: Vec<u8>) -> Self {
        Self {
            node,
            generation,
            payload,
        }
    }
}

/// A gateway's linear combination of received packets.
///
/// `coeffs[i]` is the multiplier applied to node i's payload; it is
/// nonzero only for owned nodes whose packet actually arrived this
/// generation, so the vector literally describes the carried sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPacket {
    pub gateway: usize,
    pub generation: u32,
    pub coeffs: Vec<u8>,
    pub payload: Vec<u8>,
}

impl EncodedPacket {
    /// Serializes to the wire layout: generation (u32 LE), gateway
    /// (u16 LE), coefficient count (u16 LE), coefficients, payload length
    /// (u16 LE), payload.
    pub fn to_bytes(&self) -> Result<Vec<u8>, CodingError> {
        let gateway = u16::try_from(self.gateway)
            .map_err(|_| CodingError::WireFormat("gateway index exceeds u16".into()))?;
        let n = u16::try_from(self.coeffs.len())
            .map_err(|_| CodingError::WireFormat("coefficient count exceeds u16".into()))?;
        let l = u16::try_from(self.payload.len())
            .map_err(|_| CodingError::WireFormat("payload length exceeds u16".into()))?;
        let mut out = Vec::with_capacity(12 + self.coeffs.len() + self.payload.len());
        out.extend_from_slice(&self.generation.to_le_bytes());
        out.extend_from_slice(&gateway.to_le_bytes());
        out.extend_from_slice(&n.to_le_bytes());
        out.extend_from_slice(&self.coeffs);
        out.extend_from_slice(&l.to_le_bytes());
        out.extend_from_slice(&self.payload);
        Ok(out)
    }

    /// Parses the layout written by [`EncodedPacket::to_bytes`]; rejects
    /// truncated input and trailing garbage.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodingError> {
        let mut at = 0usize;
        let take = |at: &mut usize, len: usize| -> Result<&[u8], CodingError> {
            let end = *at + len;
            if end > bytes.len() {
                return Err(CodingError::WireFormat(format!(
                    "truncated: wanted {len} bytes at offset {at}, have {}",
                    bytes.len() - *at,
                    at = *at
                )));
            }
            let s = &bytes[*at..end];
            *at = end;
            Ok(s)
        };

        let generation = u32::from_le_bytes(take(&mut at, 4)?.try_into().unwrap());
        let gateway = u16::from_le_bytes(take(&mut at, 2)?.try_into().unwrap());
        let n = u16::from_le_bytes(take(&mut at, 2)?.try_into().unwrap());
        let coeffs = take(&mut at, usize::from(n))?.to_vec();
        let l = u16::from_le_bytes(take(&mut at, 2)?.try_into().unwrap());
        let payload = take(&mut at, usize::from(l))?.to_vec();
        if at != bytes.len() {
            return Err(CodingError::WireFormat(format!(
                "{} trailing bytes",
                bytes.len() - at
            )));
        }
        Ok(Self {
            gateway: usize::from(gateway),
            generation,
            coeffs,
            payload,
        })
    }
}

/// Rejects any byte that is not a symbol of `field`.
fn check_symbols(bytes: &[u8], field: &Field) -> Result<(), CodingError> {
    match bytes.iter().find(|&&s| !field.contains(s)) {
        Some(&symbol) => Err(CodingError::SymbolOutOfField {
            symbol,
            exp: field.exponent(),
        }),
        None => Ok(()),
    }
}

/// Encodes one generation at gateway `j`, consuming vectors from index 0.
///
/// For each received packet from an owned node — membership tested on the
/// first vector's support, which every vector of the set shares — the next
/// unused vector g is consumed and one packet is emitted carrying
/// payload Σ g[i]·payload_i over the received packets, with g zeroed at
/// indices that did not arrive. Packets from non-owned nodes contribute
/// nothing and are not forwarded in any form; the emitted count equals
/// the number of received owned packets.
///
/// For streams that span generations and must keep consuming where the
/// last call stopped, use [`GatewayEncoder`].
pub fn encode_at_gateway(
    j: usize,
    vectors: &[Vec<u8>],
    received: &[NativePacket],
    field: &Field,
) -> Result<Vec<EncodedPacket>, CodingError> {
    encode_from_cursor(j, vectors, received, field, &mut 0)
}

fn encode_from_cursor(
    j: usize,
    vectors: &[Vec<u8>],
    received: &[NativePacket],
    field: &Field,
    cursor: &mut usize,
) -> Result<Vec<EncodedPacket>, CodingError> {
    let Some(first) = received.first() else {
        return Ok(Vec::new());
    };
    let generation = first.generation;
    let payload_len = first.payload.len();
    for p in received {
        if p.generation != generation {
            return Err(CodingError::GenerationMismatch {
                expected: generation,
                found: p.generation,
            });
        }
        if p.payload.len() != payload_len {
            return Err(CodingError::PayloadLengthMismatch {
                expected: payload_len,
                found: p.payload.len(),
            });
        }
    }
    let Some(template) = vectors.first() else {
        // A gateway that owns nothing encodes nothing.
        return Ok(Vec::new());
    };
    let n = template.len();
    for p in received {
        if p.node >= n {
            return Err(CodingError::IndexOutOfRange {
                what: "node",
                index: p.node,
                limit: n,
            });
        }
        // Radio payloads arrive as raw bytes; they must already be
        // symbols of the field the deployment runs in.
        check_symbols(&p.payload, field)?;
    }

    let mut out = Vec::new();
    for packet in received {
        if template[packet.node] == 0 {
            continue; // not owned here
        }
        let g = &vectors[*cursor % vectors.len()];
        *cursor = (*cursor + 1) % vectors.len();
        check_symbols(g, field)?; // guards against a vector/field mismatch

        let mut payload = vec![0u8; payload_len];
        let mut coeffs = vec![0u8; n];
        for p in received {
            let c = g[p.node];
            coeffs[p.node] = c;
            field.vec_add_scaled(&mut payload, &p.payload, c);
        }
        out.push(EncodedPacket {
            gateway: j,
            generation,
            coeffs,
            payload,
        });
    }
    Ok(out)
}

/// Stateful per-gateway encoder for multi-generation streams.
///
/// Keeps the vector cursor between calls: vectors unused in one
/// generation are consumed first in the next, and the cursor wraps
/// around once every vector has been used. Reuse across generations is
/// harmless because decoding reads only the reported (masked) rows.
#[derive(Debug, Clone)]
pub struct GatewayEncoder {
    gateway: usize,
    vectors: Vec<Vec<u8>>,
    cursor: usize,
}

impl GatewayEncoder {
    pub fn new(gateway: usize, vectors: Vec<Vec<u8>>) -> Self {
        Self {
            gateway,
            vectors,
            cursor: 0,
        }
    }

    pub fn gateway(&self) -> usize {
        self.gateway
    }

    /// Encodes one generation, resuming from the saved cursor.
    pub fn encode(
        &mut self,
        received: &[NativePacket],
        field: &Field,
    ) -> Result<Vec<EncodedPacket>, CodingError> {
        encode_from_cursor(
            self.gateway,
            &self.vectors,
            received,
            field,
            &mut self.cursor,
        )
    }
}

/// How much of a generation the server managed to reconstruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// Every node present in the system was recovered.
    Full,
    /// Rank deficiency: some nodes recovered, the rest reported.
    Partial,
    /// Nothing to decode (no packet touched any node).
    Empty,
}

/// Outcome of [`decode_at_server`] for one generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Recovered payload per node index.
    pub recovered: BTreeMap<usize, Vec<u8>>,
    /// Nodes present in the system but not uniquely determined.
    pub unrecovered: BTreeSet<usize>,
    pub status: DecodeStatus,
}

/// Decodes one generation of encoded packets back to native payloads.
///
/// Coefficient rows are stacked into one system; node columns that no
/// packet touches are dropped (those nodes are simply absent, not failed).
/// Full rank recovers every remaining column exactly. Rank deficiency
/// yields a partial result: columns pinned down despite the deficiency
/// are recovered, the rest are listed unrecovered. Linearly dependent
/// (redundant) rows are absorbed by the elimination.
///
/// Because owners partition the nodes, the system splits into
/// independent blocks (connected components of the row-support graph);
/// each block is solved on its own, which keeps large meshes fast and
/// means one singular block can never spoil another. The combined answer
/// is identical to eliminating the whole system at once.
pub fn decode_at_server(
    packets: &[EncodedPacket],
    field: &Field,
) -> Result<DecodeResult, CodingError> {
    let Some(first) = packets.first() else {
        return Ok(DecodeResult {
            recovered: BTreeMap::new(),
            unrecovered: BTreeSet::new(),
            status: DecodeStatus::Empty,
        });
    };
    let generation = first.generation;
    let n = first.coeffs.len();
    let payload_len = first.payload.len();
    for p in packets {
        if p.generation != generation {
            return Err(CodingError::GenerationMismatch {
                expected: generation,
                found: p.generation,
            });
        }
        if p.coeffs.len() != n {
            return Err(CodingError::CoeffLengthMismatch {
                expected: n,
                found: p.coeffs.len(),
            });
        }
        if p.payload.len() != payload_len {
            return Err(CodingError::PayloadLengthMismatch {
                expected: payload_len,
                found: p.payload.len(),
            });
        }
        // Packets may come straight off the wire; every byte must be a
        // field symbol before it can index the arithmetic tables.
        check_symbols(&p.coeffs, field)?;
        check_symbols(&p.payload, field)?;
    }

    // A row touching no column asserts 0 = payload; reject the forgery
    // now because the block split below would silently drop the row.
    for (r, p) in packets.iter().enumerate() {
        if p.coeffs.iter().all(|&c| c == 0) && p.payload.iter().any(|&s| s != 0) {
            return Err(CodingError::InconsistentSystem { rows: vec![r] });
        }
    }

    // Keep only node columns some packet actually references.
    let kept: Vec<usize> = (0..n)
        .filter(|&i| packets.iter().any(|p| p.coeffs[i] != 0))
        .collect();
    if kept.is_empty() {
        return Ok(DecodeResult {
            recovered: BTreeMap::new(),
            unrecovered: BTreeSet::new(),
            status: DecodeStatus::Empty,
        });
    }

    // Union columns that share a row; the resulting components are the
    // independent blocks.
    let mut uf = UnionFind::new(kept.len());
    let col_slot: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(s, &c)| (c, s)).collect();
    for p in packets {
        let mut support = (0..n).filter(|&i| p.coeffs[i] != 0).map(|i| col_slot[&i]);
        if let Some(head) = support.next() {
            for s in support {
                uf.union(head, s);
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for slot in 0..kept.len() {
        blocks.entry(uf.find(slot)).or_default().push(slot);
    }

    let mut recovered = BTreeMap::new();
    let mut unrecovered = BTreeSet::new();
    let mut all_full = true;
    for slots in blocks.values() {
        // Rows whose support lies in this block, in packet order.
        let rows: Vec<usize> = packets
            .iter()
            .enumerate()
            .filter(|(_, p)| slots.iter().any(|&s| p.coeffs[kept[s]] != 0))
            .map(|(r, _)| r)
            .collect();

        let mut coeffs = Matrix::new(rows.len(), slots.len());
        let mut payloads = Matrix::new(rows.len(), payload_len);
        for (rr, &r) in rows.iter().enumerate() {
            for (cc, &s) in slots.iter().enumerate() {
                coeffs[(rr, cc)] = packets[r].coeffs[kept[s]];
            }
            for (cc, &sym) in packets[r].payload.iter().enumerate() {
                payloads[(rr, cc)] = sym;
            }
        }

        match mat_solve(field, &coeffs, &payloads)? {
            Solve::Unique(x) => {
                for (cc, &s) in slots.iter().enumerate() {
                    recovered.insert(kept[s], x.row(cc).to_vec());
                }
            }
            Solve::Deficient(rep) => {
                all_full = false;
                for (cc, vals) in &rep.resolved {
                    recovered.insert(kept[slots[*cc]], vals.clone());
                }
                for cc in rep.unrecoverable_cols() {
                    unrecovered.insert(kept[slots[cc]]);
                }
            }
            Solve::Inconsistent { rows: bad } => {
                return Err(CodingError::InconsistentSystem {
                    rows: bad.into_iter().map(|rr| rows[rr]).collect(),
                });
            }
        }
    }

    Ok(DecodeResult {
        recovered,
        unrecovered,
        status: if all_full {
            DecodeStatus::Full
        } else {
            DecodeStatus::Partial
        },
    })
}

/// Minimal union-find for grouping columns into blocks.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Packet count of the forward-every-copy baseline: each gateway relays
/// each reception raw, so the total is just the sum of reception counts.
pub fn pure_forward(received_per_gateway: &[Vec<NativePacket>]) -> usize {
    received_per_gateway.iter().map(Vec::len).sum()
}

/// Closed-form bandwidth relation between the two schemes when every
/// covered node's traffic is heard by its owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandwidthBound {
    /// Encoded-packet count: baseline / m.
    pub coded: Ratio<u64>,
    /// Packets saved: (1 - 1/m) × baseline.
    pub saved: Ratio<u64>,
}

/// Computes the analytic bound from a baseline packet count and the
/// gateway count, as exact rationals.
pub fn analytic_bound(baseline: u64, m: u64) -> Result<BandwidthBound, CodingError> {
    if m == 0 {
        return Err(CodingError::NoGateways);
    }
    Ok(BandwidthBound {
        coded: Ratio::new(baseline, m),
        saved: Ratio::new(baseline * (m - 1), m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf() -> Field {
        Field::gf128()
    }

    /// Every transmitted packet reaches every covering gateway.
    fn deterministic_reception(
        c: &ConnectivityMatrix,
        transmitted: &[NativePacket],
    ) -> Vec<Vec<NativePacket>> {
        (0..c.gateways())
            .map(|j| {
                transmitted
                    .iter()
                    .filter(|p| c.get(p.node, j))
                    .cloned()
                    .collect()
            })
            .collect()
    }

    fn random_matrix(n: usize, m: usize, rng: &mut ChaCha8Rng) -> ConnectivityMatrix {
        let mut c = ConnectivityMatrix::new(n, m);
        for i in 0..n {
            for j in 0..m {
                c.set(i, j, rng.gen_bool(0.5));
            }
        }
        c
    }

    #[test]
    fn infer_from_empty_log_is_all_zero() {
        let c = infer_connectivity(&[], 4, 2).unwrap();
        assert_eq!(c, ConnectivityMatrix::new(4, 2));
    }

    #[test]
    fn infer_sets_exactly_the_observed_links() {
        let c = infer_connectivity(&[(0, 0), (0, 0), (1, 2)], 3, 2).unwrap();
        let mut expected = ConnectivityMatrix::new(3, 2);
        expected.set(0, 0, true);
        expected.set(2, 1, true);
        assert_eq!(c, expected);
    }

    #[test]
    fn infer_full_log_gives_all_ones() {
        let mut log = Vec::new();
        for j in 0..3 {
            for i in 0..4 {
                log.push((j, i));
            }
        }
        let c = infer_connectivity(&log, 4, 3).unwrap();
        assert_eq!(c, ConnectivityMatrix::all_ones(4, 3));
    }

    #[test]
    fn infer_is_order_insensitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut log = vec![(0, 1), (2, 3), (1, 1), (0, 0), (2, 3)];
        let reference = infer_connectivity(&log, 5, 3).unwrap();
        for _ in 0..10 {
            log.shuffle(&mut rng);
            assert_eq!(infer_connectivity(&log, 5, 3).unwrap(), reference);
        }
    }

    #[test]
    fn infer_rejects_out_of_range_indices() {
        assert!(matches!(
            infer_connectivity(&[(2, 0)], 3, 2),
            Err(CodingError::IndexOutOfRange { what: "gateway", .. })
        ));
        assert!(matches!(
            infer_connectivity(&[(0, 3)], 3, 2),
            Err(CodingError::IndexOutOfRange { what: "node", .. })
        ));
    }

    #[test]
    fn identity_coverage_assigns_each_gateway_its_own_node() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = ConnectivityMatrix::from_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (own, vecs) = generate_encoding_vectors(&c, &f, &mut rng);
        for j in 0..3 {
            assert_eq!(own.owned_nodes(j), &[j]);
            assert_eq!(vecs.for_gateway(j).len(), 1);
            let g = &vecs.for_gateway(j)[0];
            assert!(g[j] != 0);
            assert!(g.iter().enumerate().all(|(i, &v)| i == j || v == 0));
        }
        assert_eq!(vecs.total(), 3);
    }

    #[test]
    fn toy_mesh_yields_three_vectors_with_first_come_owners() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = ConnectivityMatrix::toy();
        assert_eq!(c.total_links(), 7);
        let (own, vecs) = generate_encoding_vectors(&c, &f, &mut rng);
        assert_eq!(own.owner(0), Some(0));
        assert_eq!(own.owner(1), Some(0));
        assert_eq!(own.owner(2), Some(1));
        assert_eq!(own.owned_nodes(0), &[0, 1]);
        assert_eq!(own.owned_nodes(1), &[2]);
        assert_eq!(own.owned_nodes(2), &[] as &[usize]);
        assert_eq!(vecs.total(), 3);
    }

    #[test]
    fn uncovered_nodes_are_owned_by_nobody() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = ConnectivityMatrix::from_rows(&[&[1, 1], &[0, 0], &[0, 1]]);
        let (own, vecs) = generate_encoding_vectors(&c, &f, &mut rng);
        assert_eq!(own.owner(1), None);
        assert!((0..2).all(|j| !own.owned_nodes(j).contains(&1)));
        assert_eq!(vecs.total(), c.covered_nodes().len());
    }

    #[test]
    fn ownership_partitions_covered_nodes() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12usize);
            let m = rng.gen_range(1..=5usize);
            let c = random_matrix(n, m, &mut rng);
            let (own, vecs) = generate_encoding_vectors(&c, &f, &mut rng);

            let mut seen = BTreeSet::new();
            for j in 0..m {
                for &node in own.owned_nodes(j) {
                    assert!(seen.insert(node), "node {node} owned twice");
                    assert!(c.get(node, j), "owner does not cover node");
                }
            }
            let covered: BTreeSet<usize> = c.covered_nodes().into_iter().collect();
            assert_eq!(seen, covered);

            // First-come rule: owner is the lowest covering gateway.
            for i in 0..n {
                let lowest = (0..m).find(|&j| c.get(i, j));
                assert_eq!(own.owner(i), lowest);
            }
            assert_eq!(vecs.total(), covered.len());
        }
    }

    #[test]
    fn vector_support_is_exactly_the_owned_set() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let c = random_matrix(10, 4, &mut rng);
            let (own, vecs) = generate_encoding_vectors(&c, &f, &mut rng);
            for j in 0..4 {
                let owned: BTreeSet<usize> = own.owned_nodes(j).iter().copied().collect();
                assert_eq!(vecs.for_gateway(j).len(), owned.len());
                for g in vecs.for_gateway(j) {
                    let support: BTreeSet<usize> = g
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(|(i, _)| i)
                        .collect();
                    assert_eq!(support, owned);
                }
            }
        }
    }

    #[test]
    fn seeded_vector_generation_is_reproducible() {
        let f = gf();
        let c = ConnectivityMatrix::toy();
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(
            generate_encoding_vectors(&c, &f, &mut a),
            generate_encoding_vectors(&c, &f, &mut b)
        );
    }

    #[test]
    fn encoding_nothing_emits_nothing() {
        let f = gf();
        let out = encode_at_gateway(0, &[vec![0, 3, 0]], &[], &f).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn single_owned_node_scalar_roundtrip() {
        let f = gf();
        let c = 0x55u8;
        let payload = vec![1, 2, 3, 0x7f];
        let received = [NativePacket::new(1, 0, payload.clone())];
        let out = encode_at_gateway(0, &[vec![0, c, 0]], &received, &f).unwrap();
        assert_eq!(out.len(), 1);
        let expected: Vec<u8> = payload.iter().map(|&s| f.mul(c, s)).collect();
        assert_eq!(out[0].payload, expected);
        assert_eq!(out[0].coeffs, vec![0, c, 0]);

        let inv = f.inv(c).unwrap();
        let back: Vec<u8> = out[0].payload.iter().map(|&s| f.mul(inv, s)).collect();
        assert_eq!(back, payload);
    }

    #[test]
    fn two_of_three_owned_transmit_and_decode_back() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // One gateway owning all three nodes; only nodes 0 and 2 transmit.
        let c = ConnectivityMatrix::from_rows(&[&[1], &[1], &[1]]);
        let (_, vecs) = generate_encoding_vectors(&c, &f, &mut rng);
        let originals = [
            NativePacket::new(0, 7, vec![0x11, 0x22]),
            NativePacket::new(2, 7, vec![0x33, 0x44]),
        ];
        let out = encode_at_gateway(0, vecs.for_gateway(0), &originals, &f).unwrap();
        assert_eq!(out.len(), 2);
        for p in &out {
            assert_eq!(p.coeffs[1], 0, "absent node must be masked out");
        }

        // Solve the 2x2 system restricted to the transmitting columns.
        let a = Matrix::from_rows(vec![
            vec![out[0].coeffs[0], out[0].coeffs[2]],
            vec![out[1].coeffs[0], out[1].coeffs[2]],
        ])
        .unwrap();
        let b = Matrix::from_rows(vec![out[0].payload.clone(), out[1].payload.clone()]).unwrap();
        match mat_solve(&f, &a, &b).unwrap() {
            Solve::Unique(x) => {
                assert_eq!(x.row(0), originals[0].payload.as_slice());
                assert_eq!(x.row(1), originals[1].payload.as_slice());
            }
            other => panic!("expected unique solution, got {other:?}"),
        }
    }

    #[test]
    fn non_owned_packets_are_not_forwarded_in_any_form() {
        let f = gf();
        // Gateway owns node 0 only, but hears node 1 as well.
        let vectors = vec![vec![0x21, 0, 0]];
        let received = [
            NativePacket::new(0, 0, vec![5]),
            NativePacket::new(1, 0, vec![9]),
        ];
        let out = encode_at_gateway(0, &vectors, &received, &f).unwrap();
        assert_eq!(out.len(), 1, "one owned reception, one packet");
        assert_eq!(out[0].coeffs[1], 0);
        assert_eq!(out[0].coeffs[2], 0);
        // The non-owned payload must not leak into the sum.
        assert_eq!(out[0].payload, vec![f.mul(0x21, 5)]);
    }

    #[test]
    fn mixed_generations_are_rejected() {
        let f = gf();
        let received = [
            NativePacket::new(0, 1, vec![1]),
            NativePacket::new(1, 2, vec![2]),
        ];
        assert_eq!(
            encode_at_gateway(0, &[vec![1, 1]], &received, &f),
            Err(CodingError::GenerationMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn mismatched_payload_lengths_are_rejected_at_encode() {
        let f = gf();
        let received = [
            NativePacket::new(0, 1, vec![1, 2]),
            NativePacket::new(1, 1, vec![2]),
        ];
        assert_eq!(
            encode_at_gateway(0, &[vec![1, 1]], &received, &f),
            Err(CodingError::PayloadLengthMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn encoder_cursor_walks_vectors_across_generations_and_wraps() {
        let f = gf();
        let vectors = vec![vec![2, 0], vec![3, 0], vec![4, 0]];
        let mut enc = GatewayEncoder::new(0, vectors.clone());

        // Generation 0: one owned reception consumes vector 0.
        let g0 = enc
            .encode(&[NativePacket::new(0, 0, vec![1])], &f)
            .unwrap();
        assert_eq!(g0[0].coeffs[0], 2);

        // Generation 1: two receptions? only node 0 is owned; one packet,
        // consuming vector 1.
        let g1 = enc
            .encode(
                &[
                    NativePacket::new(0, 1, vec![1]),
                    NativePacket::new(1, 1, vec![1]),
                ],
                &f,
            )
            .unwrap();
        assert_eq!(g1.len(), 1);
        assert_eq!(g1[0].coeffs[0], 3);

        // Generations 2 and 3: vector 2, then wrap back to vector 0.
        let g2 = enc
            .encode(&[NativePacket::new(0, 2, vec![1])], &f)
            .unwrap();
        assert_eq!(g2[0].coeffs[0], 4);
        let g3 = enc
            .encode(&[NativePacket::new(0, 3, vec![1])], &f)
            .unwrap();
        assert_eq!(g3[0].coeffs[0], 2);
    }

    #[test]
    fn stateless_encode_always_starts_at_the_first_vector() {
        let f = gf();
        let vectors = vec![vec![2], vec![3]];
        let rx = [NativePacket::new(0, 0, vec![1])];
        let a = encode_at_gateway(0, &vectors, &rx, &f).unwrap();
        let b = encode_at_gateway(0, &vectors, &rx, &f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].coeffs[0], 2);
    }

    #[test]
    fn decode_single_packet_scalar() {
        let f = gf();
        let p = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![0, 0x15, 0],
            payload: vec![f.mul(0x15, 0x42)],
        };
        let res = decode_at_server(&[p], &f).unwrap();
        assert_eq!(res.status, DecodeStatus::Full);
        assert_eq!(res.recovered[&1], vec![0x42]);
        assert!(res.unrecovered.is_empty());
    }

    #[test]
    fn full_pipeline_roundtrip_on_the_toy_mesh() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let c = ConnectivityMatrix::toy();
        let (_, vecs) = generate_encoding_vectors(&c, &f, &mut rng);

        let originals: Vec<NativePacket> = (0..3)
            .map(|i| {
                let payload: Vec<u8> = (0..8).map(|_| f.rand_symbol(&mut rng)).collect();
                NativePacket::new(i, 0, payload)
            })
            .collect();
        let received = deterministic_reception(&c, &originals);

        let mut encoded = Vec::new();
        for (j, heard) in received.iter().enumerate() {
            encoded.extend(encode_at_gateway(j, vecs.for_gateway(j), heard, &f).unwrap());
        }
        assert_eq!(encoded.len(), 3);
        assert_eq!(pure_forward(&received), 7);

        let res = decode_at_server(&encoded, &f).unwrap();
        assert_eq!(res.status, DecodeStatus::Full);
        for p in &originals {
            assert_eq!(res.recovered[&p.node], p.payload);
        }
    }

    #[test]
    fn proportional_rows_report_both_nodes_unrecovered() {
        let f = gf();
        // Two combinations of the same two nodes with proportional
        // coefficients carry no second equation.
        let a = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![1, 2, 0],
            payload: vec![7],
        };
        let b = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![2, 4, 0],
            payload: vec![14],
        };
        let res = decode_at_server(&[a, b], &f).unwrap();
        assert_eq!(res.status, DecodeStatus::Partial);
        assert!(res.recovered.is_empty());
        assert_eq!(res.unrecovered, BTreeSet::from([0, 1]));
    }

    #[test]
    fn singular_block_does_not_poison_independent_block() {
        let f = gf();
        let bad1 = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![1, 2, 0],
            payload: vec![7],
        };
        let bad2 = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![2, 4, 0],
            payload: vec![14],
        };
        let good = EncodedPacket {
            gateway: 1,
            generation: 0,
            coeffs: vec![0, 0, 3],
            payload: vec![f.mul(3, 0x31)],
        };
        let res = decode_at_server(&[bad1, bad2, good], &f).unwrap();
        assert_eq!(res.status, DecodeStatus::Partial);
        assert_eq!(res.recovered.len(), 1);
        assert_eq!(res.recovered[&2], vec![0x31]);
        assert_eq!(res.unrecovered, BTreeSet::from([0, 1]));
    }

    #[test]
    fn decode_empty_input_is_empty_status() {
        let f = gf();
        let res = decode_at_server(&[], &f).unwrap();
        assert_eq!(res.status, DecodeStatus::Empty);
        assert!(res.recovered.is_empty() && res.unrecovered.is_empty());
    }

    #[test]
    fn decode_all_zero_coefficients_is_empty_status() {
        let f = gf();
        let p = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![0, 0],
            payload: vec![0],
        };
        let res = decode_at_server(&[p], &f).unwrap();
        assert_eq!(res.status, DecodeStatus::Empty);
    }

    #[test]
    fn decode_rejects_mixed_generations_and_ragged_shapes() {
        let f = gf();
        let a = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![1],
            payload: vec![1],
        };
        let mut b = a.clone();
        b.generation = 1;
        assert!(matches!(
            decode_at_server(&[a.clone(), b], &f),
            Err(CodingError::GenerationMismatch { .. })
        ));

        let mut c = a.clone();
        c.coeffs = vec![1, 0];
        assert!(matches!(
            decode_at_server(&[a.clone(), c], &f),
            Err(CodingError::CoeffLengthMismatch { .. })
        ));

        let mut d = a.clone();
        d.payload = vec![1, 2];
        assert!(matches!(
            decode_at_server(&[a, d], &f),
            Err(CodingError::PayloadLengthMismatch { .. })
        ));
    }

    #[test]
    fn contradictory_packets_are_an_error_not_a_result() {
        let f = gf();
        let a = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![1],
            payload: vec![1],
        };
        let mut b = a.clone();
        b.payload = vec![2];
        assert!(matches!(
            decode_at_server(&[a, b], &f),
            Err(CodingError::InconsistentSystem { .. })
        ));
    }

    #[test]
    fn encoded_rows_stay_inside_their_gateways_block() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let c = random_matrix(8, 3, &mut rng);
            let (own, vecs) = generate_encoding_vectors(&c, &f, &mut rng);
            let mut packets = Vec::new();
            for i in 0..8 {
                if rng.gen_bool(0.6) {
                    packets.push(NativePacket::new(i, 0, vec![f.rand_symbol(&mut rng)]));
                }
            }
            let received = deterministic_reception(&c, &packets);
            for (j, heard) in received.iter().enumerate() {
                let owned: BTreeSet<usize> = own.owned_nodes(j).iter().copied().collect();
                for p in encode_at_gateway(j, vecs.for_gateway(j), heard, &f).unwrap() {
                    for (i, &coef) in p.coeffs.iter().enumerate() {
                        if coef != 0 {
                            assert!(owned.contains(&i), "row leaked outside owner block");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn packet_counts_match_brute_force_over_all_transmission_subsets() {
        let f = gf();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..5 {
            let n = 10usize;
            let m = 4usize;
            let c = random_matrix(n, m, &mut rng);
            let (_, vecs) = generate_encoding_vectors(&c, &f, &mut rng);
            for subset in 0u32..(1 << n) {
                let transmitted: Vec<NativePacket> = (0..n)
                    .filter(|i| subset & (1 << i) != 0)
                    .map(|i| NativePacket::new(i, 0, vec![1]))
                    .collect();
                let received = deterministic_reception(&c, &transmitted);

                // Baseline = sum over transmitting nodes of their coverage.
                let expected_baseline: usize =
                    transmitted.iter().map(|p| c.row_weight(p.node)).sum();
                assert_eq!(pure_forward(&received), expected_baseline);

                // Coded = number of transmitting covered nodes.
                let expected_coded = transmitted
                    .iter()
                    .filter(|p| c.is_covered(p.node))
                    .count();
                let total: usize = (0..m)
                    .map(|j| {
                        encode_at_gateway(j, vecs.for_gateway(j), &received[j], &f)
                            .unwrap()
                            .len()
                    })
                    .sum();
                assert_eq!(total, expected_coded);
            }
        }
    }

    #[test]
    fn wire_roundtrip_and_golden_bytes() {
        let p = EncodedPacket {
            gateway: 2,
            generation: 0x01020304,
            coeffs: vec![0x00, 0x15, 0x7f],
            payload: vec![0x0a, 0x0b],
        };
        let bytes = p.to_bytes().unwrap();
        assert_eq!(
            bytes,
            vec![
                0x04, 0x03, 0x02, 0x01, // generation, little-endian
                0x02, 0x00, // gateway
                0x03, 0x00, // coefficient count
                0x00, 0x15, 0x7f, // coefficients
                0x02, 0x00, // payload length
                0x0a, 0x0b, // payload
            ]
        );
        assert_eq!(EncodedPacket::from_bytes(&bytes).unwrap(), p);
    }

    #[test]
    fn wire_rejects_truncation_and_trailing_bytes() {
        let p = EncodedPacket {
            gateway: 0,
            generation: 1,
            coeffs: vec![1],
            payload: vec![2],
        };
        let bytes = p.to_bytes().unwrap();
        assert!(matches!(
            EncodedPacket::from_bytes(&bytes[..bytes.len() - 1]),
            Err(CodingError::WireFormat(_))
        ));
        let mut longer = bytes.clone();
        longer.push(0);
        assert!(matches!(
            EncodedPacket::from_bytes(&longer),
            Err(CodingError::WireFormat(_))
        ));
    }

    #[test]
    fn baseline_counts() {
        assert_eq!(pure_forward(&[]), 0);
        let c = ConnectivityMatrix::all_ones(4, 3);
        let packets: Vec<NativePacket> =
            (0..4).map(|i| NativePacket::new(i, 0, vec![0])).collect();
        assert_eq!(pure_forward(&deterministic_reception(&c, &packets)), 12);

        let toy = ConnectivityMatrix::toy();
        let packets: Vec<NativePacket> =
            (0..3).map(|i| NativePacket::new(i, 0, vec![0])).collect();
        assert_eq!(pure_forward(&deterministic_reception(&toy, &packets)), 7);
    }

    #[test]
    fn out_of_field_symbols_are_rejected_not_paniced_on() {
        let field = Field::gf128(); // symbols 0x00..=0x7f

        // Radio payload with a top bit set cannot be encoded in GF(2^7).
        let vectors = vec![vec![1u8, 0], vec![2, 0]];
        let bad_payload = [NativePacket::new(0, 0, vec![0xde, 0xad])];
        assert_eq!(
            encode_at_gateway(0, &vectors, &bad_payload, &field),
            Err(CodingError::SymbolOutOfField {
                symbol: 0xde,
                exp: 7
            })
        );

        // Vectors drawn in a wider field are caught when consumed.
        let wide_vectors = vec![vec![0x90u8, 0]];
        let ok_payload = [NativePacket::new(0, 0, vec![0x01, 0x02])];
        assert_eq!(
            encode_at_gateway(0, &wide_vectors, &ok_payload, &field),
            Err(CodingError::SymbolOutOfField {
                symbol: 0x90,
                exp: 7
            })
        );

        // Wire bytes parse structurally but must not reach the tables:
        // a forged coefficient of 0xff would index past the log table.
        let forged = EncodedPacket {
            gateway: 0,
            generation: 0,
            coeffs: vec![0xff, 0x01],
            payload: vec![0x01],
        };
        let reparsed = EncodedPacket::from_bytes(&forged.to_bytes().unwrap()).unwrap();
        assert_eq!(
            decode_at_server(&[reparsed], &field),
            Err(CodingError::SymbolOutOfField {
                symbol: 0xff,
                exp: 7
            })
        );

        // The same bytes are fine in GF(2^8), where every octet is a symbol.
        let full = Field::with_exponent(8).unwrap();
        assert!(decode_at_server(&[forged], &full).is_ok());
    }

    #[test]
    fn analytic_bound_matches_hand_computation() {
        let one_gateway = analytic_bound(21, 1).unwrap();
        assert_eq!(one_gateway.coded, Ratio::from_integer(21));
        assert_eq!(one_gateway.saved, Ratio::from_integer(0));

        let b = analytic_bound(21, 3).unwrap();
        assert_eq!(b.coded, Ratio::from_integer(7));
        assert_eq!(b.saved, Ratio::from_integer(14));

        // Full coverage: n*m forwarded raw collapses to n coded.
        let full = analytic_bound(200 * 10, 10).unwrap();
        assert_eq!(full.coded, Ratio::from_integer(200));
        assert_eq!(full.saved, Ratio::new(9 * 2000, 10));

        assert_eq!(analytic_bound(5, 0), Err(CodingError::NoGateways));
    }
}
