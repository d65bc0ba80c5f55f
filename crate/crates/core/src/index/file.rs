//! On-disk index format.
//!
//! ```text
//! "BPTH" | version u16 | section count u16
//! section table: count × (kind u32, offset u64, length u64)
//! sections (offsets are absolute)
//! crc32 of every preceding byte, u32
//! ```
//!
//! All integers are little-endian. Vector sections hold a u64 count, a u64
//! offset per vector (relative to the section start), then the vectors in the
//! bit-vector binary layout.

use std::fs;
use std::path::Path;

use super::BitPathIndex;
use crate::bitvec::CompressedBitVector;
use crate::error::{Error, Result};
use crate::graph::{CollapsedGraph, Dictionary, Edge};

pub const MAGIC: &[u8; 4] = b"BPTH";
pub const FORMAT_VERSION: u16 = 1;

const PREAMBLE: usize = 4 + 2 + 2;
const TABLE_ENTRY: usize = 4 + 8 + 8;
const TRAILER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u32)]
enum Section {
    Nodes = 1,
    Labels = 2,
    SccMap = 3,
    Edges = 4,
    Successors = 5,
    Predecessors = 6,
    LabelEdges = 7,
}

const SECTIONS: [Section; 7] = [
    Section::Nodes,
    Section::Labels,
    Section::SccMap,
    Section::Edges,
    Section::Successors,
    Section::Predecessors,
    Section::LabelEdges,
];

/// Byte size of each section of a serialized index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SectionSizes {
    pub nodes: u64,
    pub labels: u64,
    pub scc_map: u64,
    pub edges: u64,
    pub successors: u64,
    pub predecessors: u64,
    pub label_edges: u64,
    pub total: u64,
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn encode_dictionary(d: &Dictionary) -> Vec<u8> {
    let mut out = Vec::new();
    put_u64(&mut out, d.len() as u64);
    for name in d.names() {
        put_u32(&mut out, name.len() as u32);
        out.extend_from_slice(name.as_bytes());
    }
    out
}

fn encode_vectors(vs: &[CompressedBitVector]) -> Vec<u8> {
    let mut out = Vec::new();
    put_u64(&mut out, vs.len() as u64);
    let mut at = 8 + 8 * vs.len() as u64;
    for v in vs {
        put_u64(&mut out, at);
        at += v.serialized_len() as u64;
    }
    for v in vs {
        v.write_to(&mut out);
    }
    out
}

/// Serializes the index into a byte vector.
pub fn write_index(idx: &BitPathIndex) -> Vec<u8> {
    let cg = idx.graph();
    let mut scc = Vec::new();
    put_u64(&mut scc, cg.node_count() as u64);
    put_u64(&mut scc, cg.scc_map().len() as u64);
    for &c in cg.scc_map() {
        put_u32(&mut scc, c);
    }
    let mut edges = Vec::new();
    put_u64(&mut edges, idx.edge_count() as u64);
    for id in 1..=idx.edge_count() as u32 {
        let e = idx.edge_by_id(id);
        put_u32(&mut edges, e.tail);
        put_u32(&mut edges, e.head);
        put_u32(&mut edges, e.label);
    }
    let bodies = [
        encode_dictionary(&cg.original_nodes),
        encode_dictionary(cg.labels()),
        scc,
        edges,
        encode_vectors(&idx.n_succ_e),
        encode_vectors(&idx.n_pred_e),
        encode_vectors(&idx.el_id),
    ];

    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(SECTIONS.len() as u16).to_le_bytes());
    let mut offset = (PREAMBLE + TABLE_ENTRY * SECTIONS.len()) as u64;
    for (kind, body) in SECTIONS.iter().zip(&bodies) {
        put_u32(&mut out, *kind as u32);
        put_u64(&mut out, offset);
        put_u64(&mut out, body.len() as u64);
        offset += body.len() as u64;
    }
    for body in &bodies {
        out.extend_from_slice(body);
    }
    let crc = crc32fast::hash(&out);
    put_u32(&mut out, crc);
    out
}

pub fn save_index(idx: &BitPathIndex, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_index(idx))?;
    Ok(())
}

pub fn load_index(path: impl AsRef<Path>) -> Result<BitPathIndex> {
    read_index(&fs::read(path)?)
}

/// Bounds-checked little-endian reader over one section.
struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8], what: &'static str) -> Self {
        Self { buf, pos: 0, what }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Truncated(self.what));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// A count whose items occupy at least `min_item` bytes each.
    fn count(&mut self, min_item: usize) -> Result<usize> {
        let n = self.u64()?;
        let left = (self.buf.len() - self.pos) as u64;
        if n.saturating_mul(min_item as u64) > left {
            return Err(Error::Truncated(self.what));
        }
        Ok(n as usize)
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Corrupt(format!("trailing bytes in {} section", self.what)));
        }
        Ok(())
    }
}

fn decode_dictionary(buf: &[u8], what: &'static str) -> Result<Dictionary> {
    let mut r = Reader::new(buf, what);
    let n = r.count(4)?;
    let mut names = Vec::with_capacity(n);
    for _ in 0..n {
        let len = r.u32()? as usize;
        let bytes = r.take(len)?;
        let s = std::str::from_utf8(bytes).map_err(|_| Error::Corrupt(format!("invalid UTF-8 in {what} section")))?;
        names.push(s.to_owned());
    }
    r.finish()?;
    Dictionary::from_names(names)
}

fn decode_vectors(
    buf: &[u8],
    what: &'static str,
    expected_count: usize,
    universe: u64,
) -> Result<Vec<CompressedBitVector>> {
    let mut r = Reader::new(buf, what);
    let n = r.count(8)?;
    if n != expected_count {
        return Err(Error::Corrupt(format!(
            "{what} section has {n} vectors, expected {expected_count}"
        )));
    }
    let offsets: Vec<u64> = (0..n).map(|_| r.u64()).collect::<Result<_>>()?;
    let mut at = r.pos as u64;
    let mut out = Vec::with_capacity(n);
    for off in offsets {
        if off != at {
            return Err(Error::Corrupt(format!("{what} vector offset {off}, expected {at}")));
        }
        let (v, used) = CompressedBitVector::read_from(&buf[at as usize..], universe).map_err(|e| match e {
            Error::Truncated(_) => Error::Truncated(what),
            other => other,
        })?;
        at += used as u64;
        out.push(v);
    }
    if at as usize != buf.len() {
        return Err(Error::Corrupt(format!("trailing bytes in {what} section")));
    }
    Ok(out)
}

/// Parses a serialized index, validating magic, version, checksum and every
/// section.
pub fn read_index(bytes: &[u8]) -> Result<BitPathIndex> {
    if bytes.len() < 4 {
        let mut found = [0u8; 4];
        found[..bytes.len()].copy_from_slice(bytes);
        if &found != MAGIC {
            return Err(Error::BadMagic { found });
        }
        return Err(Error::Truncated("header"));
    }
    let found: [u8; 4] = bytes[..4].try_into().unwrap();
    if &found != MAGIC {
        return Err(Error::BadMagic { found });
    }
    if bytes.len() < PREAMBLE + TRAILER {
        return Err(Error::Truncated("header"));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let body_end = bytes.len() - TRAILER;
    let stored = u32::from_le_bytes(bytes[body_end..].try_into().unwrap());
    let computed = crc32fast::hash(&bytes[..body_end]);
    if stored != computed {
        // a short file usually shows up as a checksum mismatch; say which
        let count = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
        let table_end = PREAMBLE + TABLE_ENTRY * count;
        if count == 0 {
            return Err(Error::Checksum { stored, computed });
        }
        if table_end <= body_end {
            let last = &bytes[table_end - TABLE_ENTRY..table_end];
            let off = u64::from_le_bytes(last[4..12].try_into().unwrap());
            let len = u64::from_le_bytes(last[12..20].try_into().unwrap());
            if off.checked_add(len).is_some_and(|end| end > body_end as u64) {
                return Err(Error::Truncated("section data"));
            }
        } else {
            return Err(Error::Truncated("section table"));
        }
        return Err(Error::Checksum { stored, computed });
    }

    let count = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    if count != SECTIONS.len() {
        return Err(Error::Corrupt(format!(
            "expected {} sections, found {count}",
            SECTIONS.len()
        )));
    }
    let mut table = Reader::new(&bytes[PREAMBLE..body_end], "section table");
    let mut bodies: Vec<&[u8]> = Vec::with_capacity(count);
    let mut expected_offset = (PREAMBLE + TABLE_ENTRY * count) as u64;
    for kind in SECTIONS {
        let k = table.u32()?;
        let off = table.u64()?;
        let len = table.u64()?;
        if k != kind as u32 {
            return Err(Error::Corrupt(format!("section {k} where {} expected", kind as u32)));
        }
        if off != expected_offset || off.saturating_add(len) > body_end as u64 {
            return Err(Error::Corrupt(format!("section {k} has bad bounds")));
        }
        bodies.push(&bytes[off as usize..(off + len) as usize]);
        expected_offset = off + len;
    }
    if expected_offset != body_end as u64 {
        return Err(Error::Corrupt("unaccounted bytes after last section".into()));
    }

    let nodes = decode_dictionary(bodies[0], "node dictionary")?;
    let labels = decode_dictionary(bodies[1], "label dictionary")?;

    let mut r = Reader::new(bodies[2], "scc map");
    let collapsed = r.u64()?;
    let originals = r.count(4)?;
    if originals != nodes.len() || collapsed as usize > originals {
        return Err(Error::Corrupt("scc map size disagrees with node dictionary".into()));
    }
    let scc_map: Vec<u32> = (0..originals).map(|_| r.u32()).collect::<Result<_>>()?;
    r.finish()?;

    let mut r = Reader::new(bodies[3], "edge table");
    let m = r.count(12)?;
    let mut by_id = Vec::with_capacity(m);
    for _ in 0..m {
        let (tail, head, label) = (r.u32()?, r.u32()?, r.u32()?);
        by_id.push(Edge::new(tail, head, label));
    }
    r.finish()?;

    let label_count = labels.len();
    let cg = CollapsedGraph::from_parts(nodes, labels, scc_map, collapsed as usize, by_id.clone())?;
    let eid = by_id
        .iter()
        .map(|e| {
            cg.edge_index(e)
                .ok_or_else(|| Error::Corrupt("edge table mismatch".into()))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = cg.node_count();
    let universe = m as u64;
    let succ = decode_vectors(bodies[4], "successor vectors", n, universe)?;
    let pred = decode_vectors(bodies[5], "predecessor vectors", n, universe)?;
    let el = decode_vectors(bodies[6], "label vectors", label_count, universe)?;
    if el.iter().map(|v| v.count_ones()).sum::<u64>() != universe {
        return Err(Error::Corrupt("label vectors do not partition the edges".into()));
    }
    Ok(BitPathIndex::from_parts(cg, eid, succ, pred, el))
}

/// Section sizes of the serialized form of `idx`.
pub fn section_sizes(idx: &BitPathIndex) -> SectionSizes {
    let bytes = write_index(idx);
    let entry = |i: usize| {
        let at = PREAMBLE + TABLE_ENTRY * i;
        u64::from_le_bytes(bytes[at + 12..at + 20].try_into().unwrap())
    };
    SectionSizes {
        nodes: entry(0),
        labels: entry(1),
        scc_map: entry(2),
        edges: entry(3),
        successors: entry(4),
        predecessors: entry(5),
        label_edges: entry(6),
        total: bytes.len() as u64,
    }
}

impl BitPathIndex {
    pub fn section_sizes(&self) -> SectionSizes {
        section_sizes(self)
    }
}
