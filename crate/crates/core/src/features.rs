//! Sparse feature vectors keyed by canonical structured identifiers.
//!
//! A [`FeatureVector`] is an immutable list of `(key, weight)` entries sorted
//! by the key's serialized bytes; zero weights are never stored. Vectors are
//! assembled through a hash-table backed [`FeatureBuilder`]. The dot product
//! walks the smaller operand in ascending key order and gallops through the
//! larger one, so its cost is governed by the smaller support and its
//! floating-point summation order is fixed.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{param, Result};

/// Key namespaces used by the kernels of this crate.
pub mod tag {
    pub const WALK: u8 = 1;
    pub const SHORTEST_PATH: u8 = 2;
    pub const GRAPHLET: u8 = 3;
    pub const WL_COLOR: u8 = 4;
    pub const GRAPHHOPPER: u8 = 5;
    pub const BIN: u8 = 6;
    pub const CLASS: u8 = 7;
    pub const ATTRIBUTE: u8 = 8;
    pub const PAIR: u8 = 9;
    pub const PART: u8 = 10;
    pub const LABEL: u8 = 11;
    pub const LENGTH: u8 = 12;
}

/// Canonical byte serialization of a `(tag, payload)` feature identifier.
///
/// The encoding is the tag as a byte followed by the payload integers in
/// zig-zag LEB128 form. Composite keys ([`FeatureKey::pair`],
/// [`FeatureKey::part`]) embed their components after a length or index
/// prefix. Equality, ordering and hashing all use the bytes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureKey(SmallVec<[u8; 22]>);

fn put_varint(buf: &mut SmallVec<[u8; 22]>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            buf.push(byte);
            return;
        }
        buf.push(byte | 0x80);
    }
}

fn zigzag(x: i64) -> u64 {
    ((x << 1) ^ (x >> 63)) as u64
}

impl FeatureKey {
    pub fn new(tag: u8, payload: &[i64]) -> Self {
        let mut buf = SmallVec::new();
        buf.push(tag);
        for &x in payload {
            put_varint(&mut buf, zigzag(x));
        }
        Self(buf)
    }

    /// Key from unsigned payload values, e.g. labels or counts.
    pub fn from_unsigned(tag: u8, payload: &[u32]) -> Self {
        let mut buf = SmallVec::new();
        buf.push(tag);
        for &x in payload {
            put_varint(&mut buf, zigzag(x as i64));
        }
        Self(buf)
    }

    /// Key of the Kronecker product component `(a, b)`.
    pub fn pair(a: &FeatureKey, b: &FeatureKey) -> Self {
        let mut buf = SmallVec::with_capacity(a.0.len() + b.0.len() + 2);
        buf.push(tag::PAIR);
        put_varint(&mut buf, a.0.len() as u64);
        buf.extend_from_slice(&a.0);
        buf.extend_from_slice(&b.0);
        Self(buf)
    }

    /// Key `k` moved into the namespace of direct-sum part `index`.
    pub fn part(index: usize, k: &FeatureKey) -> Self {
        let mut buf = SmallVec::with_capacity(k.0.len() + 2);
        buf.push(tag::PART);
        put_varint(&mut buf, index as u64);
        buf.extend_from_slice(&k.0);
        Self(buf)
    }

    pub fn tag(&self) -> u8 {
        self.0[0]
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Decodes the payload of a plain (non-composite) key.
    pub fn payload(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut acc = 0u64;
        let mut shift = 0;
        for &b in &self.0[1..] {
            acc |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                out.push(((acc >> 1) as i64) ^ -((acc & 1) as i64));
                acc = 0;
                shift = 0;
            } else {
                shift += 7;
            }
        }
        out
    }

    fn to_hex(&self) -> String {
        self.0.iter().fold(String::with_capacity(2 * self.0.len()), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

impl std::fmt::Debug for FeatureKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FeatureKey({})", self.to_hex())
    }
}

/// Immutable sparse vector.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureVector {
    entries: Vec<(FeatureKey, f64)>,
}

impl FeatureVector {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn one_hot(key: FeatureKey) -> Self {
        Self::from_entries([(key, 1.0)])
    }

    /// Collects entries, summing duplicate keys and dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (FeatureKey, f64)>) -> Self {
        let mut b = FeatureBuilder::new();
        for (k, w) in entries {
            b.add(k, w);
        }
        b.build()
    }

    /// Number of non-zero components.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &FeatureKey) -> f64 {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .map_or(0.0, |i| self.entries[i].1)
    }

    /// Entries in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = (&FeatureKey, f64)> + '_ {
        self.entries.iter().map(|(k, w)| (k, *w))
    }

    pub fn dot(&self, other: &FeatureVector) -> f64 {
        dot(self, other)
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum()
    }

    /// `key<TAB>weight` lines in ascending key order; keys are hex bytes.
    pub fn to_debug_text(&self) -> String {
        let mut out = String::new();
        for (k, w) in &self.entries {
            let _ = writeln!(out, "{}\t{}", k.to_hex(), w);
        }
        out
    }
}

/// Single-writer accumulator for a [`FeatureVector`].
#[derive(Debug, Default)]
pub struct FeatureBuilder {
    map: FxHashMap<FeatureKey, f64>,
}

impl FeatureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self {
            map: FxHashMap::with_capacity_and_hasher(cap, Default::default()),
        }
    }

    pub fn add(&mut self, key: FeatureKey, weight: f64) {
        *self.map.entry(key).or_insert(0.0) += weight;
    }

    pub fn add_vector(&mut self, v: &FeatureVector) {
        for (k, w) in v.iter() {
            self.add(k.clone(), w);
        }
    }

    /// Current number of distinct keys (including ones that may cancel to 0).
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn build(self) -> FeatureVector {
        let mut entries: Vec<_> = self.map.into_iter().filter(|&(_, w)| w != 0.0).collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        FeatureVector { entries }
    }
}

/// `Σ_k u[k]·v[k]` over the common support.
pub fn dot(u: &FeatureVector, v: &FeatureVector) -> f64 {
    let (small, large) = if u.nnz() <= v.nnz() { (u, v) } else { (v, u) };
    let large = &large.entries;
    let mut lo = 0usize;
    let mut sum = 0.0;
    for (key, w) in &small.entries {
        // Gallop forward from the current cursor, then bisect.
        let mut step = 1usize;
        let mut hi = lo;
        while hi < large.len() && large[hi].0 < *key {
            lo = hi + 1;
            hi += step;
            step <<= 1;
        }
        let end = (hi + 1).min(large.len());
        match large[lo..end].binary_search_by(|(k, _)| k.cmp(key)) {
            Ok(i) => {
                sum += w * large[lo + i].1;
                lo += i + 1;
            }
            Err(i) => lo += i,
        }
        if lo >= large.len() {
            break;
        }
    }
    sum
}

/// Feature map of `α·k`: every weight multiplied by `√α`.
pub fn scale(phi: &FeatureVector, alpha: f64) -> Result<FeatureVector> {
    if !(alpha >= 0.0) {
        return Err(param(format!(
            "kernel scaling factor must be non-negative, got {alpha}"
        )));
    }
    if alpha == 0.0 {
        return Ok(FeatureVector::empty());
    }
    let s = alpha.sqrt();
    Ok(FeatureVector {
        entries: phi
            .entries
            .iter()
            .map(|(k, w)| (k.clone(), w * s))
            .filter(|&(_, w)| w != 0.0)
            .collect(),
    })
}

/// Feature map of a kernel sum: concatenation with per-part namespaces.
pub fn direct_sum(parts: &[FeatureVector]) -> FeatureVector {
    let mut entries = Vec::with_capacity(parts.iter().map(FeatureVector::nnz).sum());
    for (i, p) in parts.iter().enumerate() {
        entries.extend(p.entries.iter().map(|(k, w)| (FeatureKey::part(i, k), *w)));
    }
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    FeatureVector { entries }
}

/// Feature map of a kernel product: the Kronecker product of the factors.
pub fn tensor_product(u: &FeatureVector, v: &FeatureVector) -> FeatureVector {
    let mut entries = Vec::with_capacity(u.nnz() * v.nnz());
    for (ka, wa) in &u.entries {
        for (kb, wb) in &v.entries {
            let w = wa * wb;
            if w != 0.0 {
                entries.push((FeatureKey::pair(ka, kb), w));
            }
        }
    }
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    FeatureVector { entries }
}

/// Feature map of the cross product kernel on sets: the pointwise sum.
pub fn set_sum<'a>(parts: impl IntoIterator<Item = &'a FeatureVector>) -> FeatureVector {
    let mut b = FeatureBuilder::new();
    for p in parts {
        b.add_vector(p);
    }
    b.build()
}
