//! The 26 three-hyperedge motifs and the classifier that maps a connected
//! triple of hyperedges to its motif.
//!
//! A triple `{e_i, e_j, e_k}` is described by the emptiness of the seven
//! Venn regions, in this fixed order:
//!
//! | bit | region                |
//! |-----|-----------------------|
//! | 0   | `e_i \ e_j \ e_k`     |
//! | 1   | `e_j \ e_k \ e_i`     |
//! | 2   | `e_k \ e_i \ e_j`     |
//! | 3   | `e_i ∩ e_j \ e_k`     |
//! | 4   | `e_j ∩ e_k \ e_i`     |
//! | 5   | `e_k ∩ e_i \ e_j`     |
//! | 6   | `e_i ∩ e_j ∩ e_k`     |
//!
//! Of the 128 patterns, those with an empty hyperedge, two identical
//! hyperedges, or fewer than two overlapping pairs are rejected. The rest fall
//! into 26 orbits under relabeling of the three hyperedges. Open orbits
//! (exactly two overlapping pairs) are numbered 17..=22 and closed orbits
//! 1..=16, 23..=26, each group in ascending order of the smallest pattern
//! value in the orbit.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::projection::ProjectedGraph;

pub const NUM_MOTIFS: usize = 26;
pub const NUM_PATTERNS: usize = 128;

/// Membership mask (bit x = hyperedge x) of each region, in region order.
const REGION_MASKS: [u8; 7] = [0b001, 0b010, 0b100, 0b011, 0b110, 0b101, 0b111];

const PERMUTATIONS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct MotifId(u8);

impl MotifId {
    pub fn new(id: u8) -> Option<Self> {
        (1..=NUM_MOTIFS as u8).contains(&id).then_some(MotifId(id))
    }

    /// From a 0-based array index.
    pub fn from_index(index: usize) -> Self {
        assert!(index < NUM_MOTIFS, "motif index {index} out of range");
        MotifId(index as u8 + 1)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// 0-based position in a 26-entry vector.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn is_open(self) -> bool {
        MotifTable::global().is_open(self)
    }

    pub fn all() -> impl Iterator<Item = MotifId> {
        (1..=NUM_MOTIFS as u8).map(MotifId)
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Seven-bit emptiness vector; bit r set iff region r is non-empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PatternBits(u8);

impl PatternBits {
    pub fn new(bits: u8) -> Option<Self> {
        (bits < NUM_PATTERNS as u8).then_some(PatternBits(bits))
    }

    pub fn from_regions(regions: [bool; 7]) -> Self {
        PatternBits(regions.iter().enumerate().fold(0, |acc, (r, &on)| acc | ((on as u8) << r)))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn region(self, r: usize) -> bool {
        self.0 >> r & 1 == 1
    }

    /// Pattern seen after hyperedge x is relabeled as `perm[x]`.
    pub fn permute(self, perm: [u8; 3]) -> Self {
        let mut out = 0u8;
        for (r, &mask) in REGION_MASKS.iter().enumerate() {
            if self.region(r) {
                let mapped = (0..3).filter(|&x| mask >> x & 1 == 1).fold(0u8, |m, x| m | 1 << perm[x]);
                let target = REGION_MASKS.iter().position(|&m| m == mapped).unwrap();
                out |= 1 << target;
            }
        }
        PatternBits(out)
    }

    fn any_region(self, pred: impl Fn(u8) -> bool) -> bool {
        REGION_MASKS.iter().enumerate().any(|(r, &m)| pred(m) && self.region(r))
    }

    fn edge_nonempty(self, x: u8) -> bool {
        self.any_region(|m| m >> x & 1 == 1)
    }

    fn overlaps(self, x: u8, y: u8) -> bool {
        self.any_region(|m| m >> x & 1 == 1 && m >> y & 1 == 1)
    }

    fn identical(self, x: u8, y: u8) -> bool {
        !self.any_region(|m| (m >> x & 1) != (m >> y & 1))
    }

    /// Number of overlapping hyperedge pairs (0..=3).
    pub fn overlapping_pairs(self) -> usize {
        [(0, 1), (1, 2), (2, 0)].iter().filter(|&&(x, y)| self.overlaps(x, y)).count()
    }

    pub fn validate(self) -> std::result::Result<(), InvalidReason> {
        if (0..3).any(|x| !self.edge_nonempty(x)) {
            return Err(InvalidReason::EmptyHyperedge);
        }
        if [(0, 1), (1, 2), (2, 0)].iter().any(|&(x, y)| self.identical(x, y)) {
            return Err(InvalidReason::DuplicateHyperedges);
        }
        if self.overlapping_pairs() < 2 {
            return Err(InvalidReason::Disconnected);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidReason {
    EmptyHyperedge,
    DuplicateHyperedges,
    Disconnected,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::EmptyHyperedge => "empty hyperedge",
            InvalidReason::DuplicateHyperedges => "duplicated hyperedges",
            InvalidReason::Disconnected => "disconnected",
        })
    }
}

/// Cardinalities of the seven regions, in region order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionCardinalities(pub [u64; 7]);

impl RegionCardinalities {
    /// Inclusion–exclusion from `|e_i|, |e_j|, |e_k|`, the pairwise overlaps
    /// `(|e_i∩e_j|, |e_j∩e_k|, |e_k∩e_i|)` and `|e_i∩e_j∩e_k|`.
    pub fn from_overlaps(sizes: [u64; 3], pairs: [u64; 3], triple: u64) -> Self {
        let [si, sj, sk] = sizes;
        let [ij, jk, ki] = pairs;
        RegionCardinalities([
            si + triple - ij - ki,
            sj + triple - ij - jk,
            sk + triple - ki - jk,
            ij - triple,
            jk - triple,
            ki - triple,
            triple,
        ])
    }

    pub fn pattern(&self) -> PatternBits {
        PatternBits::from_regions(self.0.map(|c| c > 0))
    }

    pub fn edge_sizes(&self) -> [u64; 3] {
        let r = self.0;
        [r[0] + r[3] + r[5] + r[6], r[1] + r[3] + r[4] + r[6], r[2] + r[4] + r[5] + r[6]]
    }

    pub fn pair_overlaps(&self) -> [u64; 3] {
        let r = self.0;
        [r[3] + r[6], r[4] + r[6], r[5] + r[6]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum PatternClass {
    Motif(MotifId),
    Invalid(InvalidReason),
}

#[derive(Debug, Clone, Serialize)]
pub struct MotifClass {
    pub id: MotifId,
    pub open: bool,
    /// Smallest pattern value in the orbit.
    pub canonical: PatternBits,
    /// Every pattern in the orbit, ascending.
    pub members: Vec<PatternBits>,
}

#[derive(Debug, Clone)]
pub struct MotifTable {
    lookup: [PatternClass; NUM_PATTERNS],
    classes: Vec<MotifClass>,
}

impl MotifTable {
    /// Shared table, built on first use.
    pub fn global() -> &'static MotifTable {
        static TABLE: OnceLock<MotifTable> = OnceLock::new();
        TABLE.get_or_init(build_motif_table)
    }

    pub fn class_of(&self, pattern: PatternBits) -> PatternClass {
        self.lookup[pattern.0 as usize]
    }

    pub fn lookup(&self, pattern: PatternBits) -> Option<MotifId> {
        match self.lookup[pattern.0 as usize] {
            PatternClass::Motif(id) => Some(id),
            PatternClass::Invalid(_) => None,
        }
    }

    pub fn classes(&self) -> &[MotifClass] {
        &self.classes
    }

    pub fn class(&self, id: MotifId) -> &MotifClass {
        &self.classes[id.index()]
    }

    pub fn is_open(&self, id: MotifId) -> bool {
        self.classes[id.index()].open
    }

    /// Hyperwedges contained in every instance: 2 for open, 3 for closed.
    pub fn wedges_per_instance(&self, id: MotifId) -> u32 {
        if self.is_open(id) {
            2
        } else {
            3
        }
    }

    /// Classifies from hyperedge sizes, pairwise overlaps
    /// `(ω_ij, ω_jk, ω_ki)` and the triple overlap. Hot path of every counter.
    #[inline]
    pub(crate) fn classify_overlaps(&self, sizes: [u32; 3], pairs: [u32; 3], triple: u32) -> PatternClass {
        let [si, sj, sk] = sizes;
        let [ij, jk, ki] = pairs;
        let regions = [
            si + triple - ij - ki,
            sj + triple - ij - jk,
            sk + triple - ki - jk,
            ij - triple,
            jk - triple,
            ki - triple,
            triple,
        ];
        let bits = regions.iter().enumerate().fold(0u8, |acc, (r, &c)| acc | (((c > 0) as u8) << r));
        self.lookup[bits as usize]
    }
}

/// Enumerates all 128 patterns, filters invalid ones, and numbers the
/// surviving orbits. Panics if the result is not 26 orbits with 6 open.
pub fn build_motif_table() -> MotifTable {
    let mut lookup = [PatternClass::Invalid(InvalidReason::EmptyHyperedge); NUM_PATTERNS];
    let mut orbits: Vec<(PatternBits, Vec<PatternBits>, bool)> = Vec::new();

    for bits in 0..NUM_PATTERNS as u8 {
        let pattern = PatternBits(bits);
        if let Err(reason) = pattern.validate() {
            lookup[bits as usize] = PatternClass::Invalid(reason);
            continue;
        }
        let mut members: Vec<PatternBits> = PERMUTATIONS.iter().map(|&p| pattern.permute(p)).collect();
        members.sort_unstable();
        members.dedup();
        if members[0] == pattern {
            orbits.push((pattern, members, pattern.overlapping_pairs() == 2));
        }
    }

    let (mut open, mut closed): (Vec<_>, Vec<_>) = orbits.into_iter().partition(|o| o.2);
    open.sort_by_key(|o| o.0);
    closed.sort_by_key(|o| o.0);
    assert_eq!(open.len() + closed.len(), NUM_MOTIFS, "motif table self-check: orbit count");
    assert_eq!(open.len(), 6, "motif table self-check: open orbit count");

    let closed_ids = (1..=16).chain(23..=26);
    let numbered = closed_ids.zip(closed).chain((17..=22).zip(open));
    let mut classes: Vec<MotifClass> = numbered
        .map(|(id, (canonical, members, open))| MotifClass { id: MotifId(id), open, canonical, members })
        .collect();
    classes.sort_by_key(|c| c.id);

    for class in &classes {
        for m in &class.members {
            lookup[m.0 as usize] = PatternClass::Motif(class.id);
        }
    }
    MotifTable { lookup, classes }
}

/// |a ∩ b ∩ c| for sorted member lists, probing from the smallest list.
pub fn triple_intersection(a: &[NodeId], b: &[NodeId], c: &[NodeId]) -> u32 {
    let mut lists = [a, b, c];
    lists.sort_by_key(|l| l.len());
    let [small, x, y] = lists;
    small.iter().filter(|v| x.binary_search(v).is_ok() && y.binary_search(v).is_ok()).count() as u32
}

fn check_triple(g: &Hypergraph, i: EdgeId, j: EdgeId, k: EdgeId) -> Result<()> {
    g.check_edge(i)?;
    g.check_edge(j)?;
    g.check_edge(k)?;
    if i == j || j == k || i == k {
        return Err(Error::InvalidArgument(format!("hyperedges {i}, {j}, {k} are not distinct")));
    }
    Ok(())
}

/// Region cardinalities of `{e_i, e_j, e_k}` by inclusion–exclusion, with
/// pairwise overlaps read from the projection.
pub fn region_cardinalities(g: &Hypergraph, p: &ProjectedGraph, i: EdgeId, j: EdgeId, k: EdgeId) -> Result<RegionCardinalities> {
    check_triple(g, i, j, k)?;
    let pairs = [p.overlap(i, j), p.overlap(j, k), p.overlap(k, i)];
    let triple = if pairs.iter().all(|&w| w > 0) { triple_intersection(g.edge(i), g.edge(j), g.edge(k)) } else { 0 };
    let sizes = [i, j, k].map(|x| g.edge_size(x) as u64);
    let regions = RegionCardinalities::from_overlaps(sizes, pairs.map(u64::from), triple as u64);
    regions.pattern().validate().map_err(Error::NotAnInstance)?;
    Ok(regions)
}

/// Motif of the connected triple `{e_i, e_j, e_k}`.
pub fn classify_triple(g: &Hypergraph, p: &ProjectedGraph, i: EdgeId, j: EdgeId, k: EdgeId) -> Result<MotifId> {
    let regions = region_cardinalities(g, p, i, j, k)?;
    match MotifTable::global().class_of(regions.pattern()) {
        PatternClass::Motif(id) => Ok(id),
        PatternClass::Invalid(reason) => Err(Error::NotAnInstance(reason)),
    }
}
