//! Lazily computed neighborhoods of the projected graph with a bounded cache.
//!
//! Only the list of hyperwedges is built up front (see
//! [`wedge_index`](crate::projection::wedge_index)); weighted adjacency lists
//! are materialized on demand from the incidence index and kept if the cache
//! policy allows. Budgets count cached `(neighbor, ω)` entries; one entry is
//! [`BYTES_PER_ENTRY`] bytes.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph};
use crate::projection::{Hyperwedge, Neighbor, NeighborList, NeighborSource};
use crate::rng;
use crate::sampling::{count_approx_wedge_from, EstimateVector, SamplerConfig};

pub const BYTES_PER_ENTRY: usize = std::mem::size_of::<Neighbor>();

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PinPolicy {
    /// Pin the hyperedges with the most neighbors in the projected graph.
    Degree,
    /// Pin a uniformly shuffled prefix of hyperedges.
    Random,
    /// Keep recently used neighborhoods, evicting the least recently used.
    Lru,
}

impl FromStr for PinPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree" => Ok(PinPolicy::Degree),
            "random" => Ok(PinPolicy::Random),
            "lru" => Ok(PinPolicy::Lru),
            other => Err(Error::InvalidArgument(format!("unknown memo policy `{other}` (expected degree, random or lru)"))),
        }
    }
}

/// Cache budget as an entry count or as a percentage of `Σ_i |N_{e_i}|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MemoBudget {
    Entries(usize),
    Percent(f64),
}

impl MemoBudget {
    pub fn resolve(self, total_adjacency: usize) -> usize {
        match self {
            MemoBudget::Entries(n) => n,
            MemoBudget::Percent(p) => ((p / 100.0) * total_adjacency as f64).floor() as usize,
        }
    }
}

impl FromStr for MemoBudget {
    type Err = Error;

    /// `12345` is an entry count; `2.5%` is a percentage.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("invalid memo budget `{s}`"));
        if let Some(p) = s.strip_suffix('%') {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            if !(0.0..=100.0).contains(&p) {
                return Err(bad());
            }
            Ok(MemoBudget::Percent(p))
        } else {
            s.trim().parse().map(MemoBudget::Entries).map_err(|_| bad())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MemoStats {
    pub neighborhoods_constructed: u64,
    /// Adjacency entries produced by those constructions, a proxy for the
    /// work spent rebuilding neighborhoods.
    pub entries_constructed: u64,
    pub cache_hits: u64,
    pub cached_entries: usize,
    pub bytes_equivalent: usize,
    pub budget_entries: usize,
}

#[derive(Debug, Default)]
struct LruState {
    entries: HashMap<EdgeId, (Arc<[Neighbor]>, u64)>,
    by_stamp: BTreeMap<u64, EdgeId>,
    clock: u64,
    size: usize,
}

/// Exact neighborhoods of `e_i` from the incidence index, sorted by id.
fn build_neighborhood(g: &Hypergraph, i: EdgeId) -> Vec<Neighbor> {
    let mut ids: Vec<EdgeId> = g.edge(i).iter().flat_map(|&v| g.incident(v).iter().copied()).filter(|&j| j != i).collect();
    ids.sort_unstable();
    let mut out: Vec<Neighbor> = Vec::new();
    for j in ids {
        match out.last_mut() {
            Some((last, w)) if *last == j => *w += 1,
            _ => out.push((j, 1)),
        }
    }
    out
}

pub struct NeighborhoodProvider<'g> {
    g: &'g Hypergraph,
    policy: PinPolicy,
    budget: usize,
    degree: Vec<usize>,
    pinned: Vec<bool>,
    slots: Vec<OnceLock<Arc<[Neighbor]>>>,
    lru: Mutex<LruState>,
    constructed: AtomicU64,
    constructed_entries: AtomicU64,
    hits: AtomicU64,
}

impl<'g> NeighborhoodProvider<'g> {
    /// `wedges` supplies the projected-graph degrees used for pinning; `seed`
    /// only matters for [`PinPolicy::Random`].
    pub fn new(g: &'g Hypergraph, wedges: &[Hyperwedge], budget: usize, policy: PinPolicy, seed: u64) -> Self {
        let n = g.num_edges();
        let mut degree = vec![0usize; n];
        for w in wedges {
            degree[w.i as usize] += 1;
            degree[w.j as usize] += 1;
        }

        let mut pinned = vec![false; n];
        let order: Option<Vec<EdgeId>> = match policy {
            PinPolicy::Degree => {
                let mut order: Vec<EdgeId> = (0..n as EdgeId).collect();
                order.sort_by(|&a, &b| degree[b as usize].cmp(&degree[a as usize]).then(a.cmp(&b)));
                Some(order)
            }
            PinPolicy::Random => {
                let mut order: Vec<EdgeId> = (0..n as EdgeId).collect();
                order.shuffle(&mut rng::stream(seed, 0));
                Some(order)
            }
            PinPolicy::Lru => None,
        };
        // The pinned set is the longest prefix of the priority order that
        // fits, so a larger budget always pins a superset.
        if let Some(order) = order {
            let mut used = 0usize;
            for i in order {
                let d = degree[i as usize];
                if used + d > budget {
                    break;
                }
                used += d;
                pinned[i as usize] = true;
            }
        }

        NeighborhoodProvider {
            g,
            policy,
            budget,
            degree,
            pinned,
            slots: (0..n).map(|_| OnceLock::new()).collect(),
            lru: Mutex::new(LruState::default()),
            constructed: AtomicU64::new(0),
            constructed_entries: AtomicU64::new(0),
            hits: AtomicU64::new(0),
        }
    }

    pub fn with_budget(g: &'g Hypergraph, wedges: &[Hyperwedge], budget: MemoBudget, policy: PinPolicy, seed: u64) -> Self {
        Self::new(g, wedges, budget.resolve(2 * wedges.len()), policy, seed)
    }

    pub fn policy(&self) -> PinPolicy {
        self.policy
    }

    pub fn is_pinned(&self, i: EdgeId) -> bool {
        self.pinned[i as usize]
    }

    fn construct(&self, i: EdgeId) -> Vec<Neighbor> {
        self.constructed.fetch_add(1, Ordering::Relaxed);
        let list = build_neighborhood(self.g, i);
        self.constructed_entries.fetch_add(list.len() as u64, Ordering::Relaxed);
        list
    }

    /// N_{e_i} with overlaps, identical to the full projection's list.
    pub fn get_neighborhood(&self, i: EdgeId) -> Result<NeighborList<'_>> {
        if i as usize >= self.g.num_edges() {
            return Err(Error::InvalidEdgeId { id: i as usize, num_edges: self.g.num_edges() });
        }
        Ok(self.lookup(i))
    }

    fn lookup(&self, i: EdgeId) -> NeighborList<'_> {
        match self.policy {
            PinPolicy::Degree | PinPolicy::Random => {
                if !self.pinned[i as usize] {
                    return NeighborList::Shared(self.construct(i).into());
                }
                let slot = &self.slots[i as usize];
                if let Some(list) = slot.get() {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return NeighborList::Borrowed(list);
                }
                NeighborList::Borrowed(slot.get_or_init(|| self.construct(i).into()))
            }
            PinPolicy::Lru => self.lookup_lru(i),
        }
    }

    fn lookup_lru(&self, i: EdgeId) -> NeighborList<'_> {
        {
            let mut state = self.lru.lock().unwrap_or_else(|e| e.into_inner());
            state.clock += 1;
            let now = state.clock;
            if let Some((list, stamp)) = state.entries.get_mut(&i) {
                let list = list.clone();
                let old = std::mem::replace(stamp, now);
                state.by_stamp.remove(&old);
                state.by_stamp.insert(now, i);
                self.hits.fetch_add(1, Ordering::Relaxed);
                return NeighborList::Shared(list);
            }
        }
        let list: Arc<[Neighbor]> = self.construct(i).into();
        if list.len() <= self.budget {
            let mut state = self.lru.lock().unwrap_or_else(|e| e.into_inner());
            // Another worker may have inserted the same list meanwhile.
            if !state.entries.contains_key(&i) {
                while state.size + list.len() > self.budget {
                    let Some((_, victim)) = state.by_stamp.pop_first() else { break };
                    if let Some((old, _)) = state.entries.remove(&victim) {
                        state.size -= old.len();
                    }
                }
                state.clock += 1;
                let now = state.clock;
                state.size += list.len();
                state.by_stamp.insert(now, i);
                state.entries.insert(i, (list.clone(), now));
            }
        }
        NeighborList::Shared(list)
    }

    pub fn stats(&self) -> MemoStats {
        let cached_entries = match self.policy {
            PinPolicy::Lru => self.lru.lock().unwrap_or_else(|e| e.into_inner()).size,
            _ => self.slots.iter().filter_map(|s| s.get()).map(|l| l.len()).sum(),
        };
        MemoStats {
            neighborhoods_constructed: self.constructed.load(Ordering::Relaxed),
            entries_constructed: self.constructed_entries.load(Ordering::Relaxed),
            cache_hits: self.hits.load(Ordering::Relaxed),
            cached_entries,
            bytes_equivalent: cached_entries * BYTES_PER_ENTRY,
            budget_entries: self.budget,
        }
    }

    /// Upper bound on what the pinned policies may ever cache.
    pub fn pinned_entries(&self) -> usize {
        self.pinned.iter().zip(&self.degree).filter(|(p, _)| **p).map(|(_, d)| d).sum()
    }
}

impl NeighborSource for NeighborhoodProvider<'_> {
    fn neighbors_of(&self, i: EdgeId) -> NeighborList<'_> {
        self.lookup(i)
    }
}

/// Hyperwedge sampling that materializes neighborhoods through `np`. Draws
/// the same wedges as [`count_approx_wedge`](crate::sampling::count_approx_wedge)
/// for the same configuration, so the estimates are identical.
pub fn wedge_sampling_with_cache(
    g: &Hypergraph,
    np: &NeighborhoodProvider<'_>,
    wedges: &[Hyperwedge],
    cfg: &SamplerConfig,
) -> Result<EstimateVector> {
    count_approx_wedge_from(g, np, wedges, cfg)
}
