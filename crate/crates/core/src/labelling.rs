//! Landmark selection, highway cover labelling construction, and
//! labelling-based distance decoding.
//!
//! A labelling `Γ = (H, L)` consists of the *highway* `H` — the all-pairs
//! distance matrix over a small landmark set `R` — and per-vertex *labels*
//! `L(v)`: distances from `v` to those landmarks that are not already covered
//! through another landmark. Together they answer `d(r, v)` exactly for every
//! landmark `r` by combining a label entry with a highway hop, while keeping
//! far fewer entries than a full landmark-distance table.
//!
//! The labelling kept here is *minimal*: `v` stores an `r`-label if and only
//! if `r` is reachable and no shortest `r`–`v` path passes through another
//! landmark. Minimality makes the labelling unique for a fixed landmark set,
//! which the maintenance and test code rely on: any two ways of arriving at
//! the labelling of the same graph must agree entry-for-entry.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// Hop count with an infinity sentinel.
///
/// Infinity compares greater than every finite value and absorbs addition.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dist(pub u32);

impl Dist {
    pub const INF: Dist = Dist(u32::MAX);
    pub const ZERO: Dist = Dist(0);

    #[inline]
    pub fn is_finite(self) -> bool {
        self != Dist::INF
    }

    /// `self + rhs`, with infinity absorbing.
    #[inline]
    pub fn plus(self, rhs: Dist) -> Dist {
        if self.is_finite() && rhs.is_finite() {
            Dist(self.0 + rhs.0)
        } else {
            Dist::INF
        }
    }

    /// One hop further; infinity stays infinite.
    #[inline]
    pub fn step(self) -> Dist {
        self.plus(Dist(1))
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "inf")
        }
    }
}

/// Distance from a landmark `r` paired with the *landmark flag*: whether some
/// shortest path of that length passes through a landmark other than `r`.
///
/// A path ending at a landmark counts as passing through it, so for another
/// landmark `w` the flag is always `true`. Unreachable vertices carry
/// `(inf, false)`.
///
/// Ordered lexicographically with `true < false` on the flag: among equal
/// distances, a landmark-passing length sorts first. That ordering is what
/// lets the maintenance searches prefer prunable paths.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LandmarkLength {
    pub d: Dist,
    pub l: bool,
}

impl LandmarkLength {
    pub const UNREACHABLE: LandmarkLength = LandmarkLength {
        d: Dist::INF,
        l: false,
    };

    pub fn new(d: Dist, l: bool) -> Self {
        LandmarkLength { d, l }
    }
}

impl Ord for LandmarkLength {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // !l maps true -> false so that flagged lengths compare smaller.
        (self.d, !self.l).cmp(&(other.d, !other.l))
    }
}

impl PartialOrd for LandmarkLength {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LandmarkLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d, if self.l { "T" } else { "F" })
    }
}

/// One label entry: distance from the housed vertex to `landmarks[landmark_index]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LabelEntry {
    pub landmark_index: u32,
    pub distance: Dist,
}

/// Ordered landmark set with reverse lookup from vertex to landmark index.
#[derive(Clone, Debug)]
pub struct LandmarkSet {
    list: Vec<VertexId>,
    rank: HashMap<VertexId, u32>,
}

#[derive(Debug, Error)]
pub enum LabellingError {
    #[error("landmark count {k} invalid for a graph with {n} vertices")]
    InvalidLandmarkCount { k: usize, n: usize },
    #[error("landmark {0} out of range (graph has {1} vertices)")]
    LandmarkOutOfRange(VertexId, usize),
    #[error("duplicate landmark {0}")]
    DuplicateLandmark(VertexId),
}

impl LandmarkSet {
    /// Builds a landmark set from an explicit vertex list, preserving order.
    pub fn new(g: &Graph, vertices: Vec<VertexId>) -> Result<Self, LabellingError> {
        Self::from_vertices(g.n(), vertices)
    }

    pub(crate) fn from_vertices(n: usize, vertices: Vec<VertexId>) -> Result<Self, LabellingError> {
        let mut rank = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if v.index() >= n {
                return Err(LabellingError::LandmarkOutOfRange(v, n));
            }
            if rank.insert(v, i as u32).is_some() {
                return Err(LabellingError::DuplicateLandmark(v));
            }
        }
        Ok(LandmarkSet {
            list: vertices,
            rank,
        })
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    /// Landmark vertices in selection order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.list
    }

    pub fn vertex(&self, index: usize) -> VertexId {
        self.list[index]
    }

    /// Index of `v` within the set, if `v` is a landmark.
    pub fn rank(&self, v: VertexId) -> Option<u32> {
        self.rank.get(&v).copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.rank.contains_key(&v)
    }
}

impl PartialEq for LandmarkSet {
    fn eq(&self, other: &Self) -> bool {
        self.list == other.list
    }
}

impl Eq for LandmarkSet {}

/// Selects the `k` highest-degree vertices, ties broken by smaller id; the
/// set is ordered by descending degree.
pub fn select_landmarks(g: &Graph, k: usize) -> Result<LandmarkSet, LabellingError> {
    if k == 0 || k > g.n() {
        return Err(LabellingError::InvalidLandmarkCount { k, n: g.n() });
    }
    let mut order: Vec<u32> = (0..g.n() as u32).collect();
    order.sort_unstable_by_key(|&v| (std::cmp::Reverse(g.degree(VertexId(v))), v));
    order.truncate(k);
    let list = order.into_iter().map(VertexId).collect();
    LandmarkSet::new(g, list)
}

/// Symmetric landmark-to-landmark distance matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Highway {
    k: usize,
    dist: Vec<Dist>,
}

impl Highway {
    pub(crate) fn new(k: usize) -> Self {
        let mut h = Highway {
            k,
            dist: vec![Dist::INF; k * k],
        };
        for i in 0..k {
            h.dist[i * k + i] = Dist::ZERO;
        }
        h
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> Dist {
        self.dist[i * self.k + j]
    }

    /// Writes both symmetric slots.
    pub fn set(&mut self, i: usize, j: usize, d: Dist) {
        self.dist[i * self.k + j] = d;
        self.dist[j * self.k + i] = d;
    }
}

/// The full index: landmark set, highway, and per-vertex sorted labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HighwayCoverLabelling {
    pub landmarks: LandmarkSet,
    pub highway: Highway,
    labels: Vec<Vec<LabelEntry>>,
}

impl HighwayCoverLabelling {
    /// Number of vertices covered (the `n` the labelling was built for,
    /// plus any growth applied during maintenance).
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Label entries of `v`, sorted by landmark index. Vertices beyond the
    /// labelled range have no entries.
    pub fn labels(&self, v: VertexId) -> &[LabelEntry] {
        self.labels
            .get(v.index())
            .map(|l| l.as_slice())
            .unwrap_or(&[])
    }

    /// Total number of label entries across all vertices.
    pub fn labelling_size(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }

    /// Distance from landmark `r` (by index) to `v`, decoded from the
    /// labelling: the best label entry of `v` joined through the highway.
    /// Exact for every vertex by the highway-cover property.
    pub fn label_distance(&self, r: usize, v: VertexId) -> Dist {
        if let Some(j) = self.rank_of(v) {
            return self.highway.dist(r, j as usize);
        }
        let mut best = Dist::INF;
        for entry in self.labels(v) {
            let through = self.highway.dist(r, entry.landmark_index as usize);
            best = best.min(entry.distance.plus(through));
        }
        best
    }

    /// Distance from landmark `r` (by index) to `v` paired with the landmark
    /// flag; see [`LandmarkLength`].
    pub fn landmark_distance(&self, r: usize, v: VertexId) -> LandmarkLength {
        if let Some(j) = self.rank_of(v) {
            if j as usize == r {
                return LandmarkLength::new(Dist::ZERO, false);
            }
            let d = self.highway.dist(r, j as usize);
            return if d.is_finite() {
                // A path ending at another landmark passes through one.
                LandmarkLength::new(d, true)
            } else {
                LandmarkLength::UNREACHABLE
            };
        }
        let d = self.label_distance(r, v);
        if !d.is_finite() {
            return LandmarkLength::UNREACHABLE;
        }
        // Reachable without touching another landmark exactly when the
        // r-label is present.
        LandmarkLength::new(d, self.entry_position(v, r).is_err())
    }

    fn rank_of(&self, v: VertexId) -> Option<u32> {
        self.landmarks.rank(v)
    }

    /// Binary search for landmark `r` in `v`'s sorted label row.
    pub(crate) fn entry_position(&self, v: VertexId, r: usize) -> Result<usize, usize> {
        self.labels(v).binary_search_by_key(&(r as u32), |e| e.landmark_index)
    }

    /// Inserts, replaces, or removes (`None`) the `r`-label of `v`.
    pub(crate) fn set_label(&mut self, v: VertexId, r: usize, distance: Option<Dist>) {
        debug_assert!(v.index() < self.labels.len());
        debug_assert!(!self.landmarks.contains(v), "landmarks carry no labels");
        let pos = self.entry_position(v, r);
        let row = &mut self.labels[v.index()];
        match (pos, distance) {
            (Ok(p), Some(d)) => row[p].distance = d,
            (Ok(p), None) => {
                row.remove(p);
            }
            (Err(p), Some(d)) => row.insert(
                p,
                LabelEntry {
                    landmark_index: r as u32,
                    distance: d,
                },
            ),
            (Err(_), None) => {}
        }
    }

    /// Extends the labelled range to `n` vertices (new rows empty).
    pub(crate) fn grow_to(&mut self, n: usize) {
        if n > self.labels.len() {
            self.labels.resize(n, Vec::new());
        }
    }

    pub(crate) fn from_parts(
        landmarks: LandmarkSet,
        highway: Highway,
        labels: Vec<Vec<LabelEntry>>,
    ) -> Self {
        HighwayCoverLabelling {
            landmarks,
            highway,
            labels,
        }
    }
}

/// Builds the minimal highway cover labelling of `g` over landmark set `r`.
///
/// One breadth-first search per landmark computes, for every vertex, the
/// distance and whether some shortest path passes through another landmark
/// (the flag is OR-propagated along shortest-path edges during the scan; FIFO
/// layer order makes each vertex's flag final before the vertex itself is
/// expanded). A vertex receives an `r`-label exactly when it is reachable and
/// its flag stayed clear; landmark-to-landmark distances fill the highway.
pub fn build(g: &Graph, landmarks: &LandmarkSet) -> HighwayCoverLabelling {
    let n = g.n();
    let k = landmarks.len();
    let mut highway = Highway::new(k);
    let mut labels: Vec<Vec<LabelEntry>> = vec![Vec::new(); n];

    let mut dist = vec![Dist::INF; n];
    let mut flag = vec![false; n];
    let mut queue = VecDeque::new();

    for (i, &root) in landmarks.vertices().iter().enumerate() {
        dist.fill(Dist::INF);
        flag.fill(false);
        queue.clear();

        dist[root.index()] = Dist::ZERO;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let du = dist[u.index()];
            // u's own flag is complete here: every shortest-path predecessor
            // was dequeued (and contributed) in an earlier layer.
            let carried = flag[u.index()] || (u != root && landmarks.contains(u));
            let dw = du.step();
            for &w in g.adj(u) {
                if dist[w.index()] == Dist::INF {
                    dist[w.index()] = dw;
                    flag[w.index()] = carried;
                    queue.push_back(w);
                } else if dist[w.index()] == dw {
                    flag[w.index()] |= carried;
                }
            }
        }

        for j in 0..k {
            let d = dist[landmarks.vertex(j).index()];
            if i < j {
                highway.set(i, j, d);
            } else {
                debug_assert_eq!(highway.dist(i, j), d, "asymmetric landmark distance");
            }
        }
        for v in 0..n {
            let d = dist[v];
            if d.is_finite() && !flag[v] && landmarks.rank(VertexId(v as u32)).is_none() {
                labels[v].push(LabelEntry {
                    landmark_index: i as u32,
                    distance: d,
                });
            }
        }
    }

    HighwayCoverLabelling::from_parts(landmarks.clone(), highway, labels)
}
