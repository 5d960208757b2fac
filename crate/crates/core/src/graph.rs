//! Dynamic undirected unweighted graph storage, batch normalization and
//! application, and edge-list ingestion.
//!
//! Vertices are dense indices `0..n`. External (file-level) vertex ids are
//! remapped at ingestion in first-appearance order; the [`IdMap`] returned by
//! [`load_edge_list`] records the correspondence so that results can be
//! reported in the caller's id space.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::BufRead;

use thiserror::Error;

/// Dense vertex index, contiguous in `0..n` for the graph that houses it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[repr(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(VertexId, usize),
    #[error("structural invariant violated: {0}")]
    Corrupt(String),
}

/// Errors from [`load_edge_list`].
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: malformed edge `{text}` (expected two integer vertex ids)")]
    Malformed { line: usize, text: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected unweighted graph over dense vertex ids.
///
/// Adjacency lists are kept sorted, which yields deterministic traversal
/// order everywhere downstream (label construction, affected-vertex searches,
/// repairs). No self-loops, no parallel edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    m: usize,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge slice. Self-loops and duplicate edges are
    /// dropped. The vertex count is `min_n` or one past the largest endpoint,
    /// whichever is larger.
    pub fn from_edges(min_n: usize, edges: &[(u32, u32)]) -> Self {
        let n = edges
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0)
            .max(min_n);
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            adj[u as usize].push(VertexId(v));
            adj[v as usize].push(VertexId(u));
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Graph { adj, m: m / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbor list of `v`, or an error if `v` is out of range.
    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        self.adj
            .get(v.index())
            .map(|l| l.as_slice())
            .ok_or(GraphError::VertexOutOfRange(v, self.n()))
    }

    /// Sorted neighbor list of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn adj(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match self.adj.get(u.index()) {
            Some(list) => v.index() < self.n() && list.binary_search(&v).is_ok(),
            None => false,
        }
    }

    /// All edges as `(u, v)` pairs with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = VertexId(u as u32);
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Structural validator: symmetry, sortedness, no loops or duplicates,
    /// and the edge-count bookkeeping.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        let mut half_edges = 0usize;
        for (u, list) in self.adj.iter().enumerate() {
            let u = VertexId(u as u32);
            half_edges += list.len();
            for window in list.windows(2) {
                if window[0] >= window[1] {
                    return Err(GraphError::Corrupt(format!(
                        "adjacency of {u} not strictly sorted"
                    )));
                }
            }
            for &v in list {
                if v.index() >= n {
                    return Err(GraphError::Corrupt(format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(GraphError::Corrupt(format!("self-loop at {u}")));
                }
                if self.adj[v.index()].binary_search(&u).is_err() {
                    return Err(GraphError::Corrupt(format!("edge ({u}, {v}) not symmetric")));
                }
            }
        }
        if half_edges != 2 * self.m {
            return Err(GraphError::Corrupt(format!(
                "edge count {} does not match adjacency total {half_edges}",
                self.m
            )));
        }
        Ok(())
    }

    fn insert_edge(&mut self, u: VertexId, v: VertexId) {
        let need = u.index().max(v.index()) + 1;
        if need > self.adj.len() {
            self.adj.resize(need, Vec::new());
        }
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a.index()];
            match list.binary_search(&b) {
                Ok(_) => debug_assert!(false, "insert of existing edge ({u}, {v})"),
                Err(pos) => list.insert(pos, b),
            }
        }
        self.m += 1;
    }

    fn delete_edge(&mut self, u: VertexId, v: VertexId) {
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a.index()];
            match list.binary_search(&b) {
                Ok(pos) => {
                    list.remove(pos);
                }
                Err(_) => debug_assert!(false, "delete of missing edge ({u}, {v})"),
            }
        }
        self.m -= 1;
    }
}

/// Direction of a single edge change.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// One edge insertion or deletion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EdgeUpdate {
    pub u: VertexId,
    pub v: VertexId,
    pub kind: UpdateKind,
}

impl EdgeUpdate {
    pub fn insert(u: u32, v: u32) -> Self {
        EdgeUpdate {
            u: VertexId(u),
            v: VertexId(v),
            kind: UpdateKind::Insert,
        }
    }

    pub fn delete(u: u32, v: u32) -> Self {
        EdgeUpdate {
            u: VertexId(u),
            v: VertexId(v),
            kind: UpdateKind::Delete,
        }
    }

    /// Endpoints in canonical `(min, max)` order.
    fn edge_key(&self) -> (VertexId, VertexId) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }
}

/// A normalized set of edge updates, applied atomically.
///
/// Only obtainable through [`normalize_batch`], which enforces the invariants:
/// no edge appears as both insertion and deletion, no duplicates, every
/// insertion targets an absent edge and every deletion an existing one.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Batch {
    updates: Vec<EdgeUpdate>,
}

impl Batch {
    pub fn updates(&self) -> &[EdgeUpdate] {
        &self.updates
    }

    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    /// The batch that undoes this one: every kind flipped. Normalized with
    /// respect to the graph this batch produced.
    pub fn inverse(&self) -> Batch {
        Batch {
            updates: self
                .updates
                .iter()
                .map(|u| EdgeUpdate {
                    kind: match u.kind {
                        UpdateKind::Insert => UpdateKind::Delete,
                        UpdateKind::Delete => UpdateKind::Insert,
                    },
                    ..*u
                })
                .collect(),
        }
    }
}

/// Filters a raw update sequence down to a valid [`Batch`] for `g`.
///
/// Self-loops are dropped. An edge that appears with both kinds anywhere in
/// the sequence is eliminated entirely (the insertion and deletion cancel).
/// Remaining duplicates keep their first occurrence. Updates invalid against
/// `g` — inserting a present edge, deleting an absent one — are ignored.
/// Survivor order is preserved.
pub fn normalize_batch(g: &Graph, raw: &[EdgeUpdate]) -> Batch {
    let mut kinds: HashMap<(VertexId, VertexId), (bool, bool)> = HashMap::new();
    for upd in raw {
        if upd.u == upd.v {
            continue;
        }
        let slot = kinds.entry(upd.edge_key()).or_insert((false, false));
        match upd.kind {
            UpdateKind::Insert => slot.0 = true,
            UpdateKind::Delete => slot.1 = true,
        }
    }
    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut updates = Vec::new();
    for upd in raw {
        if upd.u == upd.v {
            continue;
        }
        let key = upd.edge_key();
        if kinds[&key] == (true, true) {
            continue; // cancelled pair
        }
        if !seen.insert(key) {
            continue; // duplicate
        }
        let valid = match upd.kind {
            UpdateKind::Insert => !g.has_edge(upd.u, upd.v),
            UpdateKind::Delete => g.has_edge(upd.u, upd.v),
        };
        if valid {
            updates.push(*upd);
        }
    }
    Batch { updates }
}

/// Applies a normalized batch, returning the updated graph.
///
/// Insertions may reference dense ids at or beyond `g.n()`; the vertex set
/// grows to cover them and new vertices start isolated.
pub fn apply_batch(g: &Graph, b: &Batch) -> Graph {
    let mut out = g.clone();
    for upd in &b.updates {
        match upd.kind {
            UpdateKind::Insert => out.insert_edge(upd.u, upd.v),
            UpdateKind::Delete => out.delete_edge(upd.u, upd.v),
        }
    }
    debug_assert!(out.validate().is_ok());
    out
}

/// Mapping between external (file-level) and dense vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    externals: Vec<u64>,
    dense: HashMap<u64, VertexId>,
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.externals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.externals.is_empty()
    }

    /// External id of a dense vertex. Panics if `v` was never mapped.
    pub fn external(&self, v: VertexId) -> u64 {
        self.externals[v.index()]
    }

    pub fn dense(&self, external: u64) -> Option<VertexId> {
        self.dense.get(&external).copied()
    }

    /// Existing dense id for `external`, or the next free one.
    pub fn get_or_insert(&mut self, external: u64) -> VertexId {
        match self.dense.entry(external) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = VertexId(self.externals.len() as u32);
                self.externals.push(external);
                e.insert(id);
                id
            }
        }
    }

    /// External ids in dense order.
    pub fn externals(&self) -> &[u64] {
        &self.externals
    }
}

/// Reads a whitespace-separated edge list, remapping external ids to dense
/// ones in first-appearance order.
///
/// Lines starting with `#` (after leading whitespace) and blank lines are
/// skipped. Self-loops and duplicate edges are dropped silently. A line whose
/// tokens are not exactly two non-negative integers is a parse error carrying
/// its 1-based line number.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(Graph, IdMap), LoadError> {
    let mut map = IdMap::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (no, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let malformed = || LoadError::Malformed {
            line: no + 1,
            text: text.to_string(),
        };
        let mut tokens = text.split_whitespace();
        let next_id = |tokens: &mut std::str::SplitWhitespace| {
            tokens
                .next()
                .and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(malformed)
        };
        let a = next_id(&mut tokens)?;
        let b = next_id(&mut tokens)?;
        if tokens.next().is_some() {
            return Err(malformed());
        }
        let u = map.get_or_insert(a);
        let v = map.get_or_insert(b);
        edges.push((u.0, v.0));
    }
    Ok((Graph::from_edges(map.len(), &edges), map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(list: &[VertexId]) -> Vec<u32> {
        list.iter().map(|v| v.0).collect()
    }

    /// Running example: eleven vertices, two of them landmarks.
    /// Dense ids: a=0 b=1 r1=2 c=3 r2=4 d=5 e=6 f=7 g=8 h=9 i=10.
    fn two_landmark_example() -> Graph {
        Graph::from_edges(
            0,
            &[
                (2, 0),
                (2, 1),
                (2, 3),
                (4, 3),
                (4, 5),
                (4, 8),
                (1, 6),
                (5, 10),
                (7, 8),
                (8, 9),
                (9, 10),
                (2, 7),
            ],
        )
    }

    fn example_batch(g: &Graph) -> Batch {
        normalize_batch(
            g,
            &[
                EdgeUpdate::delete(2, 7),
                EdgeUpdate::insert(4, 0),
                EdgeUpdate::insert(6, 7),
            ],
        )
    }

    #[test]
    fn load_path_graph() {
        let (g, map) = load_edge_list("0 1\n1 2".as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(ids(g.adj(VertexId(1))), vec![0, 2]);
        assert_eq!(map.external(VertexId(2)), 2);
    }

    #[test]
    fn load_drops_self_loops_and_duplicates() {
        let (g, _) = load_edge_list("5 5\n5 6".as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        let (g, _) = load_edge_list("1 2\n2 1\n1 2".as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn load_skips_comments_and_reports_bad_lines() {
        let (g, _) = load_edge_list("# header\n\n  # indented\n0 1".as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        for bad in ["0 x", "0", "0 1 2", "-1 2"] {
            let err = load_edge_list(format!("0 1\n{bad}").as_bytes()).unwrap_err();
            match err {
                LoadError::Malformed { line, .. } => assert_eq!(line, 2),
                other => panic!("expected malformed-line error, got {other:?}"),
            }
        }
    }

    #[test]
    fn load_running_example_counts() {
        let g = two_landmark_example();
        assert_eq!((g.n(), g.m()), (11, 12));
        g.validate().unwrap();
    }

    #[test]
    fn normalize_cancels_insert_delete_pairs() {
        let g = Graph::from_edges(3, &[]);
        let b = normalize_batch(&g, &[EdgeUpdate::insert(0, 1), EdgeUpdate::delete(0, 1)]);
        assert!(b.is_empty());
        // Cancellation is orientation-insensitive and wins over duplicates.
        let b = normalize_batch(
            &g,
            &[
                EdgeUpdate::insert(0, 1),
                EdgeUpdate::insert(0, 1),
                EdgeUpdate::delete(1, 0),
            ],
        );
        assert!(b.is_empty());
    }

    #[test]
    fn normalize_drops_invalid_and_duplicate_updates() {
        let g = Graph::from_edges(0, &[(0, 1)]);
        assert!(normalize_batch(&g, &[EdgeUpdate::insert(0, 1)]).is_empty());
        assert!(normalize_batch(&g, &[EdgeUpdate::delete(1, 2)]).is_empty());
        assert!(normalize_batch(&g, &[EdgeUpdate::insert(2, 2)]).is_empty());
        let b = normalize_batch(&g, &[EdgeUpdate::insert(1, 2), EdgeUpdate::insert(2, 1)]);
        assert_eq!(b.updates(), &[EdgeUpdate::insert(1, 2)]);
    }

    #[test]
    fn normalize_keeps_example_batch_intact() {
        let g = two_landmark_example();
        let b = example_batch(&g);
        assert_eq!(
            b.updates(),
            &[
                EdgeUpdate::delete(2, 7),
                EdgeUpdate::insert(4, 0),
                EdgeUpdate::insert(6, 7),
            ]
        );
    }

    #[test]
    fn apply_example_batch() {
        let g = two_landmark_example();
        let b = example_batch(&g);
        let gp = apply_batch(&g, &b);
        assert_eq!(gp.m(), 13);
        assert_eq!(gp.n(), 11);
        assert!(!gp.has_edge(VertexId(2), VertexId(7)));
        assert!(gp.has_edge(VertexId(4), VertexId(0)));
        // f's neighborhood after rewiring: e and g.
        assert_eq!(ids(gp.adj(VertexId(7))), vec![6, 8]);
    }

    #[test]
    fn apply_empty_batch_is_identity() {
        let g = two_landmark_example();
        let gp = apply_batch(&g, &Batch::default());
        assert_eq!(g, gp);
    }

    #[test]
    fn apply_rewires_path_example() {
        // Eight vertices; the batch turns the graph into the path r-a-b-c-d-e-f-g.
        // Dense ids: r=0 a=1 b=2 c=3 d=4 e=5 f=6 g=7.
        let g = Graph::from_edges(0, &[(0, 1), (2, 3), (3, 4), (5, 6), (6, 7), (2, 5), (1, 3)]);
        let b = normalize_batch(
            &g,
            &[
                EdgeUpdate::insert(1, 2),
                EdgeUpdate::insert(4, 5),
                EdgeUpdate::delete(2, 5),
                EdgeUpdate::delete(1, 3),
            ],
        );
        assert_eq!(b.len(), 4);
        let gp = apply_batch(&g, &b);
        assert_eq!(gp.m(), 7);
        for v in 1..7u32 {
            assert_eq!(ids(gp.adj(VertexId(v))), vec![v - 1, v + 1]);
        }
    }

    #[test]
    fn apply_grows_vertex_set() {
        let g = Graph::from_edges(0, &[(0, 1)]);
        let b = normalize_batch(&g, &[EdgeUpdate::insert(1, 4)]);
        let gp = apply_batch(&g, &b);
        assert_eq!(gp.n(), 5);
        assert_eq!(gp.m(), 2);
        assert!(gp.adj(VertexId(3)).is_empty());
        gp.validate().unwrap();
    }

    #[test]
    fn inverse_round_trips() {
        let g = two_landmark_example();
        let b = example_batch(&g);
        let gp = apply_batch(&g, &b);
        assert_eq!(apply_batch(&gp, &b.inverse()), g);
        // Edge-count arithmetic: two inserts, one delete.
        assert_eq!(gp.m(), g.m() + 2 - 1);
    }

    #[test]
    fn neighbors_checked_access() {
        let g = Graph::from_edges(0, &[(0, 1), (1, 2)]);
        assert_eq!(ids(g.neighbors(VertexId(1)).unwrap()), vec![0, 2]);
        assert!(g.neighbors(VertexId(3)).is_err());
        let g = Graph::empty(2);
        assert!(g.neighbors(VertexId(0)).unwrap().is_empty());
    }
}
