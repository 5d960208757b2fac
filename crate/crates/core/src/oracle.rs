//! Deliberately naive reference implementations for testing.
//!
//! Nothing here shares code with the production paths: distances come from
//! plain breadth-first searches, landmark flags from a layer-by-layer pass
//! over an explicitly materialized shortest-path DAG, and affected-vertex
//! sets from direct evaluation of their definitions. Cross-checking the fast
//! implementations against these on thousands of random instances is what
//! gives the equivalence tests their force. Not meant for graphs beyond a
//! few thousand vertices.

use crate::graph::{Graph, VertexId};
use crate::labelling::{
    Dist, Highway, HighwayCoverLabelling, LabelEntry, LandmarkLength, LandmarkSet,
};

/// Per-vertex distances from a single source.
pub type DistanceTable = Vec<Dist>;

/// Exact hop distances from `s`; infinity for unreachable vertices.
pub fn bfs_distances(g: &Graph, s: VertexId) -> DistanceTable {
    let mut dist = vec![Dist::INF; g.n()];
    let mut queue = std::collections::VecDeque::new();
    dist[s.index()] = Dist::ZERO;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        let du = dist[u.index()].step();
        for &w in g.adj(u) {
            if dist[w.index()] == Dist::INF {
                dist[w.index()] = du;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Oriented shortest-path DAG edges from root distances: `(u, w)` is included
/// when the edge advances one layer away from the root.
fn shortest_path_dag(g: &Graph, dist: &[Dist]) -> Vec<(VertexId, VertexId)> {
    let mut dag = Vec::new();
    for (u, v) in g.edges() {
        let (du, dv) = (dist[u.index()], dist[v.index()]);
        if du.is_finite() && du.step() == dv {
            dag.push((u, v));
        } else if dv.is_finite() && dv.step() == du {
            dag.push((v, u));
        }
    }
    dag
}

/// Landmark-flag table for the search rooted at `R[r]`: `flag[v]` is true
/// when some shortest root-`v` path passes through a landmark other than the
/// root (interior vertices only; endpoint handling is the caller's concern).
///
/// Computed by sweeping the materialized DAG edges once per layer, in
/// increasing layer order — independent of the flag propagation embedded in
/// the production build scan.
fn dag_flags(g: &Graph, landmarks: &LandmarkSet, r: usize, dist: &[Dist]) -> Vec<bool> {
    let root = landmarks.vertex(r);
    let mut dag = shortest_path_dag(g, dist);
    dag.sort_unstable_by_key(|&(u, _)| dist[u.index()]);
    let mut flag = vec![false; g.n()];
    for (u, w) in dag {
        // Layer order guarantees flag[u] is final before any u -> w edge runs.
        if flag[u.index()] || (u != root && landmarks.contains(u)) {
            flag[w.index()] = true;
        }
    }
    flag
}

/// Full landmark-distance table for the landmark at index `r`: distances
/// paired with landmark flags, endpoint-inclusive (other landmarks always
/// flagged, the root itself `(0, false)`, unreachable `(inf, false)`).
pub fn landmark_length_table(g: &Graph, landmarks: &LandmarkSet, r: usize) -> Vec<LandmarkLength> {
    let root = landmarks.vertex(r);
    let dist = bfs_distances(g, root);
    let flag = dag_flags(g, landmarks, r, &dist);
    (0..g.n())
        .map(|v| {
            let v = VertexId(v as u32);
            let d = dist[v.index()];
            if v == root {
                LandmarkLength::new(Dist::ZERO, false)
            } else if !d.is_finite() {
                LandmarkLength::UNREACHABLE
            } else if landmarks.contains(v) {
                LandmarkLength::new(d, true)
            } else {
                LandmarkLength::new(d, flag[v.index()])
            }
        })
        .collect()
}

/// Minimal highway cover labelling assembled straight from BFS tables and
/// DAG-propagated flags — an independent reproduction of what `build` must
/// output, by the characterization "labelled iff reachable and unflagged".
pub fn minimal_labelling_bruteforce(g: &Graph, landmarks: &LandmarkSet) -> HighwayCoverLabelling {
    let k = landmarks.len();
    let mut highway_rows: Vec<DistanceTable> = Vec::with_capacity(k);
    let mut labels: Vec<Vec<LabelEntry>> = vec![Vec::new(); g.n()];
    for (i, &root) in landmarks.vertices().iter().enumerate() {
        let dist = bfs_distances(g, root);
        let flag = dag_flags(g, landmarks, i, &dist);
        for v in 0..g.n() {
            let vid = VertexId(v as u32);
            if dist[v].is_finite() && !flag[v] && !landmarks.contains(vid) {
                labels[v].push(LabelEntry {
                    landmark_index: i as u32,
                    distance: dist[v],
                });
            }
        }
        highway_rows.push(dist);
    }
    let mut highway = Highway::new(k);
    for (i, row) in highway_rows.iter().enumerate() {
        for j in 0..k {
            highway.set(i, j, row[landmarks.vertex(j).index()]);
        }
    }
    HighwayCoverLabelling::from_parts(landmarks.clone(), highway, labels)
}

/// Vertices whose landmark distance (distance, flag) to `R[r]` differs
/// between `g` and `gp`, sorted. Vertices present only in `gp` are compared
/// against unreachable.
pub fn ld_affected_bruteforce(
    g: &Graph,
    gp: &Graph,
    landmarks: &LandmarkSet,
    r: usize,
) -> Vec<VertexId> {
    let old = landmark_length_table(g, landmarks, r);
    let new = landmark_length_table(gp, landmarks, r);
    let n = old.len().max(new.len());
    let get = |t: &[LandmarkLength], v: usize| t.get(v).copied().unwrap_or(LandmarkLength::UNREACHABLE);
    (0..n)
        .filter(|&v| get(&old, v) != get(&new, v))
        .map(|v| VertexId(v as u32))
        .collect()
}

/// Oriented edges lying on some shortest `root`-`v` path, from the two BFS
/// tables: `(x, y)` qualifies when it advances from the root and the
/// remainder through `y` completes a shortest path to `v`.
fn path_edges(
    g: &Graph,
    from_root: &[Dist],
    from_v: &[Dist],
    v: VertexId,
) -> Vec<(VertexId, VertexId)> {
    let total = from_root[v.index()];
    let mut out = Vec::new();
    if !total.is_finite() {
        return out;
    }
    for (a, b) in g.edges() {
        for (x, y) in [(a, b), (b, a)] {
            if from_root[x.index()].step() == from_root[y.index()]
                && from_root[x.index()].step().plus(from_v[y.index()]) == total
            {
                out.push((x, y));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Vertices whose set of shortest paths from `r` changes between `g` and
/// `gp`, sorted; `r` itself is never included. Path-set equality is decided
/// by (distance, shortest-path edge set) — two path sets over the same layer
/// structure coincide exactly when their edge sets do.
pub fn affected_bruteforce(g: &Graph, gp: &Graph, r: VertexId) -> Vec<VertexId> {
    let n = g.n().max(gp.n());
    let pad = |t: DistanceTable| {
        let mut t = t;
        t.resize(n, Dist::INF);
        t
    };
    let old_root = pad(bfs_distances(g, r));
    let new_root = pad(if r.index() < gp.n() {
        bfs_distances(gp, r)
    } else {
        vec![Dist::INF; gp.n()]
    });
    let mut affected = Vec::new();
    for v in 0..n {
        let vid = VertexId(v as u32);
        if vid == r {
            continue;
        }
        if old_root[v] != new_root[v] {
            affected.push(vid);
            continue;
        }
        if !old_root[v].is_finite() {
            continue; // unreachable on both sides: empty path sets
        }
        let old_back = pad(bfs_distances(g, vid));
        let new_back = pad(bfs_distances(gp, vid));
        if path_edges(g, &old_root, &old_back, vid) != path_edges(gp, &new_root, &new_back, vid) {
            affected.push(vid);
        }
    }
    affected
}
