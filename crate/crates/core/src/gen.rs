//! Seeded random graphs, batches, and landmark sets.
//!
//! Everything here is deterministic in the seed, so tests and benchmarks can
//! reproduce a failing instance from its seed alone.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{normalize_batch, Batch, EdgeUpdate, Graph, VertexId};
use crate::labelling::{LandmarkSet, LabellingError};

/// The RNG used throughout: seedable, portable, fast.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random graph with `n` vertices and (up to) `m` distinct edges.
///
/// `m` is clamped to the number of vertex pairs. Small vertex sets enumerate
/// and shuffle all pairs; larger ones rejection-sample, which stays fast for
/// the sparse regimes the callers use.
pub fn random_graph(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    let max_pairs = n.saturating_mul(n.saturating_sub(1)) / 2;
    let m = m.min(max_pairs);
    if m == 0 {
        return Graph::empty(n);
    }
    let mut edges: Vec<(u32, u32)>;
    if n <= 512 {
        edges = Vec::with_capacity(max_pairs);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        edges.partial_shuffle(rng, m);
        edges.truncate(m);
    } else {
        let mut chosen: HashSet<(u32, u32)> = HashSet::with_capacity(m);
        while chosen.len() < m {
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            if u != v {
                chosen.insert((u.min(v), u.max(v)));
            }
        }
        edges = chosen.into_iter().collect();
        edges.sort_unstable();
    }
    Graph::from_edges(n, &edges)
}

/// Scale-free-ish graph: each new vertex attaches to `attach` existing
/// vertices, chosen proportionally to current degree. Connected by
/// construction; duplicate picks collapse, so the edge count can fall
/// slightly short of `attach * n`.
pub fn preferential_attachment(n: usize, attach: usize, rng: &mut impl Rng) -> Graph {
    let attach = attach.max(1);
    if n <= 1 {
        return Graph::empty(n);
    }
    let seed_len = (attach + 1).min(n);
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(n * attach);
    // Seed path keeps the early picks connected.
    for v in 1..seed_len as u32 {
        edges.push((v - 1, v));
    }
    // Endpoint multiset: sampling from it is degree-proportional sampling.
    let mut endpoints: Vec<u32> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut picks = HashSet::new();
    for v in seed_len as u32..n as u32 {
        picks.clear();
        let want = attach.min(v as usize);
        let mut guard = 0;
        while picks.len() < want && guard < 32 * attach {
            picks.insert(endpoints[rng.gen_range(0..endpoints.len())]);
            guard += 1;
        }
        for &t in &picks {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Graph::from_edges(n, &edges)
}

/// Random valid batch against `g`: roughly half deletions of existing edges,
/// half insertions of absent ones, plus `new_vertices` insertions that chain
/// fresh vertices beyond `g.n()`. Normalized, so the result is directly
/// applicable.
pub fn random_batch(g: &Graph, ops: usize, new_vertices: usize, rng: &mut impl Rng) -> Batch {
    let n = g.n();
    let mut raw: Vec<EdgeUpdate> = Vec::with_capacity(ops + new_vertices);

    let mut existing: Vec<(VertexId, VertexId)> = g.edges().collect();
    existing.shuffle(rng);
    let deletions = (ops / 2).min(existing.len());
    for &(u, v) in existing.iter().take(deletions) {
        raw.push(EdgeUpdate::delete(u.0, v.0));
    }

    let insertions = ops - deletions;
    if n >= 2 {
        let mut chosen: HashSet<(u32, u32)> = HashSet::new();
        let mut guard = 0;
        while chosen.len() < insertions && guard < 64 * (insertions + 1) {
            guard += 1;
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            if u == v || g.has_edge(VertexId(u), VertexId(v)) {
                continue;
            }
            if chosen.insert((u.min(v), u.max(v))) {
                raw.push(EdgeUpdate::insert(u, v));
            }
        }
    }

    for i in 0..new_vertices {
        let fresh = (n + i) as u32;
        // Attach to anything older, existing or previously added.
        let t = if fresh == 0 { 1 } else { rng.gen_range(0..fresh) };
        raw.push(EdgeUpdate::insert(t, fresh));
    }

    raw.shuffle(rng);
    normalize_batch(g, &raw)
}

/// `k` distinct landmarks drawn uniformly.
pub fn random_landmarks(
    g: &Graph,
    k: usize,
    rng: &mut impl Rng,
) -> Result<LandmarkSet, LabellingError> {
    let picks = rand::seq::index::sample(rng, g.n(), k.min(g.n()));
    let list = picks.into_iter().map(|i| VertexId(i as u32)).collect();
    LandmarkSet::new(g, list)
}
