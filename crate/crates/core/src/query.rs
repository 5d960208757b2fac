//! Exact distance queries: a labelling-derived upper bound refined by a
//! distance-bounded bidirectional BFS on the landmark-sparsified graph.
//!
//! The upper bound joins a label entry of `s` with one of `t` through the
//! highway; it is exact for every shortest path that touches a landmark.
//! Shortest paths that avoid all landmarks survive in the sparsified graph
//! `G[V \ R]`, so a bidirectional search confined to non-landmark vertices
//! and cut off at the bound closes the gap. The minimum of the two is the
//! exact distance.

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::labelling::{Dist, HighwayCoverLabelling};

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(VertexId, usize),
}

/// Outcome of a single query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QueryResult {
    /// Exact distance; infinite for disconnected pairs.
    pub distance: Dist,
    /// The bound the search started from (equals `distance` on the fast
    /// paths that answer without searching).
    pub upper_bound_used: Dist,
    /// Whether the sparsified-graph search ran.
    pub searched: bool,
}

/// Upper bound on `d(s, t)`: the best landmark-to-landmark join of a label
/// entry of `s` with one of `t`. When an endpoint is itself a landmark the
/// join degenerates to a single highway row against the other endpoint's
/// labels. Infinite when no landmark connects the two.
pub fn upper_bound(gamma: &HighwayCoverLabelling, s: VertexId, t: VertexId) -> Dist {
    match (gamma.landmarks.rank(s), gamma.landmarks.rank(t)) {
        (Some(i), _) => gamma.label_distance(i as usize, t),
        (None, Some(j)) => gamma.label_distance(j as usize, s),
        (None, None) => {
            let mut best = Dist::INF;
            for es in gamma.labels(s) {
                for et in gamma.labels(t) {
                    let through = gamma
                        .highway
                        .dist(es.landmark_index as usize, et.landmark_index as usize);
                    best = best.min(es.distance.plus(through).plus(et.distance));
                }
            }
            best
        }
    }
}

/// Answers `d(s, t)` exactly.
///
/// `s = t` and landmark endpoints are answered from the labelling alone
/// (label distances are exact for landmark-vertex pairs). Otherwise the
/// upper bound is refined by a level-synchronous bidirectional BFS on the
/// sparsified graph that expands the smaller frontier first, never enqueues
/// landmarks, and stops once the combined settled depth rules out anything
/// better than the current best. An infinite bound lets the search run until
/// a frontier is exhausted, which answers pairs connected only through
/// landmark-free paths as well as truly disconnected ones.
pub fn query(
    gamma: &HighwayCoverLabelling,
    g: &Graph,
    s: VertexId,
    t: VertexId,
) -> Result<QueryResult, QueryError> {
    for v in [s, t] {
        if v.index() >= g.n() {
            return Err(QueryError::VertexOutOfRange(v, g.n()));
        }
    }
    if s == t {
        return Ok(QueryResult {
            distance: Dist::ZERO,
            upper_bound_used: Dist::ZERO,
            searched: false,
        });
    }
    let fast = gamma
        .landmarks
        .rank(s)
        .map(|i| gamma.label_distance(i as usize, t))
        .or_else(|| {
            gamma
                .landmarks
                .rank(t)
                .map(|j| gamma.label_distance(j as usize, s))
        });
    if let Some(d) = fast {
        return Ok(QueryResult {
            distance: d,
            upper_bound_used: d,
            searched: false,
        });
    }

    let bound = upper_bound(gamma, s, t);
    let distance = sparsified_bidirectional(gamma, g, s, t, bound);
    Ok(QueryResult {
        distance,
        upper_bound_used: bound,
        searched: true,
    })
}

/// Bidirectional BFS over `G[V \ R]` starting from two non-landmark
/// endpoints, returning `min(bound, sparsified distance)`.
fn sparsified_bidirectional(
    gamma: &HighwayCoverLabelling,
    g: &Graph,
    s: VertexId,
    t: VertexId,
    bound: Dist,
) -> Dist {
    debug_assert!(!gamma.landmarks.contains(s) && !gamma.landmarks.contains(t));
    let n = g.n();
    let mut dist_s = vec![Dist::INF; n];
    let mut dist_t = vec![Dist::INF; n];
    dist_s[s.index()] = Dist::ZERO;
    dist_t[t.index()] = Dist::ZERO;
    let mut frontier_s = vec![s];
    let mut frontier_t = vec![t];
    let mut next = Vec::new();
    let (mut depth_s, mut depth_t) = (0u32, 0u32);
    let mut best = bound;

    while !frontier_s.is_empty()
        && !frontier_t.is_empty()
        && Dist(depth_s + depth_t + 1) < best
    {
        // Expand the cheaper side one full level.
        let from_s = frontier_s.len() <= frontier_t.len();
        let (frontier, depth, own, other) = if from_s {
            depth_s += 1;
            (&mut frontier_s, depth_s, &mut dist_s, &dist_t)
        } else {
            depth_t += 1;
            (&mut frontier_t, depth_t, &mut dist_t, &dist_s)
        };
        next.clear();
        for &v in frontier.iter() {
            for &w in g.adj(v) {
                if own[w.index()].is_finite() || gamma.landmarks.contains(w) {
                    continue;
                }
                own[w.index()] = Dist(depth);
                next.push(w);
                let across = other[w.index()];
                if across.is_finite() {
                    best = best.min(Dist(depth).plus(across));
                }
            }
        }
        std::mem::swap(frontier, &mut next);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelling::{build, LandmarkSet};
    use crate::oracle::bfs_distances;

    fn two_landmark_example() -> (Graph, HighwayCoverLabelling) {
        // Dense ids: a=0 b=1 r1=2 c=3 r2=4 d=5 e=6 f=7 g=8 h=9 i=10.
        let g = Graph::from_edges(
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
        );
        let r = LandmarkSet::new(&g, vec![VertexId(2), VertexId(4)]).unwrap();
        let gamma = build(&g, &r);
        (g, gamma)
    }

    #[test]
    fn upper_bound_joins_label_pairs() {
        let (_, gamma) = two_landmark_example();
        // e carries only a first-landmark entry, i only a second-landmark
        // one; the join crosses the highway: 2 + 2 + 2.
        assert_eq!(upper_bound(&gamma, VertexId(6), VertexId(10)), Dist(6));
    }

    #[test]
    fn upper_bound_disconnected_is_infinite() {
        let g = Graph::from_edges(0, &[(0, 1), (2, 3)]);
        let r = LandmarkSet::new(&g, vec![VertexId(0)]).unwrap();
        let gamma = build(&g, &r);
        assert_eq!(upper_bound(&gamma, VertexId(1), VertexId(3)), Dist::INF);
    }

    #[test]
    fn query_refines_bound_on_running_example() {
        let (g, gamma) = two_landmark_example();
        let res = query(&gamma, &g, VertexId(6), VertexId(10)).unwrap();
        assert_eq!(res.distance, Dist(6));
        assert_eq!(res.upper_bound_used, Dist(6));
        assert!(res.searched);
        // h and i are adjacent; the landmark join only knows a 4-hop route.
        let res = query(&gamma, &g, VertexId(9), VertexId(10)).unwrap();
        assert_eq!(res.distance, Dist(1));
        assert_eq!(res.upper_bound_used, Dist(4));
    }

    #[test]
    fn query_identity_is_zero() {
        let (g, gamma) = two_landmark_example();
        let res = query(&gamma, &g, VertexId(6), VertexId(6)).unwrap();
        assert_eq!(res.distance, Dist::ZERO);
        assert!(!res.searched);
    }

    #[test]
    fn query_landmark_endpoint_answers_without_search() {
        let (g, gamma) = two_landmark_example();
        let res = query(&gamma, &g, VertexId(2), VertexId(10)).unwrap();
        assert_eq!(res.distance, Dist(4));
        assert!(!res.searched);
        let res = query(&gamma, &g, VertexId(2), VertexId(4)).unwrap();
        assert_eq!(res.distance, Dist(2));
    }

    #[test]
    fn query_survives_infinite_bound() {
        // 0-1-2 is landmark-free; the landmark sits in another component, so
        // the bound is infinite and the sparsified search must still answer.
        let g = Graph::from_edges(0, &[(0, 1), (1, 2), (3, 4)]);
        let r = LandmarkSet::new(&g, vec![VertexId(3)]).unwrap();
        let gamma = build(&g, &r);
        let res = query(&gamma, &g, VertexId(0), VertexId(2)).unwrap();
        assert_eq!(res.distance, Dist(2));
        assert_eq!(res.upper_bound_used, Dist::INF);
        let res = query(&gamma, &g, VertexId(0), VertexId(4)).unwrap();
        assert_eq!(res.distance, Dist::INF);
    }

    #[test]
    fn query_rejects_out_of_range_vertices() {
        let (g, gamma) = two_landmark_example();
        assert!(query(&gamma, &g, VertexId(0), VertexId(99)).is_err());
    }

    #[test]
    fn query_matches_bfs_on_examples() {
        let (g, gamma) = two_landmark_example();
        for s in 0..g.n() as u32 {
            let table = bfs_distances(&g, VertexId(s));
            for t in 0..g.n() as u32 {
                let res = query(&gamma, &g, VertexId(s), VertexId(t)).unwrap();
                assert_eq!(res.distance, table[t as usize], "pair ({s}, {t})");
            }
        }
    }
}
