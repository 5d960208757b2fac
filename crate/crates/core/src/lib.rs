//! Exact shortest-path distances on unweighted undirected graphs that change
//! in batches.
//!
//! The index is a *highway cover labelling*: a handful of high-degree
//! landmark vertices, the all-pairs distance matrix among them (the highway),
//! and for every vertex the distances to just those landmarks not already
//! covered through another landmark. A point-to-point query combines two
//! label rows through the highway into an upper bound, then closes the gap
//! with a bidirectional search on the landmark-free part of the graph — the
//! bound is exact whenever some shortest path touches a landmark, so the
//! residual search stays shallow on graphs with well-connected hubs.
//!
//! When the graph changes, the labelling is not rebuilt. A batch of edge
//! insertions and deletions is absorbed landmark by landmark: a pruned search
//! finds the vertices whose labels could have changed, and a bounded repair
//! recomputes exactly those from their unaffected surroundings (see
//! [`dynamic`]). Updates for different landmarks are independent, which makes
//! the parallel mode deterministic: it produces the same labelling as the
//! sequential one, bit for bit, and both equal a from-scratch rebuild.
//!
//! Module map:
//! - [`graph`]: adjacency storage, batch normalization, edge-list ingestion;
//! - [`labelling`]: landmark selection, label construction, distance decoding;
//! - [`dynamic`]: batch maintenance (searches, repair, orchestration);
//! - [`query`]: point-to-point distance queries;
//! - [`storage`]: checksummed binary (de)serialization of the labelling;
//! - [`oracle`]: slow reference implementations used by the test suites;
//! - [`gen`]: seeded random instances for tests and benchmarks.

pub mod dynamic;
pub mod gen;
pub mod graph;
pub mod labelling;
pub mod oracle;
pub mod query;
pub mod storage;

pub use dynamic::{
    batch_update, batch_update_parallel, batch_update_parallel_with_stats,
    batch_update_with_stats, SearchVariant, UpdateStats,
};
pub use graph::{
    apply_batch, load_edge_list, normalize_batch, Batch, EdgeUpdate, Graph, IdMap, UpdateKind,
    VertexId,
};
pub use labelling::{
    build, select_landmarks, Dist, HighwayCoverLabelling, LandmarkSet,
};
pub use query::{query, upper_bound, QueryResult};
pub use storage::{deserialize, serialize, StorageError};
