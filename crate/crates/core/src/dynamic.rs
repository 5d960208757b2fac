//! Labelling maintenance under mixed batches of edge insertions and
//! deletions.
//!
//! One batch is handled landmark by landmark in two phases that both read
//! only the *pre-batch* labelling:
//!
//! 1. **Batch search** finds a superset of the vertices whose landmark
//!    distance may have changed. Every non-trivial update contributes an
//!    *anchor seed* — the endpoint farther from the landmark, keyed by one
//!    hop past the nearer endpoint — and a monotone best-first expansion over
//!    the updated graph grows the set, pruning against old distances. The
//!    basic variant prunes on distance alone; the improved variant keys by
//!    (distance, landmark flag, deletion flag) and prunes against a
//!    per-vertex threshold, which keeps vertices whose labels are already
//!    covered through other landmarks out of the set entirely.
//! 2. **Batch repair** recomputes the labels of the returned set from its
//!    unaffected boundary: every affected vertex starts with the best bound
//!    offered by a neighbor outside the set (whose landmark distance is
//!    provably unchanged), then a bucket sweep settles whole minimal-distance
//!    groups at a time and relaxes inward. A settled `(d, flag)` either
//!    rewrites the vertex's label, removes it (flag set or unreachable), or —
//!    for a landmark — rewrites its highway entry.
//!
//! Per-landmark results are private deltas merged in landmark order, so the
//! parallel mode (one task per landmark) produces bit-identical output to the
//! sequential one.

use rayon::prelude::*;

use crate::graph::{Batch, Graph, UpdateKind, VertexId};
use crate::labelling::{Dist, HighwayCoverLabelling, LandmarkLength, LandmarkSet};

/// Landmark length extended with the *deletion flag*: whether the underlying
/// path crosses an edge deleted by the batch.
///
/// Ordered lexicographically on `(d, l, e)` with `true < false` on both
/// flags, so among equal-length paths the search settles landmark-covered
/// and deletion-crossing ones first — those are the ones that must not be
/// pruned away by still-valid alternatives.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExtendedLandmarkLength {
    pub d: Dist,
    pub l: bool,
    pub e: bool,
}

impl ExtendedLandmarkLength {
    pub fn new(d: Dist, l: bool, e: bool) -> Self {
        ExtendedLandmarkLength { d, l, e }
    }
}

impl Ord for ExtendedLandmarkLength {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.d, !self.l, !self.e).cmp(&(other.d, !other.l, !other.e))
    }
}

impl PartialOrd for ExtendedLandmarkLength {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Appends vertex `w` to a path: one hop longer, flag forced if `w` is a
/// landmark. Infinite lengths stay infinite with their flag untouched.
pub fn oplus(ll: LandmarkLength, w: VertexId, landmarks: &LandmarkSet) -> LandmarkLength {
    if !ll.d.is_finite() {
        return ll;
    }
    LandmarkLength::new(ll.d.step(), ll.l || landmarks.contains(w))
}

/// Pruning threshold for the improved search: the old landmark distance with
/// the deletion flag forced. A candidate path is kept only if it does not
/// exceed this — the forced flag admits equal-length deletion-crossing paths,
/// which may invalidate the old value, while pruning equal-length ordinary
/// ones, which cannot.
pub fn beta(gamma: &HighwayCoverLabelling, r: usize, v: VertexId) -> ExtendedLandmarkLength {
    let ll = gamma.landmark_distance(r, v);
    ExtendedLandmarkLength::new(ll.d, ll.l, true)
}

/// Seed of the affected-vertex search for one non-trivial update: the
/// endpoint farther from the landmark, keyed one hop past the nearer one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AnchorSeed {
    pub anchor: VertexId,
    /// Old distance of the nearer endpoint, plus one.
    pub anchor_distance: Dist,
    /// Whether the update is a deletion.
    pub deleted: bool,
    /// Landmark flag of (nearer endpoint's landmark length) stepped onto the
    /// anchor; only the improved search consumes it.
    pub landmark_flag: bool,
}

/// Affected-vertex superset for one landmark; never contains the landmark
/// itself. Members are kept sorted.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AffectedSet {
    members: Vec<VertexId>,
}

impl AffectedSet {
    fn from_settled(mut members: Vec<VertexId>) -> Self {
        members.sort_unstable();
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        AffectedSet { members }
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Landmark-distance bounds for the vertices of an affected set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundTable {
    entries: Vec<(VertexId, LandmarkLength)>,
}

impl BoundTable {
    pub fn get(&self, v: VertexId) -> Option<LandmarkLength> {
        self.entries
            .binary_search_by_key(&v, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn entries(&self) -> &[(VertexId, LandmarkLength)] {
        &self.entries
    }
}

/// Memoized view of the pre-batch landmark distances for one landmark.
///
/// Decoding a landmark distance walks the vertex's label row; the searches
/// and the repair consult the same vertices over and over, so the decoded
/// values are cached per vertex.
struct OldView<'a> {
    gamma: &'a HighwayCoverLabelling,
    r: usize,
    d: Vec<u32>,
    l: Vec<bool>,
}

/// Cache-slot marker; real distances are bounded by the vertex count and the
/// infinity sentinel is `u32::MAX`, so this value never collides.
const MEMO_UNSET: u32 = u32::MAX - 1;

impl<'a> OldView<'a> {
    fn new(gamma: &'a HighwayCoverLabelling, r: usize, n: usize) -> Self {
        OldView {
            gamma,
            r,
            d: vec![MEMO_UNSET; n],
            l: vec![false; n],
        }
    }

    fn length(&mut self, v: VertexId) -> LandmarkLength {
        let i = v.index();
        if self.d[i] == MEMO_UNSET {
            let ll = self.gamma.landmark_distance(self.r, v);
            self.d[i] = ll.d.0;
            self.l[i] = ll.l;
        }
        LandmarkLength::new(Dist(self.d[i]), self.l[i])
    }

    fn dist(&mut self, v: VertexId) -> Dist {
        self.length(v).d
    }

    fn beta(&mut self, v: VertexId) -> ExtendedLandmarkLength {
        let ll = self.length(v);
        ExtendedLandmarkLength::new(ll.d, ll.l, true)
    }
}

/// One anchor seed per non-trivial update of the batch, in batch order.
/// Updates whose endpoints were equally far from the landmark (both
/// unreachable included) are trivial and contribute nothing; distances are
/// read from the pre-batch labelling.
pub fn anchor_seeds(
    gamma: &HighwayCoverLabelling,
    b: &Batch,
    r: usize,
) -> Vec<AnchorSeed> {
    let n = max_vertex_bound(gamma, b);
    let mut view = OldView::new(gamma, r, n);
    anchor_seeds_inner(&mut view, &gamma.landmarks, b)
}

fn max_vertex_bound(gamma: &HighwayCoverLabelling, b: &Batch) -> usize {
    b.updates()
        .iter()
        .map(|u| u.u.index().max(u.v.index()) + 1)
        .max()
        .unwrap_or(0)
        .max(gamma.n())
}

fn anchor_seeds_inner(
    view: &mut OldView<'_>,
    landmarks: &LandmarkSet,
    b: &Batch,
) -> Vec<AnchorSeed> {
    let mut seeds = Vec::new();
    for upd in b.updates() {
        let lu = view.length(upd.u);
        let lv = view.length(upd.v);
        if lu.d == lv.d {
            continue; // trivial: neither endpoint can shorten the other
        }
        let (pre_len, anchor) = if lu.d < lv.d {
            (lu, upd.v)
        } else {
            (lv, upd.u)
        };
        let stepped = oplus(pre_len, anchor, landmarks);
        seeds.push(AnchorSeed {
            anchor,
            anchor_distance: stepped.d,
            deleted: upd.kind == UpdateKind::Delete,
            landmark_flag: stepped.l,
        });
    }
    seeds
}

/// Distance-keyed FIFO bucket queue; keys are pushed in non-decreasing
/// bucket order, so a plain cursor sweep pops in sorted order.
struct BucketQueue<T> {
    buckets: Vec<Vec<T>>,
}

impl<T: Copy> BucketQueue<T> {
    fn new() -> Self {
        BucketQueue {
            buckets: Vec::new(),
        }
    }

    fn push(&mut self, d: usize, item: T) {
        if d >= self.buckets.len() {
            self.buckets.resize_with(d + 1, Vec::new);
        }
        self.buckets[d].push(item);
    }
}

/// Affected-vertex search pruned on distance alone: exactly the vertices
/// reachable by a changed-or-new path no longer than their old distance.
/// Returns a superset of the improved search's output.
pub fn batch_search_basic(
    gp: &Graph,
    b: &Batch,
    r: usize,
    gamma: &HighwayCoverLabelling,
) -> AffectedSet {
    let mut view = OldView::new(gamma, r, gp.n());
    batch_search_basic_inner(gp, b, &mut view, &gamma.landmarks)
}

fn batch_search_basic_inner(
    gp: &Graph,
    b: &Batch,
    view: &mut OldView<'_>,
    landmarks: &LandmarkSet,
) -> AffectedSet {
    let mut queue: BucketQueue<VertexId> = BucketQueue::new();
    for seed in anchor_seeds_inner(view, landmarks, b) {
        // Seeds always pass the prune test: the anchor is the farther
        // endpoint, so one hop past the nearer one cannot overshoot it.
        debug_assert!(seed.anchor_distance <= view.dist(seed.anchor));
        queue.push(seed.anchor_distance.0 as usize, seed.anchor);
    }
    let mut settled = vec![false; gp.n()];
    let mut members = Vec::new();
    let mut d = 0;
    while d < queue.buckets.len() {
        let mut i = 0;
        while i < queue.buckets[d].len() {
            let v = queue.buckets[d][i];
            i += 1;
            if settled[v.index()] {
                continue;
            }
            settled[v.index()] = true;
            members.push(v);
            let nd = Dist(d as u32 + 1);
            for &w in gp.adj(v) {
                if !settled[w.index()] && nd <= view.dist(w) {
                    queue.push(nd.0 as usize, w);
                }
            }
        }
        d += 1;
    }
    AffectedSet::from_settled(members)
}

/// Order of `(l, e)` flag classes within a distance bucket: both flags set
/// first, both clear last.
#[inline]
fn flag_class(l: bool, e: bool) -> usize {
    (!l as usize) * 2 + (!e as usize)
}

/// Affected-vertex search keyed by extended landmark length and pruned
/// against the per-vertex threshold: candidates that cannot beat an old
/// landmark-covered distance never enter the queue. Output contains every
/// vertex whose label or distance actually changes, and nothing outside the
/// basic search's set.
pub fn batch_search_improved(
    gp: &Graph,
    b: &Batch,
    r: usize,
    gamma: &HighwayCoverLabelling,
) -> AffectedSet {
    let mut view = OldView::new(gamma, r, gp.n());
    batch_search_improved_inner(gp, b, &mut view, &gamma.landmarks)
}

fn batch_search_improved_inner(
    gp: &Graph,
    b: &Batch,
    view: &mut OldView<'_>,
    landmarks: &LandmarkSet,
) -> AffectedSet {
    // Four FIFO lanes per distance bucket, one per flag class.
    let mut buckets: Vec<[Vec<VertexId>; 4]> = Vec::new();
    let push = |buckets: &mut Vec<[Vec<VertexId>; 4]>, key: ExtendedLandmarkLength, v| {
        let d = key.d.0 as usize;
        if d >= buckets.len() {
            buckets.resize_with(d + 1, Default::default);
        }
        buckets[d][flag_class(key.l, key.e)].push(v);
    };
    for seed in anchor_seeds_inner(view, landmarks, b) {
        let key =
            ExtendedLandmarkLength::new(seed.anchor_distance, seed.landmark_flag, seed.deleted);
        // The threshold test applies to seeds too: a seed is a relaxation
        // from the nearer endpoint, and one already no better than the old
        // landmark-covered distance cannot invalidate anything.
        if key <= view.beta(seed.anchor) {
            push(&mut buckets, key, seed.anchor);
        }
    }
    let mut settled = vec![false; gp.n()];
    let mut members = Vec::new();
    let mut d = 0;
    while d < buckets.len() {
        for class in 0..4 {
            let (l, e) = (class < 2, class % 2 == 0);
            let mut i = 0;
            while i < buckets[d][class].len() {
                let v = buckets[d][class][i];
                i += 1;
                if settled[v.index()] {
                    continue;
                }
                settled[v.index()] = true;
                members.push(v);
                for &w in gp.adj(v) {
                    if settled[w.index()] {
                        continue;
                    }
                    let key = ExtendedLandmarkLength::new(
                        Dist(d as u32 + 1),
                        l || landmarks.contains(w),
                        e,
                    );
                    if key <= view.beta(w) {
                        push(&mut buckets, key, w);
                    }
                }
            }
        }
        d += 1;
    }
    AffectedSet::from_settled(members)
}

/// Label and highway rewrites produced by repairing one landmark. Applying
/// deltas in landmark order reproduces the sequential result exactly,
/// whichever mode computed them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LandmarkDelta {
    pub landmark: usize,
    /// `(vertex, Some(d))` writes the label, `(vertex, None)` removes it.
    pub labels: Vec<(VertexId, Option<Dist>)>,
    /// `(other landmark index, distance)` highway rewrites (both symmetric
    /// slots).
    pub highway: Vec<(usize, Dist)>,
}

impl LandmarkDelta {
    pub fn apply(&self, gamma: &mut HighwayCoverLabelling) {
        for &(v, d) in &self.labels {
            gamma.set_label(v, self.landmark, d);
        }
        for &(j, d) in &self.highway {
            gamma.highway.set(self.landmark, j, d);
        }
    }
}

/// Result of repairing one landmark: the rewrites plus the settle trace
/// (vertex and final bound, in settle order).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepairOutcome {
    pub delta: LandmarkDelta,
    pub settled: Vec<(VertexId, LandmarkLength)>,
}

/// Starting bounds of the repair sweep: for each affected vertex, the best
/// landmark length offered by a neighbor outside the affected set, stepped
/// one hop in. Unaffected neighbors kept their pre-batch landmark distance,
/// so the pre-batch labelling supplies their values.
pub fn initial_bounds(
    gp: &Graph,
    aff: &AffectedSet,
    r: usize,
    gamma: &HighwayCoverLabelling,
) -> BoundTable {
    let mut view = OldView::new(gamma, r, gp.n());
    let bounds = initial_bounds_inner(gp, aff, &mut view, &gamma.landmarks);
    BoundTable {
        entries: aff
            .members()
            .iter()
            .map(|&v| (v, bounds[v.index()]))
            .collect(),
    }
}

fn initial_bounds_inner(
    gp: &Graph,
    aff: &AffectedSet,
    view: &mut OldView<'_>,
    landmarks: &LandmarkSet,
) -> Vec<LandmarkLength> {
    let mut in_aff = vec![false; gp.n()];
    for &v in aff.members() {
        in_aff[v.index()] = true;
    }
    let mut bounds = vec![LandmarkLength::UNREACHABLE; gp.n()];
    for &v in aff.members() {
        let mut best = LandmarkLength::UNREACHABLE;
        for &w in gp.adj(v) {
            if !in_aff[w.index()] {
                best = best.min(oplus(view.length(w), v, landmarks));
            }
        }
        bounds[v.index()] = best;
    }
    bounds
}

/// Recomputes labels (and highway entries) of the affected set against the
/// updated graph, reading pre-batch values only from outside the set.
///
/// The sweep repeatedly settles *all* vertices holding the current minimal
/// distance bound — their bounds are provably exact — then relaxes their
/// still-unsettled neighbors inside the set. Relaxed keys always land one
/// bucket further out, so the bucket cursor never retreats (asserted).
/// Vertices left unreached have become unreachable: their labels are removed
/// and, for landmarks, the highway entry goes infinite.
pub fn batch_repair(
    gp: &Graph,
    aff: &AffectedSet,
    r: usize,
    gamma: &HighwayCoverLabelling,
) -> RepairOutcome {
    let mut view = OldView::new(gamma, r, gp.n());
    batch_repair_inner(gp, aff, r, gamma, &mut view)
}

fn batch_repair_inner(
    gp: &Graph,
    aff: &AffectedSet,
    r: usize,
    gamma: &HighwayCoverLabelling,
    view: &mut OldView<'_>,
) -> RepairOutcome {
    let landmarks = &gamma.landmarks;
    debug_assert!(!aff.contains(landmarks.vertex(r)));
    let mut in_aff = vec![false; gp.n()];
    for &v in aff.members() {
        in_aff[v.index()] = true;
    }
    let mut bounds = initial_bounds_inner(gp, aff, view, landmarks);
    let mut queue: BucketQueue<VertexId> = BucketQueue::new();
    for &v in aff.members() {
        if bounds[v.index()].d.is_finite() {
            queue.push(bounds[v.index()].d.0 as usize, v);
        }
    }

    let mut settled_flag = vec![false; gp.n()];
    let mut settled = Vec::new();
    let mut delta = LandmarkDelta {
        landmark: r,
        labels: Vec::new(),
        highway: Vec::new(),
    };
    let mut group = Vec::new();
    let mut d = 0;
    while d < queue.buckets.len() {
        // Gather the whole minimal-distance group before relaxing: same-depth
        // relaxations cannot exist, so the group's bounds are final.
        group.clear();
        for i in 0..queue.buckets[d].len() {
            let v = queue.buckets[d][i];
            if settled_flag[v.index()] {
                continue;
            }
            debug_assert!(bounds[v.index()].d >= Dist(d as u32), "bucket cursor retreated");
            if bounds[v.index()].d == Dist(d as u32) {
                settled_flag[v.index()] = true;
                group.push(v);
            }
        }
        for &v in &group {
            settle(&mut delta, &mut settled, landmarks, v, bounds[v.index()]);
        }
        for &v in &group {
            let from = bounds[v.index()];
            for &w in gp.adj(v) {
                if in_aff[w.index()] && !settled_flag[w.index()] {
                    let cand = oplus(from, w, landmarks);
                    if cand < bounds[w.index()] {
                        bounds[w.index()] = cand;
                        queue.push(cand.d.0 as usize, w);
                    }
                }
            }
        }
        d += 1;
    }
    // Whatever the sweep never reached is unreachable in the updated graph.
    for &v in aff.members() {
        if !settled_flag[v.index()] {
            debug_assert!(!bounds[v.index()].d.is_finite());
            settle(&mut delta, &mut settled, landmarks, v, bounds[v.index()]);
        }
    }
    RepairOutcome { delta, settled }
}

fn settle(
    delta: &mut LandmarkDelta,
    trace: &mut Vec<(VertexId, LandmarkLength)>,
    landmarks: &LandmarkSet,
    v: VertexId,
    bound: LandmarkLength,
) {
    trace.push((v, bound));
    if let Some(j) = landmarks.rank(v) {
        // Another landmark: its label row stays empty, the highway learns
        // the new distance (possibly infinite).
        debug_assert!(bound.l || !bound.d.is_finite());
        delta.highway.push((j as usize, bound.d));
    } else if bound.d.is_finite() && !bound.l {
        delta.labels.push((v, Some(bound.d)));
    } else {
        // Covered through another landmark, or unreachable: no label.
        delta.labels.push((v, None));
    }
}

/// Which affected-vertex search the maintenance runs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchVariant {
    Basic,
    Improved,
}

/// Per-landmark counters from one batch update.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UpdateStats {
    /// Affected-set size per landmark, in landmark order.
    pub per_landmark_affected: Vec<usize>,
}

impl UpdateStats {
    pub fn total_affected(&self) -> usize {
        self.per_landmark_affected.iter().sum()
    }
}

fn landmark_task(
    gp: &Graph,
    b: &Batch,
    r: usize,
    gamma: &HighwayCoverLabelling,
    variant: SearchVariant,
) -> (LandmarkDelta, usize) {
    let mut view = OldView::new(gamma, r, gp.n());
    let aff = match variant {
        SearchVariant::Basic => batch_search_basic_inner(gp, b, &mut view, &gamma.landmarks),
        SearchVariant::Improved => {
            batch_search_improved_inner(gp, b, &mut view, &gamma.landmarks)
        }
    };
    let outcome = batch_repair_inner(gp, &aff, r, gamma, &mut view);
    (outcome.delta, aff.len())
}

fn merge(
    gp: &Graph,
    gamma: &HighwayCoverLabelling,
    results: Vec<(LandmarkDelta, usize)>,
) -> (HighwayCoverLabelling, UpdateStats) {
    let mut out = gamma.clone();
    out.grow_to(gp.n());
    let mut stats = UpdateStats {
        per_landmark_affected: Vec::with_capacity(results.len()),
    };
    for (delta, affected) in results {
        delta.apply(&mut out);
        stats.per_landmark_affected.push(affected);
    }
    (out, stats)
}

/// Maintains the labelling across one batch: `gp` must be the batch applied
/// to the graph `gamma` was built for. Returns the minimal labelling of
/// `gp` — identical to rebuilding from scratch.
pub fn batch_update(
    gp: &Graph,
    b: &Batch,
    gamma: &HighwayCoverLabelling,
    variant: SearchVariant,
) -> HighwayCoverLabelling {
    batch_update_with_stats(gp, b, gamma, variant).0
}

/// As [`batch_update`], also reporting per-landmark affected counts.
pub fn batch_update_with_stats(
    gp: &Graph,
    b: &Batch,
    gamma: &HighwayCoverLabelling,
    variant: SearchVariant,
) -> (HighwayCoverLabelling, UpdateStats) {
    let results = (0..gamma.landmarks.len())
        .map(|r| landmark_task(gp, b, r, gamma, variant))
        .collect();
    merge(gp, gamma, results)
}

/// Parallel [`batch_update`]: landmarks are processed as independent tasks
/// on a pool of `workers` threads. Output is bit-identical to sequential.
pub fn batch_update_parallel(
    gp: &Graph,
    b: &Batch,
    gamma: &HighwayCoverLabelling,
    variant: SearchVariant,
    workers: usize,
) -> HighwayCoverLabelling {
    batch_update_parallel_with_stats(gp, b, gamma, variant, workers).0
}

/// As [`batch_update_parallel`], also reporting per-landmark counts.
pub fn batch_update_parallel_with_stats(
    gp: &Graph,
    b: &Batch,
    gamma: &HighwayCoverLabelling,
    variant: SearchVariant,
    workers: usize,
) -> (HighwayCoverLabelling, UpdateStats) {
    if workers <= 1 {
        return batch_update_with_stats(gp, b, gamma, variant);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool");
    let results = pool.install(|| {
        (0..gamma.landmarks.len())
            .into_par_iter()
            .map(|r| landmark_task(gp, b, r, gamma, variant))
            .collect()
    });
    merge(gp, gamma, results)
}
