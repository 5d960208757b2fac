//! `hwcl` — exact shortest-path distances over changing graphs.
//!
//! `build` constructs a landmark labelling from an edge list, `update`
//! folds a batch of edge insertions and deletions into an existing
//! labelling, `query` answers distance queries from a pairs file, and
//! `bench` sweeps update batches and reports CSV measurements.
//!
//! All user-facing ids are the external ids of the input edge list. The
//! mapping to the labelling's dense ids is written next to every labelling
//! file as a `.ids` sidecar, which later commands treat as authoritative:
//! with it, a vertex keeps its identity even after losing every edge.
//! Stats go to standard error; payload goes to files or standard out.

mod files;

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hwcl::graph::{Batch, EdgeUpdate, Graph, IdMap, UpdateKind};
use hwcl::{HighwayCoverLabelling, LandmarkSet, SearchVariant};

#[derive(Parser)]
#[command(name = "hwcl", version, about = "Exact distances on batch-dynamic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a labelling from an edge list.
    Build {
        /// Edge list, one `u v` pair per line.
        #[arg(long)]
        graph: PathBuf,
        /// Number of landmarks, picked by descending degree.
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// Explicit landmark ids (overrides --k).
        #[arg(long)]
        landmarks_file: Option<PathBuf>,
        /// Output labelling file; an id sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Fold an update batch into an existing labelling.
    Update {
        /// Edge list the labelling was built on.
        #[arg(long)]
        graph: PathBuf,
        /// Labelling file produced by `build` or a previous `update`.
        #[arg(long)]
        labels: PathBuf,
        /// Update file, one `+ u v` or `- u v` per line.
        #[arg(long)]
        batch: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Improved)]
        variant: Variant,
        /// Landmark-level parallelism; 1 runs sequentially.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also write the updated graph as an edge list.
        #[arg(long)]
        out_graph: Option<PathBuf>,
        /// Output labelling file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer distance queries from a pairs file.
    Query {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Query file, one `u v` pair per line.
        #[arg(long)]
        pairs: PathBuf,
        /// Output file; standard out when absent. One distance per pair,
        /// -1 for unreachable.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep update batches and report a CSV of measurements.
    Bench {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// Update batch files to sweep.
        #[arg(long, num_args = 1..)]
        batches: Vec<PathBuf>,
        /// Sizes of generated batches to sweep (defaults to 500,1000 when
        /// no batch files are given either).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Worker counts to sweep.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        workers: Vec<usize>,
        /// Seed for generated batches and sampled query pairs.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Variant {
    Basic,
    Improved,
}

impl Variant {
    fn to_search(self) -> SearchVariant {
        match self {
            Variant::Basic => SearchVariant::Basic,
            Variant::Improved => SearchVariant::Improved,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::Improved => "improved",
        }
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("hwcl: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Build {
            graph,
            k,
            landmarks_file,
            out,
        } => cmd_build(&graph, k, landmarks_file.as_deref(), &out),
        Command::Update {
            graph,
            labels,
            batch,
            variant,
            workers,
            out_graph,
            out,
        } => cmd_update(&graph, &labels, &batch, variant, workers, out_graph.as_deref(), &out),
        Command::Query {
            graph,
            labels,
            pairs,
            out,
        } => cmd_query(&graph, &labels, &pairs, out.as_deref()),
        Command::Bench {
            graph,
            k,
            batches,
            sizes,
            workers,
            seed,
            out,
        } => cmd_bench(&graph, k, &batches, &sizes, &workers, seed, &out),
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn write_labelling(out: &Path, gamma: &HighwayCoverLabelling, map: &IdMap) -> Result<()> {
    fs::write(out, hwcl::serialize(gamma)).with_context(|| format!("writing {}", out.display()))?;
    files::write_ids(&files::sidecar_path(out), map)
}

/// Loads a labelling plus the graph it describes, resolving the graph file
/// through the labelling's id sidecar when one exists.
fn load_indexed(graph: &Path, labels: &Path) -> Result<(Graph, IdMap, HighwayCoverLabelling)> {
    let bytes = fs::read(labels).with_context(|| format!("reading {}", labels.display()))?;
    let gamma = hwcl::deserialize(&bytes).with_context(|| format!("parsing {}", labels.display()))?;
    let sidecar = files::sidecar_path(labels);
    let mapping = if sidecar.exists() {
        Some(files::read_ids(&sidecar)?)
    } else {
        None
    };
    let (g, map) = files::load_graph(graph, mapping.as_ref())?;
    ensure!(
        gamma.n() == g.n(),
        "labelling {} covers {} vertices but graph {} has {}",
        labels.display(),
        gamma.n(),
        graph.display(),
        g.n()
    );
    Ok((g, map, gamma))
}

/// Resolves update lines from external ids to dense ids, in two passes. The
/// first pass normalizes against a throwaway mapping to learn which updates
/// survive cancellation and validity checks; the second allocates dense ids
/// only for vertices the survivors actually introduce, so a cancelled or
/// invalid insert cannot grow the vertex set.
fn resolve_batch(g: &Graph, map: &IdMap, lines: &[files::BatchLine]) -> (Batch, IdMap) {
    let to_update = |kind, u, v| match kind {
        UpdateKind::Insert => EdgeUpdate::insert(u, v),
        UpdateKind::Delete => EdgeUpdate::delete(u, v),
    };
    let mut probe = map.clone();
    let candidates: Vec<EdgeUpdate> = lines
        .iter()
        .map(|line| {
            let u = probe.get_or_insert(line.u).0;
            let v = probe.get_or_insert(line.v).0;
            to_update(line.kind, u, v)
        })
        .collect();
    let survivors = hwcl::normalize_batch(g, &candidates);
    let mut finals = map.clone();
    let renumbered: Vec<EdgeUpdate> = survivors
        .updates()
        .iter()
        .map(|upd| {
            let u = finals.get_or_insert(probe.external(upd.u)).0;
            let v = finals.get_or_insert(probe.external(upd.v)).0;
            to_update(upd.kind, u, v)
        })
        .collect();
    (hwcl::normalize_batch(g, &renumbered), finals)
}

fn cmd_build(graph: &Path, k: usize, landmarks_file: Option<&Path>, out: &Path) -> Result<()> {
    let start = Instant::now();
    let (g, map) = files::load_graph(graph, None)?;
    let landmarks = match landmarks_file {
        Some(path) => {
            let mut picks = Vec::new();
            for ext in files::read_landmarks(path)? {
                let v = map.dense(ext).with_context(|| {
                    format!(
                        "{}: vertex {ext} does not appear in {}",
                        path.display(),
                        graph.display()
                    )
                })?;
                picks.push(v);
            }
            LandmarkSet::new(&g, picks)?
        }
        None => hwcl::select_landmarks(&g, k)?,
    };
    let gamma = hwcl::build(&g, &landmarks);
    write_labelling(out, &gamma, &map)?;
    eprintln!(
        "build: n={} m={} k={} size={} time_ms={:.1}",
        g.n(),
        g.m(),
        landmarks.len(),
        gamma.labelling_size(),
        ms(start)
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_update(
    graph: &Path,
    labels: &Path,
    batch: &Path,
    variant: Variant,
    workers: usize,
    out_graph: Option<&Path>,
    out: &Path,
) -> Result<()> {
    ensure!(workers >= 1, "workers must be at least 1");
    let (g, map, gamma) = load_indexed(graph, labels)?;
    let lines = files::read_batch(batch)?;
    let (b, map_final) = resolve_batch(&g, &map, &lines);
    let gp = hwcl::apply_batch(&g, &b);
    debug_assert_eq!(gp.n(), map_final.len());
    let start = Instant::now();
    let (updated, stats) =
        hwcl::batch_update_parallel_with_stats(&gp, &b, &gamma, variant.to_search(), workers);
    let elapsed = ms(start);
    write_labelling(out, &updated, &map_final)?;
    if let Some(path) = out_graph {
        files::write_graph(path, &gp, &map_final)?;
    }
    let counts: Vec<String> = stats
        .per_landmark_affected
        .iter()
        .map(usize::to_string)
        .collect();
    eprintln!(
        "update: variant={} workers={workers} updates={} affected_per_landmark={} affected_total={} size={} time_ms={elapsed:.1}",
        variant.name(),
        b.len(),
        counts.join(","),
        stats.total_affected(),
        updated.labelling_size()
    );
    Ok(())
}

fn cmd_query(graph: &Path, labels: &Path, pairs: &Path, out: Option<&Path>) -> Result<()> {
    let (g, map, gamma) = load_indexed(graph, labels)?;
    let pair_list = files::read_pairs(pairs)?;
    let start = Instant::now();
    let mut payload = String::new();
    for &(a, b) in &pair_list {
        let resolve = |ext: u64| {
            map.dense(ext)
                .with_context(|| format!("vertex {ext} is not in the labelling's id mapping"))
        };
        let result = hwcl::query(&gamma, &g, resolve(a)?, resolve(b)?)?;
        let distance = if result.distance.is_finite() {
            result.distance.0 as i64
        } else {
            -1
        };
        payload.push_str(&format!("{distance}\n"));
    }
    let elapsed = ms(start);
    match out {
        Some(path) => {
            fs::write(path, payload).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout()
            .write_all(payload.as_bytes())
            .context("writing standard out")?,
    }
    eprintln!("query: pairs={} time_ms={elapsed:.1}", pair_list.len());
    Ok(())
}

fn cmd_bench(
    graph: &Path,
    k: usize,
    batch_files: &[PathBuf],
    sizes: &[usize],
    workers: &[usize],
    seed: u64,
    out: &Path,
) -> Result<()> {
    ensure!(
        workers.iter().all(|&w| w >= 1),
        "workers must be at least 1"
    );
    let (g, map) = files::load_graph(graph, None)?;
    let landmarks = hwcl::select_landmarks(&g, k)?;
    let gamma = hwcl::build(&g, &landmarks);

    // Each source is one batch to sweep: either read from a file (external
    // ids, resolved like `update` does) or generated on the loaded graph.
    let mut sources: Vec<(String, Batch, Graph)> = Vec::new();
    for path in batch_files {
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let (b, _) = resolve_batch(&g, &map, &files::read_batch(path)?);
        let gp = hwcl::apply_batch(&g, &b);
        sources.push((label, b, gp));
    }
    let default_sizes = [500, 1000];
    let sizes: &[usize] = if sizes.is_empty() && batch_files.is_empty() {
        &default_sizes
    } else {
        sizes
    };
    let mut gen_rng = hwcl::gen::rng(seed);
    for &size in sizes {
        let b = hwcl::gen::random_batch(&g, size, 0, &mut gen_rng);
        let gp = hwcl::apply_batch(&g, &b);
        sources.push((format!("gen{size}"), b, gp));
    }

    let mut csv = String::from(
        "variant,batch,size,workers,affected_total,update_ms,mean_query_us,labelling_size,labelling_hash\n",
    );
    for (label, b, gp) in &sources {
        for variant in [Variant::Basic, Variant::Improved] {
            for &w in workers {
                let start = Instant::now();
                let (updated, stats) =
                    hwcl::batch_update_parallel_with_stats(gp, b, &gamma, variant.to_search(), w);
                let update_ms = ms(start);
                let bytes = hwcl::serialize(&updated);
                let hash = hwcl::storage::fnv1a64(&bytes);
                let mean_query_us = sample_queries(&updated, gp, seed)?;
                csv.push_str(&format!(
                    "{},{label},{},{w},{},{update_ms:.3},{mean_query_us:.3},{},{hash:016x}\n",
                    variant.name(),
                    b.len(),
                    stats.total_affected(),
                    updated.labelling_size()
                ));
            }
        }
    }
    fs::write(out, csv).with_context(|| format!("writing {}", out.display()))?;
    eprintln!(
        "bench: n={} m={} k={} sources={} rows={}",
        g.n(),
        g.m(),
        k,
        sources.len(),
        sources.len() * 2 * workers.len()
    );
    Ok(())
}

/// Mean time of 1,000 seeded random queries, in microseconds.
fn sample_queries(gamma: &HighwayCoverLabelling, g: &Graph, seed: u64) -> Result<f64> {
    use rand::Rng as _;

    const SAMPLES: usize = 1_000;
    if g.n() == 0 {
        return Ok(0.0);
    }
    let mut rng = hwcl::gen::rng(seed);
    let pairs: Vec<(u32, u32)> = (0..SAMPLES)
        .map(|_| {
            (
                rng.gen_range(0..g.n() as u32),
                rng.gen_range(0..g.n() as u32),
            )
        })
        .collect();
    let start = Instant::now();
    for &(s, t) in &pairs {
        let result = hwcl::query(gamma, g, hwcl::VertexId(s), hwcl::VertexId(t))?;
        std::hint::black_box(result.distance);
    }
    Ok(start.elapsed().as_secs_f64() * 1e6 / SAMPLES as f64)
}
