//! Text file formats: edge lists, update batches, query pairs, forced
//! landmark lists, and the `.ids` sidecar that pins external vertex ids to
//! the labelling's dense order.
//!
//! All formats share the same line discipline: blank lines and lines whose
//! first non-space character is `#` are skipped; everything else must parse,
//! and errors carry the 1-based line number.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hwcl::graph::{Graph, IdMap, UpdateKind};

/// Path of the id sidecar that travels with a labelling file.
pub fn sidecar_path(labels: &Path) -> PathBuf {
    let mut s = labels.as_os_str().to_owned();
    s.push(".ids");
    PathBuf::from(s)
}

fn content_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (no, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        out.push((no + 1, text.to_string()));
    }
    Ok(out)
}

/// Loads a graph. Without a mapping, external ids are assigned dense ids in
/// first-appearance order. With one (from a `.ids` sidecar), every id in the
/// file must already be mapped, and the vertex count is the mapping's — so
/// isolated labelled vertices survive even though an edge list cannot
/// mention them.
pub fn load_graph(path: &Path, mapping: Option<&IdMap>) -> Result<(Graph, IdMap)> {
    match mapping {
        None => {
            let file =
                File::open(path).with_context(|| format!("opening {}", path.display()))?;
            hwcl::load_edge_list(BufReader::new(file))
                .with_context(|| format!("parsing {}", path.display()))
        }
        Some(map) => {
            let mut edges = Vec::new();
            for (no, text) in content_lines(path)? {
                let (a, b) = parse_id_pair(&text)
                    .with_context(|| format!("{}:{no}: malformed edge `{text}`", path.display()))?;
                let resolve = |ext: u64| {
                    map.dense(ext).with_context(|| {
                        format!(
                            "{}:{no}: vertex {ext} is not in the labelling's id mapping",
                            path.display()
                        )
                    })
                };
                edges.push((resolve(a)?.0, resolve(b)?.0));
            }
            Ok((Graph::from_edges(map.len(), &edges), map.clone()))
        }
    }
}

fn parse_id_pair(text: &str) -> Option<(u64, u64)> {
    let mut tokens = text.split_whitespace();
    let a = tokens.next()?.parse().ok()?;
    let b = tokens.next()?.parse().ok()?;
    tokens.next().is_none().then_some((a, b))
}

/// One update line in external ids: `+ u v` inserts, `- u v` deletes.
#[derive(Clone, Copy, Debug)]
pub struct BatchLine {
    pub kind: UpdateKind,
    pub u: u64,
    pub v: u64,
}

pub fn read_batch(path: &Path) -> Result<Vec<BatchLine>> {
    let mut out = Vec::new();
    for (no, text) in content_lines(path)? {
        let parsed = (|| {
            let mut tokens = text.split_whitespace();
            let kind = match tokens.next()? {
                "+" => UpdateKind::Insert,
                "-" => UpdateKind::Delete,
                _ => return None,
            };
            let u = tokens.next()?.parse().ok()?;
            let v = tokens.next()?.parse().ok()?;
            tokens.next().is_none().then_some(BatchLine { kind, u, v })
        })();
        match parsed {
            Some(line) => out.push(line),
            None => bail!(
                "{}:{no}: malformed update `{text}` (expected `+ u v` or `- u v`)",
                path.display()
            ),
        }
    }
    Ok(out)
}

/// Query pairs, one `u v` per line, in external ids.
pub fn read_pairs(path: &Path) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for (no, text) in content_lines(path)? {
        match parse_id_pair(&text) {
            Some(pair) => out.push(pair),
            None => bail!(
                "{}:{no}: malformed pair `{text}` (expected two vertex ids)",
                path.display()
            ),
        }
    }
    Ok(out)
}

/// Forced landmark list: whitespace-separated external ids, any line split.
pub fn read_landmarks(path: &Path) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (no, text) in content_lines(path)? {
        for token in text.split_whitespace() {
            let id = token.parse().with_context(|| {
                format!("{}:{no}: malformed landmark id `{token}`", path.display())
            })?;
            out.push(id);
        }
    }
    Ok(out)
}

/// Writes the id sidecar: one external id per line, dense order.
pub fn write_ids(path: &Path, map: &IdMap) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for ext in map.externals() {
        writeln!(w, "{ext}").with_context(|| format!("writing {}", path.display()))?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}

/// Reads an id sidecar back into a mapping.
pub fn read_ids(path: &Path) -> Result<IdMap> {
    let mut map = IdMap::new();
    for (no, text) in content_lines(path)? {
        let ext: u64 = text
            .parse()
            .with_context(|| format!("{}:{no}: malformed id `{text}`", path.display()))?;
        let before = map.len();
        map.get_or_insert(ext);
        if map.len() == before {
            bail!("{}:{no}: duplicate id {ext}", path.display());
        }
    }
    Ok(map)
}

/// Writes a graph as an edge list in external ids. Isolated vertices carry
/// no edges, so they are recorded only by the sidecar.
pub fn write_graph(path: &Path, g: &Graph, map: &IdMap) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", map.external(u), map.external(v))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}
