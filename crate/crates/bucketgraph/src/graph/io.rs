//! Text file formats: `.wel` weighted edge lists, `.coords` coordinate
//! tables, and the canonical per-vertex result output.
//!
//! A `.wel` line is `src dst weight` with whitespace separators and 0-based
//! unsigned ids. Lines starting with `#` are comments, except the optional
//! header `# n <count>` which declares the vertex count (otherwise the count
//! is max id + 1). Duplicate parallel edges are preserved.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{CoordinateTable, Graph, Vid};
use crate::{Error, Result};

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Edge triples plus the declared or inferred vertex count.
pub type EdgeList = (usize, Vec<(Vid, Vid, u32)>);

/// Reads a `.wel` file into edge triples plus the declared/inferred vertex count.
pub fn read_edge_triples(path: &Path) -> Result<EdgeList> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut triples: Vec<(Vid, Vid, u32)> = Vec::new();
    let mut declared_n: Option<usize> = None;
    let mut max_id: u64 = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("n") {
                if let Some(count) = parts.next() {
                    let n: usize = count
                        .parse()
                        .map_err(|_| parse_err(path, line_no, "bad vertex count header"))?;
                    declared_n = Some(n);
                }
            }
            continue;
        }
        let mut fields = text.split_whitespace();
        let src: Vid = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing src"))?
            .parse()
            .map_err(|_| parse_err(path, line_no, "src must be an unsigned integer"))?;
        let dst: Vid = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing dst"))?
            .parse()
            .map_err(|_| parse_err(path, line_no, "dst must be an unsigned integer"))?;
        let weight_raw: i64 = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing weight"))?
            .parse()
            .map_err(|_| parse_err(path, line_no, "weight must be an integer"))?;
        if fields.next().is_some() {
            return Err(parse_err(path, line_no, "trailing fields"));
        }
        if weight_raw < 0 {
            return Err(Error::Domain(format!(
                "negative weight {weight_raw} at {}:{line_no}",
                path.display()
            )));
        }
        if weight_raw > i32::MAX as i64 {
            return Err(Error::Domain(format!(
                "weight {weight_raw} exceeds the 32-bit signed range at {}:{line_no}",
                path.display()
            )));
        }
        max_id = max_id.max(src as u64).max(dst as u64);
        triples.push((src, dst, weight_raw as u32));
    }

    let inferred = if triples.is_empty() {
        0
    } else {
        max_id as usize + 1
    };
    let n = match declared_n {
        Some(n) if n >= inferred => n,
        // Ids beyond the declared count extend it; ids are kept as-is.
        Some(_) => inferred,
        None => inferred,
    };
    if n == 0 {
        return Err(Error::Domain(format!(
            "{} describes an empty graph",
            path.display()
        )));
    }
    Ok((n, triples))
}

pub fn load_weighted_edge_list(
    path: &Path,
    symmetrize: bool,
    build_in_edges: bool,
) -> Result<Graph> {
    let (n, triples) = read_edge_triples(path)?;
    Graph::build(n, &triples, symmetrize, build_in_edges)
}

/// Writes the graph back out as a `.wel` with a `# n` header so isolated
/// trailing vertices survive a round trip.
pub fn save_weighted_edge_list(g: &Graph, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# n {}", g.num_vertices())?;
    for (src, dst, weight) in g.edge_triples() {
        writeln!(w, "{src} {dst} {weight}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `.coords` file (`v lat lon` per line) covering all `n` vertices.
pub fn load_coords(path: &Path, n: usize) -> Result<CoordinateTable> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut xy = vec![None; n];
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        let v: usize = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing vertex id"))?
            .parse()
            .map_err(|_| parse_err(path, line_no, "vertex id must be an unsigned integer"))?;
        let lat: f64 = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing latitude"))?
            .parse()
            .map_err(|_| parse_err(path, line_no, "bad latitude"))?;
        let lon: f64 = fields
            .next()
            .ok_or_else(|| parse_err(path, line_no, "missing longitude"))?
            .parse()
            .map_err(|_| parse_err(path, line_no, "bad longitude"))?;
        if v >= n {
            return Err(parse_err(path, line_no, format!("vertex {v} out of range")));
        }
        xy[v] = Some((lat, lon));
    }
    let coords: Option<Vec<(f64, f64)>> = xy.into_iter().collect();
    match coords {
        Some(list) => CoordinateTable::new(list),
        None => Err(Error::Domain(format!(
            "{} does not cover all {n} vertices",
            path.display()
        ))),
    }
}

pub fn save_coords(coords: &CoordinateTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for v in 0..coords.len() {
        let (lat, lon) = coords.get(v as Vid);
        writeln!(w, "{v} {lat} {lon}")?;
    }
    w.flush()?;
    Ok(())
}

/// Canonical distance output: one `v dist` line per vertex, with the
/// unreachable sentinel printed as `inf`.
pub fn format_distances(dist: &[i32]) -> String {
    let mut out = String::with_capacity(dist.len() * 8);
    for (v, &d) in dist.iter().enumerate() {
        if d == i32::MAX {
            out.push_str(&format!("{v} inf\n"));
        } else {
            out.push_str(&format!("{v} {d}\n"));
        }
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}
