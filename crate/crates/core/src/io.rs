//! Text formats for graphs and clusterings.
//!
//! Edge list:
//!
//! ```text
//! #metrics name1 name2 ... nameK
//! #vertices N                      (optional; default max id + 1)
//! u v w1 w2 ... wK                 (one undirected edge per line)
//! ```
//!
//! Clustering: one `vertex cluster` pair per line. Lines starting with `#`
//! (other than the headers above) and blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Clustering, MultiGraph, MultiGraphBuilder};

pub fn load_graph(path: impl AsRef<Path>) -> Result<MultiGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text, &path.display().to_string())
}

pub fn save_graph(g: &MultiGraph, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, format_graph(g).as_bytes())
}

pub fn load_clustering(path: impl AsRef<Path>, n_vertices: usize) -> Result<Clustering> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_clustering(&text, n_vertices, &path.display().to_string())
}

pub fn save_clustering(c: &Clustering, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, format_clustering(c).as_bytes())
}

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(
        ".{}.tmp{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn parse_graph(text: &str, source: &str) -> Result<MultiGraph> {
    let err = |line: usize, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (header_line, names) = loop {
        match lines.next() {
            None => return Err(err(0, "missing '#metrics' header".into())),
            Some((_, "")) => continue,
            Some((ln, l)) => {
                let mut toks = l.split_whitespace();
                if toks.next() != Some("#metrics") {
                    return Err(err(ln, "first line must be '#metrics name1 ... nameK'".into()));
                }
                let names: Vec<String> = toks.map(str::to_string).collect();
                if names.is_empty() {
                    return Err(err(ln, "'#metrics' header names no metrics".into()));
                }
                break (ln, names);
            }
        }
    };
    let k = names.len();
    let mut declared_n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize, Vec<f64>)> = Vec::new();

    for (ln, l) in lines {
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('#') {
            let mut toks = rest.split_whitespace();
            match toks.next() {
                Some("vertices") => {
                    let n = toks
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| err(ln, "'#vertices' needs a count".into()))?;
                    declared_n = Some(n);
                }
                Some("directed") => {
                    return Err(err(ln, "directed graphs are not supported".into()));
                }
                Some("metrics") => {
                    return Err(err(ln, "repeated '#metrics' header".into()));
                }
                _ => {}
            }
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != k + 2 {
            return Err(err(
                ln,
                format!("expected 2 vertex ids and {k} weights, found {} fields", toks.len()),
            ));
        }
        let u = parse_id(toks[0]).map_err(|m| err(ln, m))?;
        let v = parse_id(toks[1]).map_err(|m| err(ln, m))?;
        let w = toks[2..]
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| err(ln, format!("invalid weight '{t}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        edges.push((ln, u, v, w));
    }

    let max_id = edges.iter().map(|e| e.1.max(e.2) + 1).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) if n < max_id => {
            return Err(err(
                header_line,
                format!("'#vertices {n}' is smaller than the largest vertex id {}", max_id - 1),
            ))
        }
        Some(n) => n,
        None => max_id,
    };
    let mut b = MultiGraphBuilder::new(n, names);
    for (ln, u, v, w) in edges {
        b.add_edge(u, v, &w).map_err(|e| err(ln, e.to_string()))?;
    }
    b.build()
}

fn parse_id(tok: &str) -> std::result::Result<usize, String> {
    tok.parse::<usize>()
        .map_err(|_| format!("invalid vertex id '{tok}'"))
}

pub fn format_graph(g: &MultiGraph) -> String {
    let mut out = String::with_capacity(32 * g.n_edges() * g.n_metrics());
    out.push_str("#metrics");
    for name in g.metric_names() {
        out.push(' ');
        out.push_str(name);
    }
    let _ = writeln!(out, "\n#vertices {}", g.n_vertices());
    for e in 0..g.n_edges() {
        let (u, v) = g.endpoints(e);
        let _ = write!(out, "{u} {v}");
        for w in g.edge_weights(e) {
            // shortest representation that parses back to the same f64
            let _ = write!(out, " {w:?}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_clustering(text: &str, n_vertices: usize, source: &str) -> Result<Clustering> {
    let err = |line: usize, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut raw: Vec<Option<String>> = vec![None; n_vertices];
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(err(ln, format!("expected 'vertex cluster', found {} fields", toks.len())));
        }
        let v = parse_id(toks[0]).map_err(|m| err(ln, m))?;
        if v >= n_vertices {
            return Err(err(ln, format!("vertex {v} out of range 0..{n_vertices}")));
        }
        if raw[v].is_some() {
            return Err(err(ln, format!("vertex {v} assigned twice")));
        }
        raw[v] = Some(toks[1].to_string());
    }
    if let Some(missing) = raw.iter().position(Option::is_none) {
        let count = raw.iter().filter(|r| r.is_none()).count();
        return Err(Error::InvalidClustering(format!(
            "{source}: {count} vertex/vertices unassigned (first: {missing})"
        )));
    }
    let labels: Vec<String> = raw.into_iter().map(Option::unwrap).collect();
    Ok(Clustering::from_labels(&labels))
}

pub fn format_clustering(c: &Clustering) -> String {
    let mut out = String::with_capacity(8 * c.n_vertices());
    for (v, l) in c.labels().iter().enumerate() {
        let _ = writeln!(out, "{v} {l}");
    }
    out
}
