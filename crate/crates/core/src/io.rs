//! Text formats for digraphs: a dense 0/1 matrix, a 1-based edge list, and the
//! compact block-circulant form.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::blockmat::{compactify, decompactify, BinaryMatrix, CompactMatrix};
use crate::dsrg::Digraph;
use crate::error::{Error, Result};
use crate::search::SearchResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Matrix,
    Edges,
    Compact,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Matrix => "mat",
            Format::Edges => "edges",
            Format::Compact => "cm",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Matrix => "matrix",
            Format::Edges => "edges",
            Format::Compact => "compact",
        })
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(Format::Matrix),
            "edges" => Ok(Format::Edges),
            "compact" => Ok(Format::Compact),
            _ => Err(Error::parse(0, format!("unknown format {s:?}"))),
        }
    }
}

/// Guesses the format from the header and the first data line.
pub fn detect_format(text: &str) -> Result<Format> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    match header.split_whitespace().count() {
        1 => Ok(Format::Matrix),
        2 => match lines.next() {
            Some(l) if l.contains(',') => Ok(Format::Compact),
            _ => Ok(Format::Edges),
        },
        _ => Err(Error::parse(1, format!("unrecognised header {header:?}"))),
    }
}

/// A parsed input file: always a digraph, plus the compact form when the file had one.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub format: Format,
    pub digraph: Digraph,
    pub compact: Option<CompactMatrix>,
}

pub fn parse_digraph(text: &str) -> Result<Loaded> {
    let format = detect_format(text)?;
    let (digraph, compact) = match format {
        Format::Matrix => {
            let m: BinaryMatrix = text.parse()?;
            (Digraph::from_matrix(&m).map_err(|e| Error::parse(0, e.to_string()))?, None)
        }
        Format::Edges => (Digraph::parse_edge_list(text)?, None),
        Format::Compact => {
            let cm: CompactMatrix = text.parse()?;
            let m = decompactify(&cm).map_err(|e| Error::parse(0, e.to_string()))?;
            (Digraph::from_matrix(&m).map_err(|e| Error::parse(0, e.to_string()))?, Some(cm))
        }
    };
    Ok(Loaded {
        format,
        digraph,
        compact,
    })
}

pub fn read_digraph(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path).map_err(|e| Error::parse(0, format!("{}: {e}", path.display())))?;
    parse_digraph(&text)
}

/// Renders `g`; the compact form needs the block dimension.
pub fn render(g: &Digraph, format: Format, block_dim: Option<usize>) -> Result<String> {
    Ok(match format {
        Format::Matrix => g.to_matrix().to_string(),
        Format::Edges => g.to_edge_list(),
        Format::Compact => {
            let v = g.order();
            let b = match block_dim {
                Some(b) => b,
                None if v.is_multiple_of(9) => 9,
                None => return Err(Error::Domain(format!("cannot choose a block dimension for {v} vertices"))),
            };
            if b == 0 || !v.is_multiple_of(b) {
                return Err(Error::Shape(format!("{v} vertices do not split into {b} blocks")));
            }
            compactify(&g.to_matrix(), b, v / b)?.to_string()
        }
    })
}

/// Files of a directory that look like digraphs, ordered by name with numeric runs compared as numbers.
pub fn list_graph_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::parse(0, format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("cm" | "mat" | "edges")
                )
        })
        .collect();
    files.sort_by_key(|p| natural_key(&p.file_name().unwrap_or_default().to_string_lossy()));
    Ok(files)
}

/// Writes `sol_<i>.cm` (1-based, canonical order) and `stats.txt` into `dir`.
pub fn write_search_dir(dir: &Path, n: usize, result: &SearchResult) -> Result<()> {
    let io_err = |e: std::io::Error| Error::parse(0, format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io_err)?;
    for (i, sol) in result.solutions.iter().enumerate() {
        fs::write(dir.join(format!("sol_{}.cm", i + 1)), sol.to_string()).map_err(io_err)?;
    }
    let st = &result.stats;
    let mut stats = format!(
        "n: {n}\nsolutions: {}\nnodes: {}\npruned_overshoot: {}\npruned_mismatch: {}\ntime_seconds: {:.3}\ncomplete: {}\n",
        result.solutions.len(),
        st.nodes,
        st.pruned_overshoot,
        st.pruned_mismatch,
        st.elapsed.as_secs_f64(),
        st.complete
    );
    for w in &result.warnings {
        stats.push_str(&format!("warning: {w}\n"));
    }
    fs::write(dir.join("stats.txt"), stats).map_err(io_err)
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Chunk {
    Num(u128, usize),
    Text(String),
}

fn natural_key(s: &str) -> Vec<Chunk> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        let mut buf = String::new();
        let digit = c.is_ascii_digit();
        while let Some(&c) = chars.peek() {
            if c.is_ascii_digit() != digit {
                break;
            }
            buf.push(c);
            chars.next();
        }
        out.push(if digit {
            Chunk::Num(buf.parse().unwrap_or(u128::MAX), buf.len())
        } else {
            Chunk::Text(buf)
        });
    }
    out
}
