//! Library side of the CLI: the acceptance suite and shared helpers.

pub mod accept;

use anyhow::{Context, Result};
use cutstream::Graph;
use std::path::Path;

/// Reads a graph in the text format (`n m` header, `u v [w]` lines).
pub fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    cutstream::graph::parse_graph_text(&text).with_context(|| format!("parsing {}", path.display()))
}
