//! graph6 encoding and a plain edge-list text format.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

const MAX_N: usize = 68_719_476_735;

fn encode_n(n: usize, out: &mut String) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

/// Encodes `g` in graph6 (no `>>graph6<<` header, no newline).
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = String::new();
    encode_n(n, &mut out);
    let total = n * n.saturating_sub(1) / 2;
    let mut chunk = 0u8;
    let mut filled = 0;
    let mut idx = 0;
    for j in 1..n as Vertex {
        for i in 0..j {
            chunk = (chunk << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            idx += 1;
            if filled == 6 {
                out.push((chunk + 63) as char);
                chunk = 0;
                filled = 0;
            }
        }
    }
    debug_assert_eq!(idx, total);
    if filled > 0 {
        chunk <<= 6 - filled;
        out.push((chunk + 63) as char);
    }
    out
}

fn sextet(bytes: &[u8], pos: usize) -> Result<usize> {
    match bytes.get(pos) {
        None => Err(Error::Graph6 { pos, msg: "unexpected end of input".into() }),
        Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as usize),
        Some(&b) => Err(Error::Graph6 { pos, msg: format!("byte {b:#04x} outside 63..=126") }),
    }
}

/// Decodes one graph6 string. Surrounding whitespace and an optional
/// `>>graph6<<` header are ignored; anything else after the data is an error.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let trimmed = text.trim();
    let body = trimmed.strip_prefix(">>graph6<<").unwrap_or(trimmed);
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Graph6 { pos: 0, msg: "empty input".into() });
    }
    let (n, mut pos) = if bytes[0] != b'~' {
        (sextet(bytes, 0)?, 1)
    } else if bytes.get(1) != Some(&b'~') {
        let mut n = 0;
        for k in 1..4 {
            n = (n << 6) | sextet(bytes, k)?;
        }
        if n <= 62 {
            return Err(Error::Graph6 { pos: 0, msg: format!("long header used for n = {n}") });
        }
        (n, 4)
    } else {
        let mut n = 0;
        for k in 2..8 {
            n = (n << 6) | sextet(bytes, k)?;
        }
        if n <= 258_047 || n > MAX_N {
            return Err(Error::Graph6 { pos: 0, msg: format!("eight-byte header used for n = {n}") });
        }
        (n, 8)
    };
    let total = n * n.saturating_sub(1) / 2;
    let need = total.div_ceil(6);
    if bytes.len() < pos + need {
        return Err(Error::Graph6 {
            pos: bytes.len(),
            msg: format!("expected {need} data bytes for n = {n}, found {}", bytes.len() - pos),
        });
    }
    if bytes.len() > pos + need {
        return Err(Error::Graph6 { pos: pos + need, msg: "trailing bytes".into() });
    }
    let mut edges = Vec::new();
    let mut idx = 0;
    'outer: for j in 1..n as Vertex {
        for i in 0..j {
            if idx == total {
                break 'outer;
            }
            let word = sextet(bytes, pos + idx / 6)?;
            if (word >> (5 - idx % 6)) & 1 == 1 {
                edges.push(Edge(i, j));
            }
            idx += 1;
        }
    }
    pos += need;
    if total % 6 != 0 {
        let last = sextet(bytes, pos - 1)?;
        let pad = 6 - total % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Error::Graph6 { pos: pos - 1, msg: "non-zero padding bits".into() });
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted(n, edges))
}

/// Parses "u v" lines. Blank lines and `#` comments are skipped. An optional
/// first line "n <count>" fixes the vertex count; otherwise it is one more
/// than the largest endpoint.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut pairs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| Error::EdgeList { line: k + 1, msg };
        if parts.len() == 2 && parts[0] == "n" {
            let n = parts[1].parse::<usize>().map_err(|e| err(e.to_string()))?;
            declared = Some(n);
            continue;
        }
        if parts.len() != 2 {
            return Err(err(format!("expected two vertex ids, found {}", parts.len())));
        }
        let a = parts[0].parse::<Vertex>().map_err(|e| err(e.to_string()))?;
        let b = parts[1].parse::<Vertex>().map_err(|e| err(e.to_string()))?;
        pairs.push((a, b));
    }
    let n = declared.unwrap_or_else(|| pairs.iter().map(|&(a, b)| a.max(b) as usize + 1).max().unwrap_or(0));
    Graph::from_edges(n, pairs)
}

pub fn emit_edge_list(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.vertex_count());
    for e in g.edges() {
        s.push_str(&format!("{} {}\n", e.0, e.1));
    }
    s
}

/// Accepts either format: text containing whitespace-separated pairs on
/// several lines (or an `n` header) is an edge list, anything else graph6.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let t = text.trim();
    let looks_like_list = t.contains('\n') || t.contains(' ') || t.starts_with("n ");
    if looks_like_list && !t.starts_with(">>graph6<<") {
        parse_edge_list(t)
    } else {
        parse_graph6(t)
    }
}
