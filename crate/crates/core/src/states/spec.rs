use super::{build_c4_state, build_graph_state, build_linear_cluster, GraphState};
use crate::error::{Error, Result};

/// Resolves the built-in graph names `linear:N` and `c4`. Returns `None` for
/// anything else so callers can fall back to reading an edge-list file.
pub fn parse_named_graph(spec: &str) -> Option<Result<GraphState>> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("c4") {
        return Some(Ok(build_c4_state()));
    }
    let n = spec.strip_prefix("linear:")?;
    Some(
        n.trim()
            .parse::<usize>()
            .map_err(|e| Error::InvalidArgument(format!("bad qubit count in {spec:?}: {e}")))
            .and_then(build_linear_cluster),
    )
}

/// Parses a plain-text edge list: one `u v` pair per line, 0-indexed, with
/// `#` starting a comment. The qubit count is one past the largest index.
pub fn parse_edge_list(text: &str) -> Result<GraphState> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = fields.as_slice() else {
            return Err(Error::GraphSpec {
                line: line_no,
                message: format!("expected two vertex indices, found {:?}", line),
            });
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::GraphSpec {
                line: line_no,
                message: format!("{s:?} is not a vertex index"),
            })
        };
        let (u, v) = (parse(u)?, parse(v)?);
        if u == v {
            return Err(Error::GraphSpec {
                line: line_no,
                message: format!("self-loop on vertex {u}"),
            });
        }
        edges.push((u, v, line_no));
    }
    let n = edges
        .iter()
        .map(|&(u, v, _)| u.max(v) + 1)
        .max()
        .ok_or(Error::GraphSpec {
            line: 0,
            message: "edge list contains no edges".into(),
        })?;
    let pairs: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    build_graph_state(&pairs, n).map_err(|e| match e {
        Error::InvalidEdge(a, b) => {
            let line = edges
                .iter()
                .filter(|&&(u, v, _)| (u.min(v), u.max(v)) == (a.min(b), a.max(b)))
                .map(|&(_, _, l)| l)
                .nth(1)
                .unwrap_or(0);
            Error::GraphSpec {
                line,
                message: format!("duplicate edge ({a}, {b})"),
            }
        }
        other => other,
    })
}
