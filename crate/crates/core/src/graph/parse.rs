use std::collections::HashMap;

use super::{default_names, ExtNat, Graph, GraphError};

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// vertices: v w
/// edge v v 4
/// edge v w inf
/// ```
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut names: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut entries: HashMap<(usize, usize), ExtNat> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("vertices:") {
            if names.is_some() {
                return Err(GraphError::DuplicateDeclaration { line });
            }
            let mut list = Vec::new();
            for name in rest.split_whitespace() {
                if index.insert(name.to_string(), list.len()).is_some() {
                    return Err(GraphError::DuplicateVertex {
                        line,
                        name: name.to_string(),
                    });
                }
                list.push(name.to_string());
            }
            if list.is_empty() {
                return Err(GraphError::NoVertices);
            }
            names = Some(list);
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.first() != Some(&"edge") || tokens.len() != 4 {
            return Err(GraphError::Malformed {
                line,
                text: content.to_string(),
            });
        }
        if names.is_none() {
            return Err(GraphError::EdgeBeforeVertices { line });
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| GraphError::UndeclaredVertex {
                    line,
                    name: name.to_string(),
                })
        };
        let src = lookup(tokens[1])?;
        let dst = lookup(tokens[2])?;
        let mult = parse_multiplicity(tokens[3], line)?;
        if entries.insert((src, dst), mult).is_some() {
            return Err(GraphError::RepeatedEdge {
                line,
                src: tokens[1].to_string(),
                dst: tokens[2].to_string(),
            });
        }
    }

    let names = names.ok_or(GraphError::MissingVertices)?;
    let n = names.len();
    let rows = (0..n)
        .map(|v| {
            (0..n)
                .map(|w| entries.remove(&(v, w)).unwrap_or_else(ExtNat::zero))
                .collect()
        })
        .collect();
    Graph::new(names, rows)
}

fn parse_multiplicity(text: &str, line: usize) -> Result<ExtNat, GraphError> {
    if text.starts_with('-') {
        return Err(GraphError::NegativeMultiplicity {
            line,
            text: text.to_string(),
        });
    }
    match text.parse::<ExtNat>() {
        Ok(m) if m.is_positive() => Ok(m),
        _ => Err(GraphError::InvalidMultiplicity {
            line,
            text: text.to_string(),
        }),
    }
}

/// Parses the CLI matrix shorthand `"a,b;c,d"` (rows separated by `;`, `inf` allowed).
pub fn parse_matrix_shorthand(text: &str) -> Result<Graph, GraphError> {
    let rows: Vec<Vec<ExtNat>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    e.trim()
                        .parse::<ExtNat>()
                        .map_err(|_| GraphError::MatrixEntry(e.trim().to_string()))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(GraphError::NotSquare {
            rows: n,
            row,
            len: r.len(),
        });
    }
    Graph::new(default_names(n), rows)
}
