//! Quiver config files.
//!
//! ```text
//! vertices: [i, j]
//! edges: [[i, j], [j, j]]
//! ring: [q, t1, t2]
//! q: q
//! t[1]: t1
//! t[2]: q / t1
//! assume_generic: true
//! ```
//! `q:` defaults to the parameter `q`; a missing `t[k]:` defaults to the
//! parameter `t<k>`, or to `t` when no such parameter exists.

use std::sync::Arc;

use super::{Edge, Quiver};
use crate::error::{Error, Result};
use crate::scalars::{sym, ParamRing, ParamScalar};

fn parse_list(body: &str, line: usize) -> Result<Vec<String>> {
    let b = body.trim();
    let inner =
        b.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| Error::config(line, format!("expected a `[...]` list, got `{b}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(|s| s.trim().to_string()).collect())
}

fn parse_edges(body: &str, line: usize) -> Result<Vec<(String, String)>> {
    let b = body.trim();
    let inner = b.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| Error::config(line, "expected `[[src, dst], ...]`"))?.trim();
    let mut out = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let open = rest.strip_prefix('[').ok_or_else(|| Error::config(line, format!("expected `[` at `{rest}`")))?;
        let close = open.find(']').ok_or_else(|| Error::config(line, "unterminated edge"))?;
        let pair = parse_list(&format!("[{}]", &open[..close]), line)?;
        if pair.len() != 2 {
            return Err(Error::config(line, format!("an edge needs two endpoints, got {}", pair.len())));
        }
        out.push((pair[0].clone(), pair[1].clone()));
        rest = open[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

#[derive(Debug)]
pub struct QuiverConfig {
    pub quiver: Quiver<ParamScalar>,
    pub ring: Arc<ParamRing>,
}

pub fn parse_quiver_config(text: &str) -> Result<QuiverConfig> {
    let mut vertices: Option<(usize, Vec<String>)> = None;
    let mut edges: Option<(usize, Vec<(String, String)>)> = None;
    let mut ring: Option<(usize, Vec<String>)> = None;
    let mut q_expr: Option<(usize, String)> = None;
    let mut t_exprs: Vec<(usize, usize, String)> = Vec::new();
    let mut generic = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (key, body) = l.split_once(':').ok_or_else(|| Error::config(line, format!("expected `key: value`, got `{l}`")))?;
        let key = key.trim();
        let dup = || Error::config(line, format!("duplicate `{key}:`"));
        match key {
            "vertices" => {
                if vertices.is_some() {
                    return Err(dup());
                }
                vertices = Some((line, parse_list(body, line)?));
            }
            "edges" => {
                if edges.is_some() {
                    return Err(dup());
                }
                edges = Some((line, parse_edges(body, line)?));
            }
            "ring" => {
                if ring.is_some() {
                    return Err(dup());
                }
                ring = Some((line, parse_list(body, line)?));
            }
            "q" => {
                if q_expr.is_some() {
                    return Err(dup());
                }
                q_expr = Some((line, body.trim().to_string()));
            }
            "assume_generic" => {
                generic = match body.trim() {
                    "true" => true,
                    "false" => false,
                    other => return Err(Error::config(line, format!("expected true or false, got `{other}`"))),
                };
            }
            _ => {
                let idx = key
                    .strip_prefix("t[")
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::config(line, format!("unknown key `{key}`")))?;
                if t_exprs.iter().any(|(_, i, _)| *i == idx) {
                    return Err(dup());
                }
                t_exprs.push((line, idx, body.trim().to_string()));
            }
        }
    }
    let (vline, vertices) = vertices.ok_or_else(|| Error::config(1, "missing `vertices:`"))?;
    if vertices.is_empty() || vertices.iter().any(|v| v.is_empty()) {
        return Err(Error::config(vline, "vertex names must be nonempty"));
    }
    for (k, v) in vertices.iter().enumerate() {
        if vertices[..k].contains(v) {
            return Err(Error::config(vline, format!("duplicate vertex `{v}`")));
        }
    }
    let (eline, raw_edges) = edges.unwrap_or((vline, Vec::new()));
    let (rline, names) = ring.ok_or_else(|| Error::config(1, "missing `ring:`"))?;
    let ring = ParamRing::new(&names).map_err(|e| Error::config(rline, e.to_string()))?;
    let index = |name: &str| vertices.iter().position(|v| v == name).ok_or_else(|| Error::config(eline, format!("unknown vertex `{name}`")));
    let edge_list = raw_edges.iter().map(|(s, d)| Ok(Edge { src: index(s)?, dst: index(d)? })).collect::<Result<Vec<_>>>()?;
    let expr = |text: &str, line: usize| -> Result<ParamScalar> {
        ring.parse_at(text, line).map_err(|e| match e {
            Error::Parse { message, column, .. } => Error::config(line, format!("column {column}: {message}")),
            other => Error::config(line, other.to_string()),
        })
    };
    let q = match &q_expr {
        Some((line, text)) => expr(text, *line)?,
        None => ring.var("q").map_err(|_| Error::config(rline, "no `q:` given and no parameter named `q`"))?,
    };
    if let Some((line, idx, _)) = t_exprs.iter().find(|(_, i, _)| *i == 0 || *i > edge_list.len()) {
        return Err(Error::config(*line, format!("edge index {idx} out of range 1..={}", edge_list.len())));
    }
    let mut t = Vec::with_capacity(edge_list.len());
    for k in 1..=edge_list.len() {
        let value = match t_exprs.iter().find(|(_, i, _)| *i == k) {
            Some((line, _, text)) => expr(text, *line)?,
            None => ring
                .var(&format!("t{k}"))
                .or_else(|_| ring.var("t"))
                .map_err(|_| Error::config(eline, format!("no `t[{k}]:` given and no parameter `t{k}` or `t`")))?,
        };
        t.push(value);
    }
    let symbols = ring.names().iter().map(|n| (n.clone(), sym(&ring, n))).collect();
    let mut quiver = Quiver::new(vertices, edge_list, q, t).map_err(|e| Error::config(eline, e.to_string()))?.with_symbols(symbols);
    if generic {
        quiver = quiver.assert_generic();
    }
    Ok(QuiverConfig { quiver, ring })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kronecker_with_defaults() {
        let text = "vertices: [i, j]\nedges: [[i, j], [i, j]]\nring: [q, t1, t2]\n";
        let cfg = parse_quiver_config(text).unwrap();
        assert_eq!(cfg.quiver.arrows(0, 1), 2);
        assert_eq!(cfg.quiver.edge_params()[1], sym(&cfg.ring, "t2"));
    }

    #[test]
    fn specialised_parameters() {
        let text = "vertices: [i, j]\nedges: [[i, j]]\nring: [s]\nq: s^2\nt[1]: s\nassume_generic: true\n";
        let cfg = parse_quiver_config(text).unwrap();
        let s = sym(&cfg.ring, "s");
        assert_eq!(cfg.quiver.q(), &(s.clone() * s));
        assert!(cfg.quiver.generic_asserted());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("vertices: [i]\nedges: [[i, k]]\nring: [q, t]\n", 2),
            ("vertices: [i]\nring: [q]\nq: (q\n", 3),
            ("vertices: [i]\nedges: [[i, i]]\nring: [q]\n", 2),
            ("vertices: [i]\nring: [q]\nbogus: 1\n", 3),
            ("vertices: [i]\nedges: [[i, i]]\nring: [q, t]\nt[2]: t\n", 4),
        ];
        for (text, expect) in cases {
            match parse_quiver_config(text) {
                Err(Error::Config { line, .. }) => assert_eq!(line, expect, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
