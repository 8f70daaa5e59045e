use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::{Instance, InstanceError, ScoreMatrix};

const FORMAT_VERSION: i64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    n: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRecord {
    version: i64,
    query: GraphRecord,
    target: GraphRecord,
    scores: Vec<Vec<i64>>,
    delta: i64,
    #[serde(default)]
    nlink: Option<usize>,
    #[serde(default)]
    fixed: Option<Vec<[i64; 2]>>,
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let rec: InstanceRecord = serde_json::from_str(text)?;
    if rec.version != FORMAT_VERSION {
        return Err(InstanceError::Version(rec.version));
    }
    let q_edges: Vec<_> = rec.query.edges.iter().map(|e| (e[0], e[1])).collect();
    let t_edges: Vec<_> = rec.target.edges.iter().map(|e| (e[0], e[1])).collect();
    let (query, target) = Instance::validate_trees(rec.query.n, &q_edges, rec.target.n, &t_edges)?;
    let scores = ScoreMatrix::from_real_rows(&rec.scores)?;
    let mut fixed = Vec::new();
    for [q, t] in rec.fixed.unwrap_or_default() {
        if q < 0 {
            return Err(InstanceError::Fixed(format!("negative query index {q}")));
        }
        let t = match t {
            -1 => None,
            t if t >= 0 => Some(t as usize),
            t => {
                return Err(InstanceError::Fixed(format!(
                    "target index {t} (use -1 for the dummy)"
                )))
            }
        };
        fixed.push((q as usize, t));
    }
    Instance::new(query, target, scores, rec.delta, rec.nlink, fixed)
}

pub fn load_instance(path: &Path) -> Result<Instance, InstanceError> {
    parse_instance(&std::fs::read_to_string(path)?)
}

fn edge_list(edges: &[(usize, usize)]) -> String {
    let items: Vec<String> = edges.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
    format!("[{}]", items.join(","))
}

/// Canonical text form: fixed key order, one score row per line.
pub fn to_canonical_string(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"version\": {FORMAT_VERSION},");
    for (key, tree) in [("query", inst.query()), ("target", inst.target())] {
        let _ = writeln!(
            out,
            "  \"{key}\": {{\"n\": {}, \"edges\": {}}},",
            tree.n(),
            edge_list(tree.edges())
        );
    }
    out.push_str("  \"scores\": [\n");
    let rows = inst.scores().real_rows();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        let sep = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", cells.join(","));
    }
    out.push_str("  ],\n");
    let _ = write!(out, "  \"delta\": {}", inst.delta());
    if let Some(k) = inst.nlink() {
        let _ = write!(out, ",\n  \"nlink\": {k}");
    }
    if !inst.fixed().is_empty() {
        let pairs: Vec<String> = inst
            .fixed()
            .iter()
            .map(|(q, t)| format!("[{q},{}]", t.map_or(-1, |t| t as i64)))
            .collect();
        let _ = write!(out, ",\n  \"fixed\": [{}]", pairs.join(","));
    }
    out.push_str("\n}\n");
    out
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<(), InstanceError> {
    std::fs::write(path, to_canonical_string(inst))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = r#"{
        "version": 1,
        "query": {"n": 2, "edges": [[0, 1]]},
        "target": {"n": 2, "edges": [[1, 0]]},
        "scores": [[3, 7], [4, 2]],
        "delta": 10,
        "nlink": 2,
        "fixed": [[1, -1]]
    }"#;

    #[test]
    fn parses_and_normalizes() {
        let inst = parse_instance(CHAIN).unwrap();
        assert_eq!(inst.n_query(), 2);
        assert_eq!(inst.scores().cols(), 3);
        assert_eq!(inst.target().edges(), &[(0, 1)]);
        assert_eq!(inst.fixed(), &[(1, None)]);
    }

    #[test]
    fn canonical_text_round_trips() {
        let inst = parse_instance(CHAIN).unwrap();
        let text = to_canonical_string(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(to_canonical_string(&back), text);
    }

    #[test]
    fn not_a_tree_is_reported() {
        let bad = CHAIN.replace("\"edges\": [[0, 1]]", "\"edges\": []");
        let err = parse_instance(&bad).unwrap_err();
        assert!(err.to_string().contains("not a tree"), "{err}");
    }

    #[test]
    fn zero_score_is_rejected() {
        let bad = CHAIN.replace("[[3, 7]", "[[0, 7]");
        assert!(matches!(
            parse_instance(&bad),
            Err(InstanceError::Scores(_))
        ));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let bad = CHAIN.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(
            parse_instance(&bad),
            Err(InstanceError::Version(2))
        ));
    }
}
