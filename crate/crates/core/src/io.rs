//! `.hg` text format and JSON export.
//!
//! ```text
//! # optional comments
//! k n m
//! v1 v2 ... vk      (m lines, ascending 1-based ids)
//! ```

use std::fs;
use std::path::Path;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub fn to_hg_string(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.k(), h.n(), h.edge_count());
    for e in h.edges() {
        out.push_str(&e.vertices().iter().join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_hg(text: &str) -> Result<Hypergraph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Parse { line: line_no, msg: format!("not a non-negative integer: {tok:?}") })
            })
            .collect::<Result<Vec<_>>>()?;
        let Some((k, n, _)) = header else {
            if nums.len() != 3 {
                return Err(Error::Parse { line: line_no, msg: "header must be \"k n m\"".into() });
            }
            header = Some((nums[0], nums[1], nums[2]));
            continue;
        };
        if nums.len() != k {
            return Err(Error::Parse { line: line_no, msg: format!("expected {k} vertex ids, found {}", nums.len()) });
        }
        if nums.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse { line: line_no, msg: "vertex ids must be strictly ascending".into() });
        }
        if let Some(&v) = nums.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::Parse { line: line_no, msg: format!("vertex {v} outside 1..={n}") });
        }
        edges.push(nums);
    }
    let (k, n, m) = header.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    if edges.len() != m {
        return Err(Error::Parse { line: 0, msg: format!("header declares {m} edges, found {}", edges.len()) });
    }
    Hypergraph::build(n, k, edges)
}

pub fn read_file(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_hg(&fs::read_to_string(path)?)
}

pub fn write_file(h: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_hg_string(h))?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct HypergraphJson {
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphJson {
            k: self.k(),
            n: self.n(),
            edges: self.edges().iter().map(|e| e.vertices().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = HypergraphJson::deserialize(d)?;
        Hypergraph::build(raw.n, raw.k, raw.edges).map_err(serde::de::Error::custom)
    }
}

pub fn to_json(h: &Hypergraph) -> String {
    serde_json::to_string(h).expect("hypergraph serialization is infallible")
}

pub fn from_json(text: &str) -> Result<Hypergraph> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let h = parse_hg("3 4 1\n1 2 3\n").unwrap();
        assert_eq!((h.k(), h.n(), h.edge_count()), (3, 4, 1));
        let h = parse_hg("# nothing here\n3 5 0\n").unwrap();
        assert_eq!((h.n(), h.edge_count()), (5, 0));
        assert!(matches!(parse_hg("3 5 1\n1 2\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_hg("3 5\n").is_err());
        assert!(parse_hg("").is_err());
        assert!(parse_hg("3 5 1\n3 2 1\n").is_err());
        assert!(parse_hg("3 5 1\n1 1 2\n").is_err());
        assert!(parse_hg("3 5 1\n1 2 9\n").is_err());
        assert!(parse_hg("3 5 2\n1 2 3\n").is_err());
        assert!(parse_hg("3 5 1\n1 2 x\n").is_err());
    }

    #[test]
    fn json_shape() {
        let h = Hypergraph::build(4, 3, [vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        assert_eq!(to_json(&h), r#"{"k":3,"n":4,"edges":[[1,2,3],[2,3,4]]}"#);
        assert_eq!(from_json(&to_json(&h)).unwrap(), h);
        assert!(from_json(r#"{"k":3,"n":4,"edges":[[1,2,5]]}"#).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.hg");
        let h = Hypergraph::random(9, 3, 0.3, 5).unwrap();
        write_file(&h, &path).unwrap();
        assert_eq!(read_file(&path).unwrap(), h);
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 3usize..10, k in 2usize..4, p in 0.0f64..1.0, seed: u64) {
            prop_assume!(k <= n);
            let h = Hypergraph::random(n, k, p, seed).unwrap();
            prop_assert_eq!(parse_hg(&to_hg_string(&h)).unwrap(), h.clone());
            prop_assert_eq!(from_json(&to_json(&h)).unwrap(), h);
        }
    }
}
