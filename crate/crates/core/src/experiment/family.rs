//! Instance families: a generator applied to every combination of its
//! parameter values, or a named corpus.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::decomposition::{random_binary_tree, Tree};
use crate::error::{Error, Result};
use crate::generators::*;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub generator: String,
    /// Each parameter is a `{"range": [lo, hi]}` (inclusive), a list of
    /// values, or a single value. Lists of lists give list-valued params.
    #[serde(default)]
    pub params: BTreeMap<String, ParamSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamSpec {
    Range { range: [i64; 2] },
    List(Vec<Json>),
    Single(Json),
}

impl ParamSpec {
    fn values(&self) -> Vec<Json> {
        match self {
            ParamSpec::Range { range: [lo, hi] } => (*lo..=*hi).map(Json::from).collect(),
            ParamSpec::List(v) => v.clone(),
            ParamSpec::Single(v) => vec![v.clone()],
        }
    }
}

#[derive(Clone, Debug)]
pub enum Object {
    Graph(Graph),
    Tree(Tree),
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub params: BTreeMap<String, Json>,
    pub object: Object,
}

/// Every parameter combination, first key (in name order) slowest.
fn combinations(params: &BTreeMap<String, ParamSpec>) -> Vec<BTreeMap<String, Json>> {
    let mut out = vec![BTreeMap::new()];
    for (k, spec) in params {
        let vals = spec.values();
        out = out
            .into_iter()
            .flat_map(|base| {
                vals.iter().map(move |v| {
                    let mut m = base.clone();
                    m.insert(k.clone(), v.clone());
                    m
                })
            })
            .collect();
    }
    out
}

fn int(params: &BTreeMap<String, Json>, key: &str) -> Result<usize> {
    params
        .get(key)
        .and_then(Json::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::invalid(format!("parameter {key} must be a non-negative integer")))
}

fn list(params: &BTreeMap<String, Json>, key: &str) -> Result<Vec<usize>> {
    params
        .get(key)
        .and_then(Json::as_array)
        .and_then(|a| a.iter().map(|x| x.as_u64().map(|v| v as usize)).collect())
        .ok_or_else(|| Error::invalid(format!("parameter {key} must be a list of integers")))
}

fn label(generator: &str, params: &BTreeMap<String, Json>) -> String {
    let inner: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{generator}({})", inner.join(","))
}

pub fn instances(spec: &FamilySpec) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for params in combinations(&spec.params) {
        if spec.generator == "corpus" {
            let name = params
                .get("name")
                .and_then(Json::as_str)
                .ok_or_else(|| Error::invalid("corpus needs a name"))?;
            for (inst, g) in corpus(name)? {
                out.push(Instance {
                    name: inst,
                    params: params.clone(),
                    object: Object::Graph(g),
                });
            }
            continue;
        }
        let object = generate(&spec.generator, &params)?;
        out.push(Instance {
            name: label(&spec.generator, &params),
            params,
            object,
        });
    }
    Ok(out)
}

pub fn generate(generator: &str, p: &BTreeMap<String, Json>) -> Result<Object> {
    let g = match generator {
        "k3n" => k3n(int(p, "n")?)?,
        "complete_bipartite" => complete_bipartite(int(p, "a")?, int(p, "b")?)?,
        "complete" => complete(int(p, "n")?)?,
        "circulant" => circulant(int(p, "n")?, &list(p, "offsets")?)?,
        "path" => path(int(p, "n")?)?,
        "cycle" => cycle(int(p, "n")?)?,
        "star" => star(int(p, "k")?)?,
        "wheel" => wheel(int(p, "k")?)?,
        "hypercube" => hypercube(int(p, "d")?)?,
        "petersen" => petersen(),
        "disjoint_cliques" => disjoint_cliques(int(p, "k")?, int(p, "s")?)?,
        "random_connected" => {
            random_connected(int(p, "n")?, int(p, "extra")?, int(p, "seed")? as u64)?
        }
        "random_gnp" => random_gnp(
            int(p, "n")?,
            int(p, "num")? as u32,
            int(p, "den")? as u32,
            int(p, "seed")? as u64,
        )?,
        "binary_tree" => {
            return Ok(Object::Tree(random_binary_tree(
                int(p, "leaves")?,
                int(p, "seed")? as u64,
            )))
        }
        other => return Err(Error::invalid(format!("unknown generator {other}"))),
    };
    Ok(Object::Graph(g))
}

/// Named graph collections shared by several experiments.
///
/// * `mixed`: `K_{3,n}` for n = 2..5, circulants with offsets {1,2} and
///   {1,2,3} up to 14 vertices, and 20 seeded random connected graphs on
///   6..12 vertices.
/// * `bounded_degree`: graphs of maximum degree at most 4 whose convex
///   planarizations stay small enough for exact pathwidth.
/// * `small`: graphs on at most 7 vertices, for brute-force comparisons.
pub fn corpus(name: &str) -> Result<Vec<(String, Graph)>> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    match name {
        "mixed" => {
            for n in 2..=5 {
                out.push((format!("k3n({n})"), k3n(n)?));
            }
            for n in 5..=14 {
                out.push((format!("circulant({n},[1,2])"), circulant(n, &[1, 2])?));
            }
            for n in 7..=14 {
                out.push((format!("circulant({n},[1,2,3])"), circulant(n, &[1, 2, 3])?));
            }
            for i in 0..20u64 {
                let (n, extra, seed) = (6 + (i % 7) as usize, 1 + (i % 6) as usize, 100 + i);
                out.push((
                    format!("random_connected({n},{extra},{seed})"),
                    random_connected(n, extra, seed)?,
                ));
            }
        }
        "bounded_degree" => {
            out.push(("path(8)".into(), path(8)?));
            out.push(("cycle(8)".into(), cycle(8)?));
            out.push(("star(4)".into(), star(4)?));
            out.push(("wheel(4)".into(), wheel(4)?));
            out.push(("hypercube(3)".into(), hypercube(3)?));
            out.push(("k3n(3)".into(), k3n(3)?));
            out.push(("k3n(4)".into(), k3n(4)?));
            out.push(("circulant(8,[1,2])".into(), circulant(8, &[1, 2])?));
            out.push(("circulant(10,[1,2])".into(), circulant(10, &[1, 2])?));
            let mut seed = 200;
            let mut found = 0;
            while found < 6 {
                let n = 7 + found % 3;
                let g = random_connected(n, 2 + found % 3, seed)?;
                if g.max_degree() <= 4 {
                    out.push((format!("random_connected({n},{},{seed})", 2 + found % 3), g));
                    found += 1;
                }
                seed += 1;
            }
        }
        "small" => {
            out.push(("path(7)".into(), path(7)?));
            out.push(("cycle(7)".into(), cycle(7)?));
            out.push(("star(6)".into(), star(6)?));
            out.push(("wheel(6)".into(), wheel(6)?));
            out.push(("complete(6)".into(), complete(6)?));
            out.push(("k3n(3)".into(), k3n(3)?));
            out.push(("k3n(4)".into(), k3n(4)?));
            out.push(("complete_bipartite(2,5)".into(), complete_bipartite(2, 5)?));
            out.push(("circulant(7,[1,2])".into(), circulant(7, &[1, 2])?));
            out.push(("hypercube(2)".into(), hypercube(2)?));
            for i in 0..8u64 {
                let (n, extra, seed) = (5 + (i % 3) as usize, (i % 5) as usize, 300 + i);
                out.push((
                    format!("random_connected({n},{extra},{seed})"),
                    random_connected(n, extra, seed)?,
                ));
            }
        }
        other => return Err(Error::invalid(format!("unknown corpus {other}"))),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists_multiply() {
        let spec: FamilySpec = serde_json::from_str(
            r#"{"generator": "circulant", "params": {"n": {"range": [6, 8]}, "offsets": [[1, 2], [1, 3]]}}"#,
        )
        .unwrap();
        let inst = instances(&spec).unwrap();
        assert_eq!(inst.len(), 6);
        assert_eq!(inst[0].name, "circulant(n=6,offsets=[1,2])");
    }

    #[test]
    fn corpora_sizes() {
        assert_eq!(corpus("mixed").unwrap().len(), 42);
        assert!(corpus("small").unwrap().iter().all(|(_, g)| g.n() <= 7));
        assert!(corpus("bounded_degree")
            .unwrap()
            .iter()
            .all(|(_, g)| g.max_degree() <= 4));
        assert!(corpus("nope").is_err());
    }

    #[test]
    fn empty_range_is_empty() {
        let spec: FamilySpec =
            serde_json::from_str(r#"{"generator": "k3n", "params": {"n": {"range": [3, 2]}}}"#)
                .unwrap();
        assert!(instances(&spec).unwrap().is_empty());
    }
}
