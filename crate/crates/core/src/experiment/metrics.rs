//! Per-instance metrics, computed lazily and cached. Every metric is the
//! output of a validator, an exact solver, an oracle or a plain graph count;
//! [`source`] names which.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value as Json;

use super::expr::Value;
use super::family::{Instance, Object};
use super::ExperimentSpec;
use crate::arrangement::{edge_separation, span, vertex_separation, LinearArrangement};
use crate::decomposition::{
    branch_to_carving, carving_by_components, carving_to_branch,
    caterpillar_carving_from_arrangement, random_carving, restricted_partition, validate_branch,
    validate_carving, validate_restricted_partition, validate_tree_decomposition,
    CarvingDecomposition, RestrictedPartition, Tree,
};
use crate::drawing::{crossing_graph, planarize_drawing_full, x_order, Drawing};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle;
use crate::planarization::Planarization;
use crate::planarize::{
    carving_guided_with, clustered_carving_with, convex_lift_with, cr_pair_k3n, default_z,
    inversions, zarankiewicz_k3n, ClusterStats, PlanarizationReport, Witness,
};
use crate::solver::Solver;

/// The validator, solver or count a metric is read from; `None` for
/// unknown names.
pub fn source(metric: &str) -> Option<&'static str> {
    Some(match metric {
        "vertices" | "edges" | "max_degree" => "graph",
        "cr_pair" => "cr_pair_k3n",
        "cutwidth" => "exact_cutwidth",
        "pathwidth" => "exact_pathwidth",
        "bandwidth" => "exact_bandwidth",
        "treewidth" => "exact_treewidth",
        "treedepth" => "exact_treedepth",
        "carving_width" => "exact_carving_width",
        "cutwidth_witness" => "exact_cutwidth+edge_separation",
        "pathwidth_witness" => "exact_pathwidth+vertex_separation",
        "bandwidth_witness" => "exact_bandwidth+span",
        "treewidth_witness" => "exact_treewidth+validate_tree_decomposition",
        "treedepth_witness" => "exact_treedepth+validate_elimination_forest",
        "carving_witness" => "exact_carving_width+validate_carving",
        "cutwidth_oracle" => "oracle_cutwidth",
        "pathwidth_oracle" => "oracle_pathwidth",
        "bandwidth_oracle" => "oracle_bandwidth",
        "treewidth_oracle" => "oracle_elimination_orderings",
        "treedepth_oracle" => "oracle_treedepth",
        "esep_input" => "edge_separation",
        "vsep_input" => "vertex_separation",
        "span_input" => "span",
        "caterpillar_width" => "caterpillar_carving_from_arrangement+validate_carving",
        "vsep_le_esep" => "vertex_separation+edge_separation",
        "crossings" | "planar_vertices" => "planarization_check",
        "drawing_crossings" => "crossing_graph",
        "planar_ok" => "planarity_test+contract",
        "claimed_width" => "planarizer_claim",
        "validated_width" => "edge_separation|validate_carving",
        "esep_planar" => "edge_separation",
        "vsep_planar" => "vertex_separation",
        "span_planar" => "span",
        "treewidth_planar" => "exact_treewidth",
        "pathwidth_planar" => "exact_pathwidth",
        "cutwidth_planar" => "exact_cutwidth",
        "crossing_density" => "crossing_graph+density",
        "carving_input_width" => "validate_carving",
        "branch_width_converted" => "carving_to_branch+validate_branch",
        "carving_width_reconverted" => "branch_to_carving+validate_carving",
        "z" => "default_z",
        "clusters" | "max_cluster_wires" => "clustered_carving",
        "routings_ok" => "inversions",
        "tree_nodes" => "tree",
        "blocks" => "restricted_partition",
        "partition_valid" => "validate_restricted_partition",
        _ => return None,
    })
}

struct Planarized {
    report: PlanarizationReport,
    drawing: Option<Drawing>,
    clusters: Vec<ClusterStats>,
}

/// Lazily evaluated metrics of one instance.
pub struct RowContext<'a> {
    spec: &'a ExperimentSpec,
    inst: &'a Instance,
    solver: &'a Solver,
    seed_offset: u64,
    cache: BTreeMap<String, Value>,
    arrangement: Option<LinearArrangement>,
    carving: Option<CarvingDecomposition>,
    planarized: Option<Planarized>,
    partition: Option<RestrictedPartition>,
}

fn int(v: usize) -> Value {
    Value::int(v as i64)
}

impl<'a> RowContext<'a> {
    pub fn new(
        spec: &'a ExperimentSpec,
        inst: &'a Instance,
        solver: &'a Solver,
        seed_offset: u64,
    ) -> Self {
        Self {
            spec,
            inst,
            solver,
            seed_offset,
            cache: BTreeMap::new(),
            arrangement: None,
            carving: None,
            planarized: None,
            partition: None,
        }
    }

    /// Metrics evaluated so far, by name.
    pub fn evaluated(&self) -> BTreeMap<String, Json> {
        self.cache
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect()
    }

    /// A parameter of the instance, or a metric.
    pub fn lookup(&mut self, name: &str) -> Result<Value> {
        if let Some(p) = self.inst.params.get(name) {
            return Value::from_json(p)
                .ok_or_else(|| Error::invalid(format!("parameter {name} is not a number")));
        }
        if let Some(v) = self.cache.get(name) {
            return Ok(v.clone());
        }
        let v = self.compute(name)?;
        self.cache.insert(name.to_string(), v.clone());
        Ok(v)
    }

    fn graph(&self) -> Result<&'a Graph> {
        match &self.inst.object {
            Object::Graph(g) => Ok(g),
            Object::Tree(_) => Err(Error::invalid("metric needs a graph instance")),
        }
    }

    fn tree(&self) -> Result<&'a Tree> {
        match &self.inst.object {
            Object::Tree(t) => Ok(t),
            Object::Graph(_) => Err(Error::invalid("metric needs a tree instance")),
        }
    }

    fn param_usize(&self, name: &str) -> Option<usize> {
        self.inst
            .params
            .get(name)
            .and_then(Json::as_u64)
            .map(|v| v as usize)
    }

    fn input_arrangement(&mut self) -> Result<&LinearArrangement> {
        if self.arrangement.is_none() {
            let g = self.graph()?;
            let a = match self.spec.arrangement.as_deref().unwrap_or("identity") {
                "identity" => LinearArrangement::identity(g.n()),
                "fold" => LinearArrangement::fold(g.n()),
                "cutwidth" => self.solver.cutwidth(g)?.1,
                "pathwidth" => self.solver.pathwidth(g)?.1,
                "bandwidth" => self.solver.bandwidth(g)?.1,
                other => return Err(Error::invalid(format!("unknown arrangement {other}"))),
            };
            self.arrangement = Some(a);
        }
        Ok(self.arrangement.as_ref().expect("set above"))
    }

    fn input_carving(&mut self) -> Result<&CarvingDecomposition> {
        if self.carving.is_none() {
            let g = self.graph()?;
            let cd = match self.spec.carving.as_deref().unwrap_or("exact") {
                "exact" => self.solver.carving_width(g)?.1,
                "components" => carving_by_components(g, |h| Ok(self.solver.carving_width(h)?.1))?,
                "caterpillar" => {
                    let a = self.input_arrangement()?.clone();
                    caterpillar_carving_from_arrangement(g, &a)?
                }
                "random" => {
                    let seed = self.param_usize("carving_seed").unwrap_or(0) as u64;
                    random_carving(g, seed.wrapping_add(self.seed_offset))
                }
                other => return Err(Error::invalid(format!("unknown carving {other}"))),
            };
            self.carving = Some(cd);
        }
        Ok(self.carving.as_ref().expect("set above"))
    }

    fn z(&mut self) -> Result<usize> {
        if let Some(z) = self.param_usize("z").or(self.spec.z) {
            return Ok(z);
        }
        let g = self.graph()?;
        let cd = self.input_carving()?;
        Ok(default_z(validate_carving(g, cd)?))
    }

    fn planarized(&mut self) -> Result<&Planarized> {
        if self.planarized.is_none() {
            let g = self.graph()?;
            let exec = self.solver.exec;
            let p = match self.spec.strategy.as_str() {
                "zarankiewicz" => {
                    let n = self
                        .param_usize("n")
                        .ok_or_else(|| Error::invalid("zarankiewicz strategy needs parameter n"))?;
                    let d = zarankiewicz_k3n(n)?;
                    if d.graph() != g {
                        return Err(Error::invalid(
                            "zarankiewicz strategy needs the k3n generator",
                        ));
                    }
                    let (planarization, pd) = planarize_drawing_full(&d, exec)?;
                    let witness = x_order(&pd)?;
                    let w = edge_separation(&planarization.planar, &witness)?;
                    let report = PlanarizationReport {
                        strategy: "zarankiewicz".into(),
                        crossings_added: planarization.crossings(),
                        planarization,
                        witness: Witness::Arrangement(witness),
                        claimed_width: w,
                        validated_width: w,
                        routings: Vec::new(),
                    };
                    Planarized {
                        report,
                        drawing: Some(d),
                        clusters: Vec::new(),
                    }
                }
                "convex" => {
                    let a = self.input_arrangement()?.clone();
                    let (d, report) = convex_lift_with(g, &a, exec)?;
                    Planarized {
                        report,
                        drawing: Some(d),
                        clusters: Vec::new(),
                    }
                }
                "carving" => {
                    let cd = self.input_carving()?.clone();
                    let report = carving_guided_with(g, &cd, exec)?;
                    Planarized {
                        report,
                        drawing: None,
                        clusters: Vec::new(),
                    }
                }
                "clustered" => {
                    let z = self.z()?;
                    let cd = self.input_carving()?.clone();
                    let (report, clusters) = clustered_carving_with(g, &cd, z, exec)?;
                    Planarized {
                        report,
                        drawing: None,
                        clusters,
                    }
                }
                "none" => return Err(Error::invalid("metric needs a planarization strategy")),
                other => return Err(Error::invalid(format!("unknown strategy {other}"))),
            };
            p.report.planarization.check()?;
            self.planarized = Some(p);
        }
        Ok(self.planarized.as_ref().expect("set above"))
    }

    fn planarization(&mut self) -> Result<&Planarization> {
        Ok(&self.planarized()?.report.planarization)
    }

    fn planar_witness(&mut self) -> Result<LinearArrangement> {
        self.planarized()?
            .report
            .witness_arrangement()
            .cloned()
            .ok_or_else(|| Error::invalid("strategy has no arrangement witness"))
    }

    fn drawing(&mut self) -> Result<&Drawing> {
        self.planarized()?
            .drawing
            .as_ref()
            .ok_or_else(|| Error::invalid("strategy has no drawing"))
    }

    fn partition(&mut self) -> Result<&RestrictedPartition> {
        if self.partition.is_none() {
            let z = self
                .param_usize("z")
                .or(self.spec.z)
                .ok_or_else(|| Error::invalid("restricted partition needs z"))?;
            self.partition = Some(restricted_partition(self.tree()?, z)?);
        }
        Ok(self.partition.as_ref().expect("set above"))
    }

    fn compute(&mut self, name: &str) -> Result<Value> {
        let s = self.solver;
        Ok(match name {
            "vertices" => int(self.graph()?.n()),
            "edges" => int(self.graph()?.m()),
            "max_degree" => int(self.graph()?.max_degree()),
            "cr_pair" => {
                int(cr_pair_k3n(self.param_usize("n").ok_or_else(|| {
                    Error::invalid("cr_pair needs parameter n")
                })?))
            }
            "cutwidth" => int(s.cutwidth(self.graph()?)?.0),
            "pathwidth" => int(s.pathwidth(self.graph()?)?.0),
            "bandwidth" => int(s.bandwidth(self.graph()?)?.0),
            "treewidth" => int(s.treewidth(self.graph()?)?.0),
            "treedepth" => int(s.treedepth(self.graph()?)?.0),
            "carving_width" => int(s.carving_width(self.graph()?)?.0),
            "cutwidth_witness" => {
                let g = self.graph()?;
                int(edge_separation(g, &s.cutwidth(g)?.1)?)
            }
            "pathwidth_witness" => {
                let g = self.graph()?;
                int(vertex_separation(g, &s.pathwidth(g)?.1)?)
            }
            "bandwidth_witness" => {
                let g = self.graph()?;
                int(span(g, &s.bandwidth(g)?.1)?)
            }
            "treewidth_witness" => {
                let g = self.graph()?;
                int(validate_tree_decomposition(g, &s.treewidth(g)?.1)?)
            }
            "treedepth_witness" => {
                let g = self.graph()?;
                int(s.treedepth(g)?.1.validate(g)?)
            }
            "carving_witness" => {
                let g = self.graph()?;
                int(validate_carving(g, &s.carving_width(g)?.1)?)
            }
            "cutwidth_oracle" => int(oracle::cutwidth(self.graph()?)?),
            "pathwidth_oracle" => int(oracle::pathwidth(self.graph()?)?),
            "bandwidth_oracle" => int(oracle::bandwidth(self.graph()?)?),
            "treewidth_oracle" => int(oracle::treewidth_by_orderings(self.graph()?)?),
            "treedepth_oracle" => int(oracle::treedepth(self.graph()?)?),
            "esep_input" => {
                let a = self.input_arrangement()?.clone();
                int(edge_separation(self.graph()?, &a)?)
            }
            "vsep_input" => {
                let a = self.input_arrangement()?.clone();
                int(vertex_separation(self.graph()?, &a)?)
            }
            "span_input" => {
                let a = self.input_arrangement()?.clone();
                int(span(self.graph()?, &a)?)
            }
            "caterpillar_width" => {
                let a = self.input_arrangement()?.clone();
                let g = self.graph()?;
                int(validate_carving(
                    g,
                    &caterpillar_carving_from_arrangement(g, &a)?,
                )?)
            }
            "vsep_le_esep" => {
                let g = self.graph()?;
                let a = self.input_arrangement()?.clone();
                let mut ok = vertex_separation(g, &a)? <= edge_separation(g, &a)?;
                if self.spec.strategy != "none" {
                    if let Ok(w) = self.planar_witness() {
                        let planar = &self.planarization()?.planar;
                        ok &= vertex_separation(planar, &w)? <= edge_separation(planar, &w)?;
                    }
                }
                Value::Bool(ok)
            }
            "crossings" => int(self.planarization()?.crossings()),
            "planar_vertices" => int(self.planarization()?.planar.n()),
            "drawing_crossings" => int(crossing_graph(self.drawing()?)?.m()),
            "planar_ok" => {
                let g = self.graph()?;
                let p = self.planarization()?;
                Value::Bool(p.is_planar() && p.contract()? == *g)
            }
            "claimed_width" => int(self.planarized()?.report.claimed_width),
            "validated_width" => {
                let r = &self.planarized()?.report;
                let planar = &r.planarization.planar;
                int(match &r.witness {
                    Witness::Arrangement(a) => edge_separation(planar, a)?,
                    Witness::Carving(cd) => validate_carving(planar, cd)?,
                })
            }
            "esep_planar" => {
                let w = self.planar_witness()?;
                int(edge_separation(&self.planarization()?.planar, &w)?)
            }
            "vsep_planar" => {
                let w = self.planar_witness()?;
                int(vertex_separation(&self.planarization()?.planar, &w)?)
            }
            "span_planar" => {
                let w = self.planar_witness()?;
                int(span(&self.planarization()?.planar, &w)?)
            }
            "treewidth_planar" => int(s.treewidth(&self.planarization()?.planar)?.0),
            "pathwidth_planar" => int(s.pathwidth(&self.planarization()?.planar)?.0),
            "cutwidth_planar" => int(s.cutwidth(&self.planarization()?.planar)?.0),
            "crossing_density" => Value::Num(crossing_graph(self.drawing()?)?.density()?),
            "carving_input_width" => {
                let cd = self.input_carving()?.clone();
                int(validate_carving(self.graph()?, &cd)?)
            }
            "branch_width_converted" => {
                let cd = self.input_carving()?.clone();
                let g = self.graph()?;
                int(validate_branch(g, &carving_to_branch(g, &cd)?)?)
            }
            "carving_width_reconverted" => {
                let cd = self.input_carving()?.clone();
                let g = self.graph()?;
                let bd = carving_to_branch(g, &cd)?;
                int(validate_carving(g, &branch_to_carving(g, &bd)?)?)
            }
            "z" => int(self.z()?),
            "clusters" => int(self.planarized()?.clusters.len()),
            "max_cluster_wires" => int(self
                .planarized()?
                .clusters
                .iter()
                .map(|c| c.wires)
                .max()
                .unwrap_or(0)),
            "routings_ok" => {
                let ok = self.planarized()?.report.routings.iter().all(|r| {
                    r.apply() == r.exit_order
                        && r.transpositions.len() == inversions(&r.entry_order, &r.exit_order)
                });
                Value::Bool(ok)
            }
            "tree_nodes" => int(self.tree()?.len()),
            "blocks" => int(self.partition()?.blocks.len()),
            "partition_valid" => {
                let p = self.partition()?.clone();
                Value::Bool(validate_restricted_partition(self.tree()?, &p).is_ok())
            }
            other => return Err(Error::invalid(format!("unknown metric {other}"))),
        })
    }
}

/// Sources read by an expression's variables, skipping parameters.
pub fn sources_of(vars: &[String]) -> Vec<String> {
    let set: BTreeSet<&str> = vars.iter().filter_map(|v| source(v)).collect();
    set.into_iter().map(String::from).collect()
}
