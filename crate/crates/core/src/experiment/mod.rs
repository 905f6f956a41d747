//! Experiment runner: a family of instances, an optional planarization
//! strategy and a list of checks over per-instance metrics.
//!
//! Row checks are boolean expressions evaluated on each instance. Series
//! checks evaluate an expression on every instance and test the sequence
//! (monotone, constant, eventually true, bounded ratio to a base row, or
//! equal to pinned values). Rows run in parallel and are reported in family
//! order; reports are deterministic.

pub mod expr;
pub mod family;
pub mod metrics;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::limits::SolverLimits;
use crate::par::{self, Execution};
use crate::solver::Solver;
use expr::{Expr, Op, Value};
use family::{instances, FamilySpec, Instance};
use metrics::{source, sources_of, RowContext};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<u32>,
    #[serde(default)]
    pub description: String,
    pub family: FamilySpec,
    /// `zarankiewicz`, `convex`, `carving`, `clustered` or `none`.
    #[serde(default = "no_strategy")]
    pub strategy: String,
    /// Input arrangement: `identity` (default), `fold`, or the witness of
    /// `cutwidth`, `pathwidth` or `bandwidth`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrangement: Option<String>,
    /// Input carving: `exact` (default), `components`, `caterpillar` or `random`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carving: Option<String>,
    /// Cluster or block order; an instance parameter `z` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
    /// Solver limits for this experiment; environment overrides still apply.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<SolverLimits>,
    pub checks: Vec<Check>,
}

fn no_strategy() -> String {
    "none".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    Row {
        name: String,
        expr: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        when: Option<String>,
    },
    Series {
        name: String,
        metric: String,
        test: SeriesTest,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        when: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeriesTest {
    Nondecreasing,
    Constant,
    /// Once true, true for every later row, and true on the last row.
    Eventually,
    /// Every value within `factor` times the value on the first row where
    /// `base` holds, in both directions.
    RatioWithin {
        base: String,
        factor: Json,
    },
    Equals {
        expected: Vec<Json>,
    },
}

impl Check {
    pub fn name(&self) -> &str {
        match self {
            Check::Row { name, .. } | Check::Series { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    /// Validators and solvers the check read.
    pub reads: Vec<String>,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub instance: String,
    pub params: BTreeMap<String, Json>,
    pub metrics: BTreeMap<String, Json>,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<u32>,
    pub rows: Vec<RowReport>,
    pub series: Vec<CheckOutcome>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    /// One line: `name: PASS (rows 11/11, series 1/1)`.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} (rows {}/{}, series {}/{})",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.rows.len() - self.failed_rows(),
            self.rows.len(),
            self.series.iter().filter(|s| s.pass).count(),
            self.series.len()
        )
    }

    /// One JSON object per row, then a summary object.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut obj = serde_json::to_value(row).expect("row serializes");
            obj["experiment"] = self.name.clone().into();
            out.push_str(&obj.to_string());
            out.push('\n');
        }
        let summary = serde_json::json!({
            "experiment": self.name,
            "criterion": self.criterion,
            "summary": {
                "rows": self.rows.len(),
                "failed_rows": self.failed_rows(),
                "series": self.series,
                "pass": self.pass,
            }
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub exec: Execution,
    /// Replaces the spec's limits; `None` keeps them.
    pub limits: Option<SolverLimits>,
    /// Added to every `seed` and `carving_seed` parameter.
    pub seed: Option<u64>,
}

pub fn load_spec(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

/// Specs in a directory, by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<ExperimentSpec>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_spec(p)).collect()
}

struct RowCheck {
    name: String,
    expr: Expr,
    when: Option<Expr>,
    reads: Vec<String>,
}

struct SeriesCheck {
    name: String,
    metric: Expr,
    when: Option<Expr>,
    base: Option<Expr>,
    reads: Vec<String>,
    test: SeriesTest,
}

struct Compiled {
    rows: Vec<RowCheck>,
    series: Vec<SeriesCheck>,
}

fn compile(spec: &ExperimentSpec) -> Result<Compiled> {
    if !matches!(
        spec.strategy.as_str(),
        "zarankiewicz" | "convex" | "carving" | "clustered" | "none"
    ) {
        return Err(Error::invalid(format!(
            "unknown strategy {}",
            spec.strategy
        )));
    }
    let params: Vec<&String> = spec.family.params.keys().collect();
    let known = |exprs: &[&Expr]| -> Result<Vec<String>> {
        let mut vars = Vec::new();
        for e in exprs {
            for v in e.vars() {
                if source(&v).is_none() && !params.contains(&&v) {
                    return Err(Error::invalid(format!("unknown variable {v}")));
                }
                vars.push(v);
            }
        }
        Ok(sources_of(&vars))
    };
    let opt = |s: &Option<String>| s.as_deref().map(expr::parse).transpose();
    let mut c = Compiled {
        rows: Vec::new(),
        series: Vec::new(),
    };
    for check in &spec.checks {
        match check {
            Check::Row {
                name,
                expr: src,
                when,
            } => {
                let e = expr::parse(src)?;
                let w = opt(when)?;
                let reads = known(&[&e])?;
                if let Some(w) = &w {
                    known(&[w])?;
                }
                c.rows.push(RowCheck {
                    name: name.clone(),
                    expr: e,
                    when: w,
                    reads,
                });
            }
            Check::Series {
                name,
                metric,
                test,
                when,
            } => {
                let e = expr::parse(metric)?;
                let w = opt(when)?;
                let base = match test {
                    SeriesTest::RatioWithin { base, .. } => Some(expr::parse(base)?),
                    _ => None,
                };
                let reads = known(&[&e])?;
                for x in w.iter().chain(base.iter()) {
                    known(&[x])?;
                }
                c.series.push(SeriesCheck {
                    name: name.clone(),
                    metric: e,
                    when: w,
                    base,
                    reads,
                    test: test.clone(),
                });
            }
        }
    }
    Ok(c)
}

/// Value of one series check on one row.
#[derive(Clone, Debug)]
struct SeriesPoint {
    instance: String,
    value: std::result::Result<Value, String>,
    is_base: bool,
}

struct RowResult {
    report: RowReport,
    series: Vec<Option<SeriesPoint>>,
}

fn eval(ctx: &mut RowContext, e: &Expr) -> Result<Value> {
    e.eval(&mut |name: &str| ctx.lookup(name))
}

/// `a = 1, b = 2` for the variables of `e`.
fn bindings(ctx: &mut RowContext, e: &Expr) -> String {
    let vars = e.vars();
    vars.iter()
        .map(|v| match ctx.lookup(v) {
            Ok(x) => format!("{v} = {x}"),
            Err(err) => format!("{v}: {err}"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn run_row(
    spec: &ExperimentSpec,
    c: &Compiled,
    inst: &Instance,
    solver: &Solver,
    seed: u64,
) -> RowResult {
    let mut ctx = RowContext::new(spec, inst, solver, seed);
    let mut checks = Vec::new();
    for RowCheck {
        name,
        expr: e,
        when,
        reads,
    } in &c.rows
    {
        let applies = match when {
            Some(w) => eval(&mut ctx, w).and_then(|v| expr::truth(&v)),
            None => Ok(true),
        };
        let (pass, detail) = match applies {
            Ok(false) => continue,
            Err(err) => (false, err.to_string()),
            Ok(true) => match eval(&mut ctx, e).and_then(|v| expr::truth(&v)) {
                Ok(true) => (true, String::new()),
                Ok(false) => (false, bindings(&mut ctx, e)),
                Err(err) => (false, err.to_string()),
            },
        };
        checks.push(CheckOutcome {
            name: name.clone(),
            reads: reads.clone(),
            pass,
            detail,
        });
    }
    let mut series = Vec::new();
    for SeriesCheck {
        metric: e,
        when,
        base,
        ..
    } in &c.series
    {
        let applies = match when {
            Some(w) => eval(&mut ctx, w).and_then(|v| expr::truth(&v)),
            None => Ok(true),
        };
        let point = match applies {
            Ok(false) => None,
            Err(err) => Some(SeriesPoint {
                instance: inst.name.clone(),
                value: Err(err.to_string()),
                is_base: false,
            }),
            Ok(true) => {
                let is_base = match base {
                    Some(b) => eval(&mut ctx, b).and_then(|v| expr::truth(&v)),
                    None => Ok(false),
                };
                let value = eval(&mut ctx, e).map_err(|err| err.to_string());
                Some(match is_base {
                    Ok(is_base) => SeriesPoint {
                        instance: inst.name.clone(),
                        value,
                        is_base,
                    },
                    Err(err) => SeriesPoint {
                        instance: inst.name.clone(),
                        value: Err(err.to_string()),
                        is_base: false,
                    },
                })
            }
        };
        series.push(point);
    }
    let pass = checks.iter().all(|c| c.pass);
    RowResult {
        report: RowReport {
            instance: inst.name.clone(),
            params: inst.params.clone(),
            metrics: ctx.evaluated(),
            checks,
            pass,
        },
        series,
    }
}

fn order(a: &Value, b: &Value) -> Result<Ordering> {
    if expr::truth(&expr::binary(Op::Lt, a.clone(), b.clone())?)? {
        Ok(Ordering::Less)
    } else if expr::truth(&expr::binary(Op::Eq, a.clone(), b.clone())?)? {
        Ok(Ordering::Equal)
    } else {
        Ok(Ordering::Greater)
    }
}

fn judge(test: &SeriesTest, points: &[SeriesPoint]) -> Result<()> {
    let mut values = Vec::with_capacity(points.len());
    for p in points {
        match &p.value {
            Ok(v) => values.push(v.clone()),
            Err(e) => return Err(Error::invalid(format!("{}: {e}", p.instance))),
        }
    }
    let shown = || {
        values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    match test {
        SeriesTest::Nondecreasing => {
            for (i, w) in values.windows(2).enumerate() {
                if order(&w[0], &w[1])? == Ordering::Greater {
                    return Err(Error::invalid(format!(
                        "decreases at {} [{}]",
                        points[i + 1].instance,
                        shown()
                    )));
                }
            }
        }
        SeriesTest::Constant => {
            if let Some(first) = values.first() {
                for (i, v) in values.iter().enumerate() {
                    if order(first, v)? != Ordering::Equal {
                        return Err(Error::invalid(format!(
                            "differs at {} [{}]",
                            points[i].instance,
                            shown()
                        )));
                    }
                }
            }
        }
        SeriesTest::Eventually => {
            let flags = values
                .iter()
                .map(expr::truth)
                .collect::<Result<Vec<bool>>>()?;
            match flags.iter().position(|&f| f) {
                None if !flags.is_empty() => {
                    return Err(Error::invalid(format!("never holds [{}]", shown())))
                }
                Some(i) if !flags[i..].iter().all(|&f| f) => {
                    return Err(Error::invalid(format!(
                        "holds, then fails again [{}]",
                        shown()
                    )))
                }
                _ => {}
            }
        }
        SeriesTest::RatioWithin { factor, .. } => {
            let factor = Value::from_json(factor)
                .ok_or_else(|| Error::invalid("factor must be a number"))?;
            let Some(b) = points.iter().position(|p| p.is_base) else {
                return if values.is_empty() {
                    Ok(())
                } else {
                    Err(Error::invalid("no base row"))
                };
            };
            let base = &values[b];
            let hi = expr::binary(Op::Mul, factor.clone(), base.clone())?;
            for (i, v) in values.iter().enumerate() {
                let lo_ok = order(&expr::binary(Op::Mul, factor.clone(), v.clone())?, base)?
                    != Ordering::Less;
                let hi_ok = order(v, &hi)? != Ordering::Greater;
                if !(lo_ok && hi_ok) {
                    return Err(Error::invalid(format!(
                        "{} is {} against base {} ({}), factor {}",
                        points[i].instance, v, base, points[b].instance, factor
                    )));
                }
            }
        }
        SeriesTest::Equals { expected } => {
            let exp = expected
                .iter()
                .map(|j| {
                    Value::from_json(j).ok_or_else(|| {
                        Error::invalid("expected values must be numbers or booleans")
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let same = exp.len() == values.len()
                && exp
                    .iter()
                    .zip(&values)
                    .all(|(a, b)| order(a, b).is_ok_and(|o| o == Ordering::Equal));
            if !same {
                let want = exp
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(Error::invalid(format!(
                    "got [{}], expected [{want}]",
                    shown()
                )));
            }
        }
    }
    Ok(())
}

/// Fails on an invalid spec (unknown generator, strategy or variable);
/// problems with single instances, such as size limits, fail their rows.
pub fn run_experiment(spec: &ExperimentSpec, opts: &RunOptions) -> Result<ExperimentReport> {
    let compiled = compile(spec)?;
    let mut insts = instances(&spec.family)?;
    let seed = opts.seed.unwrap_or(0);
    if seed != 0 {
        for inst in &mut insts {
            if let Some(s) = inst.params.get("seed").and_then(Json::as_u64) {
                let params = {
                    let mut p = inst.params.clone();
                    p.insert("seed".into(), s.wrapping_add(seed).into());
                    p
                };
                inst.object = family::generate(&spec.family.generator, &params)?;
                inst.params = params;
            }
        }
    }
    let limits = opts
        .limits
        .clone()
        .or_else(|| spec.limits.clone().map(SolverLimits::with_env))
        .unwrap_or_else(SolverLimits::from_env);
    let solver = Solver::new(limits, opts.exec);
    // rows in parallel; each row's solvers stay sequential
    let row_solver = Solver::new(solver.limits.clone(), Execution::Sequential);
    let results = par::map(opts.exec, &insts, |inst| {
        run_row(spec, &compiled, inst, &row_solver, seed)
    });
    let mut series = Vec::new();
    for (k, check) in compiled.series.iter().enumerate() {
        let points: Vec<SeriesPoint> = results.iter().filter_map(|r| r.series[k].clone()).collect();
        let (pass, detail) = match judge(&check.test, &points) {
            Ok(()) => (
                true,
                points
                    .iter()
                    .map(|p| p.value.as_ref().map(|v| v.to_string()).unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join(", "),
            ),
            Err(e) => (false, e.to_string()),
        };
        series.push(CheckOutcome {
            name: check.name.clone(),
            reads: check.reads.clone(),
            pass,
            detail,
        });
    }
    let rows: Vec<RowReport> = results.into_iter().map(|r| r.report).collect();
    let pass = rows.iter().all(|r| r.pass) && series.iter().all(|s| s.pass);
    Ok(ExperimentReport {
        name: spec.name.clone(),
        criterion: spec.criterion,
        rows,
        series,
        pass,
    })
}
