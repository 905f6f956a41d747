//! `planarwidth` command line. JSON on stdout, diagnostics on stderr.
//! Exit status: 0 success, 1 failed check or computation, 2 usage error.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use planarwidth::arrangement::{edge_separation, span, vertex_separation, LinearArrangement};
use planarwidth::decomposition::{
    carving_by_components, caterpillar_carving_from_arrangement, random_carving, validate_branch,
    validate_carving, validate_tree_decomposition, BranchDecomposition, CarvingDecomposition,
    EliminationForest, TreeDecomposition,
};
use planarwidth::drawing::{planarize_drawing_full, Drawing};
use planarwidth::experiment::{
    family, load_dir, load_spec, run_experiment, ExperimentReport, RunOptions,
};
use planarwidth::planarization::Planarization;
use planarwidth::planarize::{
    carving_guided_with, clustered_carving_with, convex_lift_with, default_z, zarankiewicz_k3n,
    PlanarizationReport,
};
use planarwidth::svg::{export_carving_svg, export_svg, SvgOptions};
use planarwidth::{parse_graph, Execution, Graph, Solver, SolverLimits, VertexKind};
use serde_json::{json, Value as Json};

#[derive(Parser)]
#[command(
    name = "planarwidth",
    version,
    about = "Planarize graphs while controlling width parameters"
)]
struct Cli {
    /// Run without worker threads.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph: `gen k3n 5`, `gen circulant 12 1,2,3`, `gen random_connected 10 5 --seed 3`.
    Gen {
        generator: String,
        args: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Edge-list text instead of JSON.
        #[arg(long)]
        edge_list: bool,
    },
    /// Planarize a graph and print the report.
    Planarize(PlanarizeArgs),
    /// Compute a width parameter of a graph, planarization or report.
    Width(WidthArgs),
    /// Validate a decomposition against a graph.
    Validate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Decomposition JSON.
        #[arg(long)]
        decomposition: PathBuf,
        /// Graph file; stdin when absent or `-`.
        input: Option<PathBuf>,
    },
    /// SVG of a drawing, or of the Zarankiewicz drawing of K3,n.
    Svg {
        /// Drawing JSON; stdin when absent or `-`.
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        k3n: Option<usize>,
        /// Draw the planarization, with crossings as dummy vertices.
        #[arg(long)]
        planarized: bool,
    },
    /// Run experiment specs; prints JSON lines.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
}

#[derive(Subcommand)]
enum ExperimentAction {
    Run {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    RunAll {
        dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Zarankiewicz,
    Convex,
    Carving,
    Clustered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Identity,
    Fold,
    Cutwidth,
    Pathwidth,
    Bandwidth,
}

#[derive(Clone, Copy, ValueEnum)]
enum CarvingSource {
    Exact,
    Components,
    Caterpillar,
    Random,
}

#[derive(Args)]
struct PlanarizeArgs {
    #[arg(long, value_enum)]
    strategy: Strategy,
    /// Size of K3,n for the zarankiewicz strategy.
    #[arg(long)]
    n: Option<usize>,
    /// Cluster order for the clustered strategy.
    #[arg(long)]
    z: Option<usize>,
    /// Input arrangement for the convex strategy (and caterpillar carvings).
    #[arg(long, value_enum, default_value = "identity")]
    arrangement: Order,
    /// Input carving for the carving strategies.
    #[arg(long, value_enum, default_value = "exact")]
    carving: CarvingSource,
    /// Seed of a random carving.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write an SVG here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Graph file; stdin when absent or `-`. Not read by the zarankiewicz strategy.
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Param {
    Cutwidth,
    Pathwidth,
    Bandwidth,
    Treewidth,
    Treedepth,
    Carvingwidth,
    Crossings,
}

#[derive(Args)]
struct WidthArgs {
    #[arg(long, value_enum)]
    param: Param,
    /// Use the exact solver.
    #[arg(long)]
    exact: bool,
    /// Evaluate this arrangement (comma-separated vertex order) instead.
    #[arg(long, conflicts_with = "exact")]
    order: Option<String>,
    /// Graph, planarization or report file; stdin when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tree,
    Branch,
    Carving,
}

/// Exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Exit with status 1 after printing the output.
struct Failed;

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| usage(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            Ok(s)
        }
    }
}

/// What a graph argument can hold.
enum Input {
    Graph(Graph),
    Planarization(Planarization),
    Report(Box<PlanarizationReport>),
}

impl Input {
    fn graph(&self) -> &Graph {
        match self {
            Input::Graph(g) => g,
            Input::Planarization(p) => &p.planar,
            Input::Report(r) => &r.planarization.planar,
        }
    }
}

fn parse_input(text: &str) -> anyhow::Result<Input> {
    let trimmed = text.trim_start();
    if !trimmed.starts_with('{') {
        return parse_graph(text)
            .map(Input::Graph)
            .map_err(|e| usage(format!("input is neither JSON nor an edge list: {e}")));
    }
    let v: Json = serde_json::from_str(text).map_err(|e| usage(format!("invalid JSON: {e}")))?;
    let bad = |e: serde_json::Error| usage(format!("invalid input: {e}"));
    if v.get("crossings_added").is_some() {
        Ok(Input::Report(Box::new(
            serde_json::from_value(v).map_err(bad)?,
        )))
    } else if v.get("chains").is_some() {
        Ok(Input::Planarization(
            serde_json::from_value(v).map_err(bad)?,
        ))
    } else {
        Ok(Input::Graph(serde_json::from_value(v).map_err(bad)?))
    }
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

fn exec_of(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn gen(generator: &str, args: &[String], seed: Option<u64>, edge_list: bool) -> anyhow::Result<()> {
    let names: &[&str] = match generator {
        "k3n" | "complete" | "path" | "cycle" => &["n"],
        "complete_bipartite" => &["a", "b"],
        "circulant" => &["n", "offsets"],
        "star" | "wheel" => &["k"],
        "hypercube" => &["d"],
        "petersen" => &[],
        "disjoint_cliques" => &["k", "s"],
        "random_connected" => &["n", "extra"],
        "random_gnp" => &["n", "num", "den"],
        other => {
            return Err(usage(format!(
                "unknown generator {other}; expected one of k3n, complete_bipartite, complete, circulant, path, \
                 cycle, star, wheel, hypercube, petersen, disjoint_cliques, random_connected, random_gnp"
            )))
        }
    };
    if args.len() != names.len() {
        return Err(usage(format!(
            "{generator} takes arguments: {}",
            names.join(" ")
        )));
    }
    let mut params = BTreeMap::new();
    for (name, raw) in names.iter().zip(args) {
        let value: Json = if *name == "offsets" {
            raw.split(',')
                .map(|x| x.trim().parse::<u64>().map(Json::from))
                .collect::<Result<Vec<_>, _>>()
                .map(Json::from)
                .map_err(|_| {
                    usage(format!(
                        "offsets must be comma-separated integers, got {raw}"
                    ))
                })?
        } else {
            raw.parse::<u64>()
                .map(Json::from)
                .map_err(|_| usage(format!("{name} must be a non-negative integer, got {raw}")))?
        };
        params.insert(name.to_string(), value);
    }
    if generator.starts_with("random") {
        params.insert("seed".into(), seed.unwrap_or(0).into());
    }
    let g = match family::generate(generator, &params).map_err(|e| usage(e.to_string()))? {
        family::Object::Graph(g) => g,
        family::Object::Tree(_) => bail!("generator produced a tree"),
    };
    if edge_list {
        print!("{}", g.to_edge_list());
        Ok(())
    } else {
        print_json(&g)
    }
}

fn arrangement(g: &Graph, order: Order, solver: &Solver) -> anyhow::Result<LinearArrangement> {
    Ok(match order {
        Order::Identity => LinearArrangement::identity(g.n()),
        Order::Fold => LinearArrangement::fold(g.n()),
        Order::Cutwidth => solver.cutwidth(g)?.1,
        Order::Pathwidth => solver.pathwidth(g)?.1,
        Order::Bandwidth => solver.bandwidth(g)?.1,
    })
}

fn carving(g: &Graph, a: &PlanarizeArgs, solver: &Solver) -> anyhow::Result<CarvingDecomposition> {
    Ok(match a.carving {
        CarvingSource::Exact => solver.carving_width(g)?.1,
        CarvingSource::Components => carving_by_components(g, |h| Ok(solver.carving_width(h)?.1))?,
        CarvingSource::Caterpillar => {
            caterpillar_carving_from_arrangement(g, &arrangement(g, a.arrangement, solver)?)?
        }
        CarvingSource::Random => random_carving(g, a.seed),
    })
}

fn planarize(a: &PlanarizeArgs, exec: Execution) -> anyhow::Result<()> {
    let solver = Solver::new(SolverLimits::from_env(), exec);
    let (report, svg, extra) = match a.strategy {
        Strategy::Zarankiewicz => {
            let n =
                a.n.ok_or_else(|| usage("--strategy zarankiewicz needs --n"))?;
            let d = zarankiewicz_k3n(n)?;
            let (planarization, pd) = planarize_drawing_full(&d, exec)?;
            let witness = planarwidth::drawing::x_order(&pd)?;
            let w = edge_separation(&planarization.planar, &witness)?;
            let report = PlanarizationReport {
                strategy: "zarankiewicz".into(),
                crossings_added: planarization.crossings(),
                planarization,
                witness: planarwidth::planarize::Witness::Arrangement(witness),
                claimed_width: w,
                validated_width: w,
                routings: Vec::new(),
            };
            (report, export_svg(&d, &SvgOptions::default()), Json::Null)
        }
        Strategy::Convex => {
            let g = parse_input(&read_input(&a.input)?)?.graph().clone();
            let order = arrangement(&g, a.arrangement, &solver)?;
            let (d, report) = convex_lift_with(&g, &order, exec)?;
            (report, export_svg(&d, &SvgOptions::default()), Json::Null)
        }
        Strategy::Carving | Strategy::Clustered => {
            let g = parse_input(&read_input(&a.input)?)?.graph().clone();
            let cd = carving(&g, a, &solver)?;
            let svg = export_carving_svg(&g, &cd, &SvgOptions::default())?;
            if let Strategy::Carving = a.strategy {
                (carving_guided_with(&g, &cd, exec)?, svg, Json::Null)
            } else {
                let z = match a.z {
                    Some(z) => z,
                    None => default_z(validate_carving(&g, &cd)?),
                };
                let (report, clusters) = clustered_carving_with(&g, &cd, z, exec)?;
                (report, svg, json!({"z": z, "clusters": clusters}))
            }
        }
    };
    if let Some(path) = &a.svg {
        std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    }
    if extra.is_null() {
        print_json(&report)
    } else {
        let mut v = serde_json::to_value(&report)?;
        v["clustering"] = extra;
        print_json(&v)
    }
}

fn width(a: &WidthArgs, exec: Execution) -> anyhow::Result<()> {
    let name = a
        .param
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    if a.param != Param::Crossings && !a.exact && a.order.is_none() {
        return Err(usage(format!("--param {name} needs --exact or --order")));
    }
    let input = parse_input(&read_input(&a.input)?)?;
    let g = input.graph();
    let solver = Solver::new(SolverLimits::from_env(), exec);
    let (value, witness): (usize, Json) = if a.param == Param::Crossings {
        let c = match &input {
            Input::Graph(g) => (0..g.n())
                .filter(|&v| matches!(g.kind(v), VertexKind::Dummy { .. }))
                .count(),
            Input::Planarization(p) => p.crossings(),
            Input::Report(r) => r.planarization.crossings(),
        };
        (c, Json::Null)
    } else if let Some(order) = &a.order {
        let order: Vec<usize> = order
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| usage("--order must be comma-separated vertex ids"))?;
        let arr = LinearArrangement::new(order).map_err(|e| usage(e.to_string()))?;
        let v = match a.param {
            Param::Cutwidth => edge_separation(g, &arr),
            Param::Pathwidth => vertex_separation(g, &arr),
            Param::Bandwidth => span(g, &arr),
            _ => {
                return Err(usage(
                    "--order applies to cutwidth, pathwidth and bandwidth",
                ))
            }
        }
        .map_err(|e| usage(e.to_string()))?;
        (v, serde_json::to_value(&arr)?)
    } else if a.exact {
        match a.param {
            Param::Cutwidth => {
                let (w, x) = solver.cutwidth(g)?;
                (w, serde_json::to_value(x)?)
            }
            Param::Pathwidth => {
                let (w, x) = solver.pathwidth(g)?;
                (w, serde_json::to_value(x)?)
            }
            Param::Bandwidth => {
                let (w, x) = solver.bandwidth(g)?;
                (w, serde_json::to_value(x)?)
            }
            Param::Treewidth => {
                let (w, x) = solver.treewidth(g)?;
                (w, serde_json::to_value(x)?)
            }
            Param::Treedepth => {
                let (w, x) = solver.treedepth(g)?;
                (w, serde_json::to_value(x)?)
            }
            Param::Carvingwidth => {
                let (w, x) = solver.carving_width(g)?;
                (w, serde_json::to_value(x)?)
            }
            Param::Crossings => unreachable!("handled above"),
        }
    } else {
        unreachable!("checked above")
    };
    print_json(&json!({"param": name, "value": value, "witness": witness}))
}

fn validate(
    kind: Kind,
    decomposition: &PathBuf,
    input: &Option<PathBuf>,
) -> anyhow::Result<Result<(), Failed>> {
    let g = parse_input(&read_input(input)?)?.graph().clone();
    let text = std::fs::read_to_string(decomposition)
        .map_err(|e| usage(format!("cannot read {}: {e}", decomposition.display())))?;
    let bad = |e: serde_json::Error| usage(format!("invalid decomposition JSON: {e}"));
    let (name, result) = match kind {
        Kind::Tree => {
            // a tree decomposition, or an elimination forest (tree-depth)
            let v: Json = serde_json::from_str(&text).map_err(bad)?;
            if v.get("parent").is_some() {
                let f: EliminationForest = serde_json::from_value(v).map_err(bad)?;
                ("elimination_forest", f.validate(&g))
            } else {
                let td: TreeDecomposition = serde_json::from_value(v).map_err(bad)?;
                ("tree", validate_tree_decomposition(&g, &td))
            }
        }
        Kind::Branch => {
            let bd: BranchDecomposition = serde_json::from_str(&text).map_err(bad)?;
            ("branch", validate_branch(&g, &bd))
        }
        Kind::Carving => {
            let cd: CarvingDecomposition = serde_json::from_str(&text).map_err(bad)?;
            ("carving", validate_carving(&g, &cd))
        }
    };
    match result {
        Ok(w) => {
            print_json(&json!({"kind": name, "valid": true, "width": w}))?;
            Ok(Ok(()))
        }
        Err(e) => {
            print_json(&json!({"kind": name, "valid": false, "error": e.to_string()}))?;
            eprintln!("invalid {name} decomposition: {e}");
            Ok(Err(Failed))
        }
    }
}

fn svg(
    input: &Option<PathBuf>,
    k3n: Option<usize>,
    planarized: bool,
    exec: Execution,
) -> anyhow::Result<()> {
    let d = match k3n {
        Some(n) => zarankiewicz_k3n(n)?,
        None => {
            let text = read_input(input)?;
            serde_json::from_str::<Drawing>(&text)
                .map_err(|e| usage(format!("invalid drawing JSON: {e}")))?
        }
    };
    let d = if planarized {
        planarize_drawing_full(&d, exec)?.1
    } else {
        d
    };
    print!("{}", export_svg(&d, &SvgOptions::default()));
    Ok(())
}

fn emit(report: &ExperimentReport) -> bool {
    print!("{}", report.to_json_lines());
    eprintln!("{}", report.summary());
    report.pass
}

fn experiment(action: &ExperimentAction, exec: Execution) -> anyhow::Result<Result<(), Failed>> {
    let (specs, seed) = match action {
        ExperimentAction::Run { file, seed } => (
            vec![load_spec(file).map_err(|e| usage(e.to_string()))?],
            *seed,
        ),
        ExperimentAction::RunAll { dir, seed } => {
            (load_dir(dir).map_err(|e| usage(e.to_string()))?, *seed)
        }
    };
    let opts = RunOptions {
        exec,
        limits: None,
        seed,
    };
    let mut ok = true;
    for spec in &specs {
        let report =
            run_experiment(spec, &opts).map_err(|e| usage(format!("{}: {e}", spec.name)))?;
        ok &= emit(&report);
    }
    Ok(if ok { Ok(()) } else { Err(Failed) })
}

fn run(cli: &Cli) -> anyhow::Result<Result<(), Failed>> {
    let exec = exec_of(cli);
    match &cli.command {
        Command::Gen {
            generator,
            args,
            seed,
            edge_list,
        } => gen(generator, args, *seed, *edge_list).map(Ok),
        Command::Planarize(a) => planarize(a, exec).map(Ok),
        Command::Width(a) => width(a, exec).map(Ok),
        Command::Validate {
            kind,
            decomposition,
            input,
        } => validate(*kind, decomposition, input),
        Command::Svg {
            input,
            k3n,
            planarized,
        } => svg(input, *k3n, *planarized, exec).map(Ok),
        Command::Experiment { action } => experiment(action, exec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
