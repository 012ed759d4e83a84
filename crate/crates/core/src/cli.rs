//! Command-line front end.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baselines::{densest_subgraph_peel, kcore_split};
use crate::error::{Error, Result};
use crate::export::{write_hierarchy_json, write_supergraph_dot};
use crate::graph::{build_graph, Graph};
use crate::hierarchy::{build_hierarchy, Hierarchy};
use crate::io::{parse_edge_list, Format};
use crate::labelprop::{propagate, LpParams, DEFAULT_DELTA, DEFAULT_MAX_ITERS};
use crate::metrics::{best_level_modularity, modularity};

#[derive(Debug, Parser)]
#[command(
    name = "hlp",
    version,
    about = "Hierarchical label propagation community detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one method and print per-level statistics.
    Detect(DetectArgs),
    /// Compare modularity of hlp, lp, ds and kcore on one graph.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Hlp,
    Lp,
    Ds,
    Kcore,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Hlp => "hlp",
            Method::Lp => "lp",
            Method::Ds => "ds",
            Method::Kcore => "kcore",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Edgelist,
    Mtx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Json,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Edge list or Matrix Market file.
    pub input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: usize,
    /// Print machine-readable JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Method::Hlp)]
    pub method: Method,
    /// Write the result as a JSON document or DOT supergraph(s).
    #[arg(long, value_enum, requires = "output")]
    pub export: Option<ExportKind>,
    /// Level to export as DOT; all levels when omitted.
    #[arg(long, requires = "export")]
    pub level: Option<usize>,
    /// Export target. For DOT without --level this is a directory that
    /// receives one `level-<t>.dot` per level.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

/// Runs the parsed command, writing reports to `out`, and maps the outcome
/// to a process exit code: 0 success, 1 internal error, 2 bad input.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Detect(args) => cmd_detect(&args, out),
        Command::Eval(args) => cmd_eval(&args, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

impl InputArgs {
    fn params(&self) -> Result<LpParams> {
        LpParams::new(self.max_iters, self.delta, self.seed)
    }

    fn load(&self) -> Result<Graph> {
        let format = match self.format {
            Some(InputFormat::Edgelist) => Format::EdgeList,
            Some(InputFormat::Mtx) => Format::MatrixMarket,
            None => Format::from_path(&self.input),
        };
        let file = File::open(&self.input).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", self.input.display()),
            ))
        })?;
        let edges = parse_edge_list(BufReader::new(file), format, None)?;
        Ok(build_graph(&edges))
    }

    fn graph_name(&self) -> String {
        self.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }
}

/// Runs `method` and returns its result as a hierarchy (flat methods give a
/// single level).
fn run_method(g: &Graph, method: Method, params: &LpParams) -> Result<Hierarchy> {
    let started = Instant::now();
    let h = match method {
        Method::Hlp => build_hierarchy(g, params),
        Method::Lp => {
            let run = propagate(g, params);
            Hierarchy::single_level(
                g.clone(),
                run.assignment,
                run.iterations,
                started.elapsed().as_secs_f64(),
            )
        }
        Method::Ds => {
            let a = densest_subgraph_peel(g);
            Hierarchy::single_level(g.clone(), a, 0, started.elapsed().as_secs_f64())
        }
        Method::Kcore => {
            let a = kcore_split(g)?;
            Hierarchy::single_level(g.clone(), a, 0, started.elapsed().as_secs_f64())
        }
    };
    h.check_invariants()?;
    Ok(h)
}

#[derive(Serialize)]
struct LevelRow {
    level: usize,
    nodes: usize,
    edges: usize,
    communities: usize,
    superedges: usize,
    iterations: usize,
    elapsed: f64,
    modularity: Option<f64>,
}

#[derive(Serialize)]
struct DetectReport<'a> {
    graph: &'a str,
    method: &'a str,
    n: usize,
    m: usize,
    seed: u64,
    max_iters: usize,
    delta: usize,
    levels: Vec<LevelRow>,
}

fn fmt_modularity(q: Option<f64>) -> String {
    q.map_or_else(|| "-".to_string(), |q| format!("{q:.6}"))
}

pub fn cmd_detect(args: &DetectArgs, out: &mut dyn Write) -> Result<()> {
    let params = args.input.params()?;
    if args.level == Some(0) {
        return Err(Error::InvalidParams("--level counts from 1".into()));
    }
    let g = args.input.load()?;
    let h = run_method(&g, args.method, &params)?;
    if let Some(t) = args.level {
        h.level(t)?;
    }

    let rows = h
        .levels()
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let q = if g.m() == 0 {
                None
            } else {
                Some(modularity(&g, &h.project_to_base(i + 1)?)?)
            };
            Ok(LevelRow {
                level: i + 1,
                nodes: level.stats.nodes,
                edges: level.stats.edges,
                communities: level.stats.communities,
                superedges: level.stats.superedges,
                iterations: level.stats.iterations,
                elapsed: level.stats.elapsed,
                modularity: q,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let name = args.input.graph_name();
    if args.input.json {
        let report = DetectReport {
            graph: &name,
            method: args.method.name(),
            n: g.n(),
            m: g.m(),
            seed: params.seed,
            max_iters: params.max_iters,
            delta: params.delta,
            levels: rows,
        };
        serde_json::to_writer(&mut *out, &report)?;
        writeln!(out)?;
    } else {
        writeln!(out, "graph {name}: n={} m={}", g.n(), g.m())?;
        writeln!(
            out,
            "method {} seed={} max_iters={} delta={}",
            args.method.name(),
            params.seed,
            params.max_iters,
            params.delta
        )?;
        writeln!(
            out,
            "{:>5} {:>10} {:>10} {:>11} {:>10} {:>10} {:>10} {:>10}",
            "level",
            "nodes",
            "edges",
            "communities",
            "superedges",
            "iterations",
            "elapsed_s",
            "modularity"
        )?;
        for r in &rows {
            writeln!(
                out,
                "{:>5} {:>10} {:>10} {:>11} {:>10} {:>10} {:>10.3} {:>10}",
                r.level,
                r.nodes,
                r.edges,
                r.communities,
                r.superedges,
                r.iterations,
                r.elapsed,
                fmt_modularity(r.modularity)
            )?;
        }
    }

    if let (Some(kind), Some(path)) = (args.export, args.output.as_deref()) {
        export(&h, kind, args.level, path, &name, &params)?;
    }
    Ok(())
}

fn export(
    h: &Hierarchy,
    kind: ExportKind,
    level: Option<usize>,
    path: &Path,
    name: &str,
    params: &LpParams,
) -> Result<()> {
    match (kind, level) {
        (ExportKind::Json, _) => {
            write_hierarchy_json(h, name, params, BufWriter::new(File::create(path)?))?;
        }
        (ExportKind::Dot, Some(t)) => {
            write_supergraph_dot(h, t, BufWriter::new(File::create(path)?))?;
        }
        (ExportKind::Dot, None) => {
            fs::create_dir_all(path)?;
            for t in 1..=h.depth() {
                let file = File::create(path.join(format!("level-{t}.dot")))?;
                write_supergraph_dot(h, t, BufWriter::new(file))?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalRecord<'a> {
    graph: &'a str,
    method: &'a str,
    modularity: f64,
    communities: usize,
    /// Best level for hlp; 1 for flat methods.
    level: usize,
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let params = args.input.params()?;
    let g = args.input.load()?;
    if g.m() == 0 {
        return Err(Error::UndefinedMetric);
    }
    let name = args.input.graph_name();
    let mut records = Vec::new();
    for method in [Method::Hlp, Method::Lp, Method::Ds, Method::Kcore] {
        let h = run_method(&g, method, &params)?;
        let (level, q) = best_level_modularity(&h)?;
        records.push(EvalRecord {
            graph: &name,
            method: method.name(),
            modularity: q,
            communities: h.project_to_base(level)?.k(),
            level,
        });
    }
    if args.input.json {
        for r in &records {
            serde_json::to_writer(&mut *out, r)?;
            writeln!(out)?;
        }
    } else {
        writeln!(
            out,
            "graph {name}: n={} m={} seed={}",
            g.n(),
            g.m(),
            params.seed
        )?;
        writeln!(
            out,
            "{:<6} {:>10} {:>11} {:>5}",
            "method", "modularity", "communities", "level"
        )?;
        for r in &records {
            writeln!(
                out,
                "{:<6} {:>10.6} {:>11} {:>5}",
                r.method, r.modularity, r.communities, r.level
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_fixture(dir: &Path, body: &str) -> PathBuf {
        let p = dir.join("g.txt");
        fs::write(&p, body).unwrap();
        p
    }

    fn run_args(args: &[&str]) -> (i32, String) {
        let cli = Cli::try_parse_from(std::iter::once("hlp").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = run(cli, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    const TWO_TRIANGLES: &str = "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n";

    #[test]
    fn detect_lp_single_row() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_fixture(dir.path(), TWO_TRIANGLES);
        let (code, out) = run_args(&["detect", "--method", "lp", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        // two header lines, column header, one row
        assert_eq!(out.lines().count(), 4);
    }

    #[test]
    fn missing_file_is_input_error() {
        let (code, _) = run_args(&["detect", "/nonexistent/graph.txt"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn parse_error_is_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_fixture(dir.path(), "0 1\nfoo bar\n");
        let (code, _) = run_args(&["detect", p.to_str().unwrap()]);
        assert_eq!(code, 2);
    }

    #[test]
    fn eval_json_records() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_fixture(dir.path(), TWO_TRIANGLES);
        let (code, out) = run_args(&["eval", "--json", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        let recs: Vec<serde_json::Value> = out
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(recs.len(), 4);
        let q = |m: &str| {
            recs.iter().find(|r| r["method"] == m).unwrap()["modularity"]
                .as_f64()
                .unwrap()
        };
        assert!(q("hlp") >= q("lp"));
    }

    #[test]
    fn eval_edgeless_fails() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("e.mtx");
        fs::write(
            &p,
            "%%MatrixMarket matrix coordinate pattern general\n3 3 1\n1 1\n",
        )
        .unwrap();
        let (code, _) = run_args(&["eval", p.to_str().unwrap()]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bad_params_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_fixture(dir.path(), TWO_TRIANGLES);
        let (code, _) = run_args(&["detect", "--delta", "0", p.to_str().unwrap()]);
        assert_eq!(code, 2);
    }

    #[test]
    fn export_requires_output() {
        let r = Cli::try_parse_from(["hlp", "detect", "--export", "json", "g.txt"]);
        assert!(r.is_err());
        let r = Cli::try_parse_from(["hlp", "detect", "--level", "1", "g.txt"]);
        assert!(r.is_err());
    }

    #[test]
    fn export_dot_level_out_of_range() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_fixture(dir.path(), TWO_TRIANGLES);
        let dot = dir.path().join("x.dot");
        let (code, _) = run_args(&[
            "detect",
            "--export",
            "dot",
            "--level",
            "7",
            "--output",
            dot.to_str().unwrap(),
            p.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
    }
}
