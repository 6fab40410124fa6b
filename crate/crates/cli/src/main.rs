//! `lipkr`: command-line front end for the Lipschitz / Kantorovich-Rubinstein
//! polytope toolkit.
//!
//! Exit status: 0 on success, 2 on unreadable or malformed input, 3 on a
//! domain error (non-generic metric, bad bipartition, ...), 4 when a request
//! exceeds a computation budget.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lipkr::classify::{count_classes, count_classes_up_to_relabeling};
use lipkr::faces::{
    enumerate_facets, face_lattice, faces_with_outdegrees_in, multinomial, OutdegreeSequence,
};
use lipkr::io::{metric_to_json, parse_measure_json, parse_metric_json};
use lipkr::metric::random_generic_metric;
use lipkr::norms::{kr_norm, kr_norm_dual};
use lipkr::parallel::with_jobs;
use lipkr::triangulate::{
    check_unimodular, product_triangulation, regularity_certificate, triangulate_root_polytope,
};
use lipkr::{DirectedEdgeSet, Error, MetricSpace, Rational, Result};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "lipkr",
    version,
    about = "Exact combinatorics of Lipschitz and Kantorovich-Rubinstein polytopes"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report strictness and genericity of a metric.
    Check { metric: String },
    /// Face counts by number of edges, beside the closed formula.
    Fvector { metric: String },
    /// Every facet tree with its outdegrees and witness vertex.
    Facets { metric: String },
    /// Faces, optionally restricted to one outdegree sequence.
    Faces {
        metric: String,
        /// Outdegree of each point, e.g. `2,1,0,0`.
        #[arg(long, value_delimiter = ',')]
        outdeg: Option<Vec<usize>>,
    },
    /// Kantorovich-Rubinstein norm of a measure by optimal transport.
    Norm { metric: String, measure: String },
    /// The same norm as a maximum over the vertices of the Lipschitz polytope.
    DualNorm { metric: String, measure: String },
    /// Unimodular triangulation of the root polytope induced by the metric.
    Triangulate { metric: String },
    /// Cells of the triangulation of one product-of-simplices facet.
    Product {
        metric: String,
        /// One-based points on the tail side, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        plus: Vec<usize>,
    },
    /// Group metrics into combinatorial equivalence classes.
    Classify {
        /// Metric files; a file may also hold a JSON array of metrics.
        #[arg(required = true)]
        metrics: Vec<String>,
        /// Also identify structures that differ by renaming points.
        #[arg(long)]
        up_to_relabeling: bool,
    },
    /// Seeded random generic metric on `dim + 1` points, as metric JSON.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
    }
}

fn load_metric(path: &str) -> Result<MetricSpace> {
    parse_metric_json(&read_input(path)?)
}

fn load_family(path: &str) -> Result<Vec<MetricSpace>> {
    let text = read_input(path)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    match doc {
        Value::Array(items) => items
            .iter()
            .map(|m| parse_metric_json(&m.to_string()))
            .collect(),
        _ => Ok(vec![parse_metric_json(&text)?]),
    }
}

fn one_based(points: &[usize]) -> Result<Vec<usize>> {
    points
        .iter()
        .map(|&p| {
            p.checked_sub(1)
                .ok_or_else(|| Error::Parse("point labels start at 1".into()))
        })
        .collect()
}

fn edges_json(g: &DirectedEdgeSet) -> Value {
    json!(g.to_one_based())
}

fn rationals_json(values: &[Rational]) -> Value {
    json!(values.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn joined(values: &[Rational]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn no_dot(verb: &str) -> Error {
    Error::Parse(format!("--format dot is not available for {verb}"))
}

fn dot_list(ms: &MetricSpace, graphs: &[(String, &DirectedEdgeSet)]) -> String {
    graphs
        .iter()
        .map(|(name, g)| g.to_dot(ms.n_points(), name))
        .collect()
}

fn check(ms: &MetricSpace, format: Format) -> Result<String> {
    let (generic, detail) = match ms.genericity() {
        Ok(report) => (
            report.is_generic(),
            json!({
                "configurations_checked": report.configurations_checked,
                "tie": report.tie.as_ref().map(ToString::to_string),
            }),
        ),
        Err(Error::NotStrict) => (false, json!({ "tie": Value::Null, "reason": "not strict" })),
        Err(e) => return Err(e),
    };
    Ok(match format {
        Format::Text => {
            let mut out = format!("strict: {}, generic: {generic}", ms.is_strict());
            if let Some(tie) = detail.get("tie").and_then(Value::as_str) {
                out.push_str(&format!("\ntie: {tie}"));
            }
            out
        }
        Format::Json => pretty(&json!({
            "points": ms.n_points(),
            "strict": ms.is_strict(),
            "generic": generic,
            "detail": detail,
        })),
        Format::Dot => return Err(no_dot("check")),
    })
}

fn fvector(ms: &MetricSpace, format: Format) -> Result<String> {
    let counts = face_lattice(ms)?.f_vector();
    let n = ms.dim() as u64;
    let formula: Vec<String> = (0..=n).map(|m| multinomial(n, m).to_string()).collect();
    let measured: Vec<String> = counts.iter().map(ToString::to_string).collect();
    Ok(match format {
        Format::Text => format!(
            "{}\nbinom(n+m,m,m,n-m): {}",
            measured.join(" "),
            formula.join(" ")
        ),
        Format::Json => pretty(&json!({ "n": n, "f_vector": counts, "multinomial": formula })),
        Format::Dot => return Err(no_dot("fvector")),
    })
}

fn facets(ms: &MetricSpace, format: Format) -> Result<String> {
    let facets = enumerate_facets(ms)?;
    Ok(match format {
        Format::Text => facets
            .iter()
            .map(|f| {
                let outdeg: Vec<String> = f.outdeg.0.iter().map(ToString::to_string).collect();
                format!(
                    "{}  {}  f = {}",
                    outdeg.join(","),
                    f.tree,
                    joined(&f.witness.values)
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => pretty(&Value::Array(
            facets
                .iter()
                .map(|f| {
                    json!({
                        "outdegrees": f.outdeg.0,
                        "edges": edges_json(&f.tree),
                        "witness": rationals_json(&f.witness.values),
                    })
                })
                .collect(),
        )),
        Format::Dot => {
            let named: Vec<(String, &DirectedEdgeSet)> = facets
                .iter()
                .enumerate()
                .map(|(i, f)| (format!("facet{}", i + 1), &f.tree))
                .collect();
            dot_list(ms, &named)
        }
    })
}

fn faces(ms: &MetricSpace, outdeg: Option<Vec<usize>>, format: Format) -> Result<String> {
    let lattice = face_lattice(ms)?;
    let selected: Vec<(i64, DirectedEdgeSet)> = match outdeg {
        Some(p) => faces_with_outdegrees_in(&lattice, ms, &OutdegreeSequence(p))?
            .into_iter()
            .map(|g| (g.len() as i64 - 1, g))
            .collect(),
        None => lattice.faces().map(|f| (f.dim, f.edges)).collect(),
    };
    Ok(match format {
        Format::Text => selected
            .iter()
            .map(|(dim, g)| {
                format!(
                    "{dim}  {}",
                    if g.is_empty() {
                        "(whole polytope)".to_string()
                    } else {
                        g.to_string()
                    }
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => pretty(&Value::Array(
            selected
                .iter()
                .map(|(dim, g)| json!({ "dim": dim, "edges": edges_json(g) }))
                .collect(),
        )),
        Format::Dot => {
            let named: Vec<(String, &DirectedEdgeSet)> = selected
                .iter()
                .enumerate()
                .map(|(i, (_, g))| (format!("face{}", i + 1), g))
                .collect();
            dot_list(ms, &named)
        }
    })
}

fn norm(ms: &MetricSpace, measure: &str, dual: bool, format: Format) -> Result<String> {
    let mu = parse_measure_json(&read_input(measure)?, ms.n_points())?;
    let value = if dual {
        kr_norm_dual(ms, &mu)?
    } else {
        kr_norm(ms, &mu)?
    };
    Ok(match format {
        Format::Text => value.to_string(),
        Format::Json => pretty(&json!({ "norm": value.to_string() })),
        Format::Dot => return Err(no_dot(if dual { "dual-norm" } else { "norm" })),
    })
}

fn triangulate(ms: &MetricSpace, format: Format) -> Result<String> {
    let t = triangulate_root_polytope(ms)?;
    let report = check_unimodular(&t);
    if !report.unimodular {
        return Err(Error::InternalContradiction(format!(
            "triangulation is not unimodular: {report:?}"
        )));
    }
    Ok(match format {
        Format::Text => t
            .simplices
            .iter()
            .map(|s| s.tree.to_string())
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => {
            let facets = enumerate_facets(ms)?;
            let cells = t
                .simplices
                .iter()
                .zip(&facets)
                .map(|(s, f)| {
                    let cert = regularity_certificate(ms, f)?;
                    Ok(json!({
                        "edges": edges_json(&s.tree),
                        "det": s.det,
                        "margin": cert.margin.to_string(),
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            pretty(
                &json!({ "count": report.count, "unimodular": report.unimodular, "simplices": cells }),
            )
        }
        Format::Dot => {
            let named: Vec<(String, &DirectedEdgeSet)> = t
                .simplices
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("simplex{}", i + 1), &s.tree))
                .collect();
            dot_list(ms, &named)
        }
    })
}

fn product(ms: &MetricSpace, plus: &[usize], format: Format) -> Result<String> {
    let cells = product_triangulation(ms, &one_based(plus)?)?;
    Ok(match format {
        Format::Text => cells
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => pretty(&Value::Array(cells.iter().map(edges_json).collect())),
        Format::Dot => {
            let named: Vec<(String, &DirectedEdgeSet)> = cells
                .iter()
                .enumerate()
                .map(|(i, g)| (format!("cell{}", i + 1), g))
                .collect();
            dot_list(ms, &named)
        }
    })
}

fn classify(paths: &[String], up_to_relabeling: bool, format: Format) -> Result<String> {
    let mut family = Vec::new();
    for path in paths {
        family.extend(load_family(path)?);
    }
    let report = if up_to_relabeling {
        count_classes_up_to_relabeling(&family)?
    } else {
        count_classes(&family)?
    };
    Ok(match format {
        Format::Text => {
            let mut lines = vec![format!(
                "{} classes over {} metrics",
                report.count(),
                family.len()
            )];
            lines.extend(report.classes.iter().map(|c| {
                format!(
                    "representative {}  size {}  {}",
                    c.representative + 1,
                    c.size,
                    c.structure_hash
                )
            }));
            lines.join("\n")
        }
        Format::Json => pretty(&Value::Array(
            report
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "representative": c.representative + 1,
                        "size": c.size,
                        "structure_hash": c.structure_hash,
                    })
                })
                .collect(),
        )),
        Format::Dot => return Err(no_dot("classify")),
    })
}

fn run(cli: Cli) -> Result<String> {
    let format = cli.format;
    match cli.command {
        Command::Check { metric } => check(&load_metric(&metric)?, format),
        Command::Fvector { metric } => fvector(&load_metric(&metric)?, format),
        Command::Facets { metric } => facets(&load_metric(&metric)?, format),
        Command::Faces { metric, outdeg } => faces(&load_metric(&metric)?, outdeg, format),
        Command::Norm { metric, measure } => norm(&load_metric(&metric)?, &measure, false, format),
        Command::DualNorm { metric, measure } => {
            norm(&load_metric(&metric)?, &measure, true, format)
        }
        Command::Triangulate { metric } => triangulate(&load_metric(&metric)?, format),
        Command::Product { metric, plus } => product(&load_metric(&metric)?, &plus, format),
        Command::Classify {
            metrics,
            up_to_relabeling,
        } => classify(&metrics, up_to_relabeling, format),
        Command::Random { dim, seed } => {
            Ok(pretty(&metric_to_json(&random_generic_metric(dim, seed)?)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs;
    match with_jobs(jobs, || run(cli)) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
