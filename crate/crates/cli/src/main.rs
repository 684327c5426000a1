//! `pfnet`: Perron and Fiedler edge sensitivity from the command line.
//!
//! Exit status: 0 success, 1 usage error, 2 bad input data, 3 numerical
//! failure (no convergence, a required eigenvalue that is not simple, or a
//! failed `verify` check).

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pfnet::fixtures::Fixture;
use pfnet::multiplex::{self, Aggregation};
use pfnet::procedures::{self, GreedyOptions};
use pfnet::report::{self, ReportFormat};
use pfnet::sensitivity::{fiedler_impact_matrix, perron_impact_matrix};
use pfnet::{io as pio, verify, Error, Graph, Solver};

#[derive(Parser)]
#[command(
    name = "pfnet",
    version,
    about = "Edge sensitivity of the Perron and Fiedler values of a network"
)]
struct Cli {
    /// Largest order solved with the dense eigensolver; larger matrices use Lanczos.
    #[arg(long, global = true, default_value_t = pfnet::spectral::DENSE_THRESHOLD)]
    dense_threshold: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral summary, condition numbers and strongest edges.
    Analyze {
        /// Edge list or MatrixMarket file, `-` for stdin, or a fixture name.
        graph: String,
        /// Also write the JSON report to this file; stdout then gets the CSV row.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Ranked edges kept per impact matrix.
        #[arg(long, default_value_t = report::DEFAULT_TOP)]
        top: usize,
    },
    /// Edges ranked by their Perron or Fiedler impact.
    Impact {
        graph: String,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Emit JSON with full precision instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Split the node set in two.
    Bipartition {
        graph: String,
        #[arg(long, value_enum)]
        method: Method,
        /// Perron greedy only: keep the initial ranking instead of refreshing it.
        #[arg(long)]
        no_recompute: bool,
        /// Greedy steps with kappa(u) above this are flagged.
        #[arg(long, default_value_t = procedures::KAPPA_FLAG)]
        kappa_flag: f64,
    },
    /// Multiplex metrics from a manifest (`gamma <value>`, then one layer file per line).
    Multiplex {
        manifest: PathBuf,
        /// Override the manifest's coupling.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, value_enum, default_value_t = Metric::Summary)]
        metric: Metric,
    },
    /// Run the property checks on a graph.
    Verify {
        graph: String,
        /// Edges sampled for the per-edge checks.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a built-in graph as an edge list.
    Fixture {
        /// Fixture name; omit to list them.
        name: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Perron,
    Fiedler,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    FiedlerSign,
    FiedlerMedian,
    PerronGreedy,
    DecrementGreedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Summary,
    Eigentensor,
    Versatility,
    FiedlerBound,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pfnet: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn load(arg: &str) -> Result<Graph, Error> {
    if arg == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(|e| Error::Io {
            path: "<stdin>".into(),
            message: e.to_string(),
        })?;
        return pio::parse_graph(&text);
    }
    let path = Path::new(arg);
    if !path.exists() {
        if let Ok(f) = arg.parse::<Fixture>() {
            return Ok(f.graph());
        }
    }
    pio::load_graph(path)
}

fn emit(text: &str) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let solver = Solver::default().with_dense_threshold(cli.dense_threshold);
    match cli.command {
        Command::Analyze {
            graph,
            report: path,
            format,
            top,
        } => {
            let g = load(&graph)?;
            let r = report::analyze(&solver, &g, top)?;
            if let Some(p) = path {
                std::fs::write(&p, report::write_report(&r, ReportFormat::Json)).map_err(|e| Error::Io {
                    path: p.display().to_string(),
                    message: e.to_string(),
                })?;
                emit(&report::write_report(&r, ReportFormat::CsvSummary))?;
            } else {
                let f = match format {
                    Format::Json => ReportFormat::Json,
                    Format::Csv => ReportFormat::CsvSummary,
                };
                emit(&report::write_report(&r, f))?;
            }
        }
        Command::Impact { graph, kind, top, json } => {
            let g = load(&graph)?;
            let r = match kind {
                Kind::Perron => perron_impact_matrix(&g, &solver.perron_pair(&g)?.pair)?,
                Kind::Fiedler => fiedler_impact_matrix(&g, &solver.fiedler_pair(&g)?.pair)?,
            };
            if json {
                emit(&(report::to_json(&r.top(top)) + "\n"))?;
            } else {
                let lines: String = r.top(top).iter().map(|(e, v)| format!("{e}: {v:.4}\n")).collect();
                emit(&lines)?;
            }
        }
        Command::Bipartition {
            graph,
            method,
            no_recompute,
            kappa_flag,
        } => {
            let g = load(&graph)?;
            let opts = GreedyOptions { kappa_flag };
            let text = match method {
                Method::FiedlerSign => {
                    report::to_json(&procedures::fiedler_sign_partition(&g, &solver.fiedler_pair(&g)?.pair)?)
                }
                Method::FiedlerMedian => report::to_json(&procedures::fiedler_median_partition(
                    &g,
                    &solver.fiedler_pair(&g)?.pair,
                )?),
                Method::PerronGreedy => {
                    report::to_json(&procedures::perron_greedy_bipartize(&solver, &g, !no_recompute, &opts)?)
                }
                Method::DecrementGreedy => {
                    report::to_json(&procedures::decrement_greedy_bipartize(&solver, &g, &opts)?)
                }
            };
            emit(&(text + "\n"))?;
        }
        Command::Multiplex {
            manifest,
            gamma,
            metric,
        } => {
            let mx = pio::load_multiplex(&manifest, gamma)?;
            let text = match metric {
                Metric::Summary => report::to_json(&multiplex::summarize(&solver, &mx)?),
                Metric::Eigentensor => report::to_json(&multiplex::eigentensor(&solver, &mx)?),
                Metric::Versatility => report::to_json(&multiplex::eigentensor(&solver, &mx)?.versatility),
                Metric::FiedlerBound => {
                    let avg = mx.aggregate(Aggregation::Average);
                    let mu_avg = solver.laplacian_bottom(&avg, 2.min(avg.node_count()))?.get(1).copied();
                    let mu_b = multiplex::supra_fiedler_value(&solver, &mx)?;
                    let bound = multiplex::fiedler_upper_bound(mu_avg.unwrap_or(0.0), mx.gamma(), mx.layer_count());
                    report::to_json(&serde_json::json!({
                        "supra_fiedler": mu_b,
                        "average_fiedler": mu_avg,
                        "gamma_times_layers": mx.gamma() * mx.layer_count() as f64,
                        "bound": bound,
                        "holds": mu_b <= bound + 1e-8,
                    }))
                }
            };
            emit(&(text + "\n"))?;
        }
        Command::Verify { graph, trials, seed } => {
            let g = load(&graph)?;
            let r = verify::verify_graph(&solver, &g, trials, seed)?;
            let mut text = String::new();
            for c in &r.checks {
                let status = match (c.passed, c.checked) {
                    (false, _) => "FAIL",
                    (true, 0) => "SKIP",
                    (true, _) => "PASS",
                };
                text += &format!(
                    "{status} {:<28} checked {:>4}  skipped {:>4}",
                    c.name, c.checked, c.skipped
                );
                if !c.detail.is_empty() {
                    text += &format!("  {}", c.detail);
                }
                text.push('\n');
            }
            emit(&text)?;
            if !r.passed() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Fixture { name } => match name {
            Some(name) => emit(&pio::write_edge_list(&name.parse::<Fixture>()?.graph()))?,
            None => {
                let list: String = Fixture::ALL
                    .iter()
                    .map(|f| format!("{:<16}{}\n", f.name(), f.provenance()))
                    .collect();
                emit(&list)?;
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}
