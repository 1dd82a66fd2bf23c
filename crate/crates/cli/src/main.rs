use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use expnbhd::graph::{
    complete_graph, cycle_graph, exponential_graph_bounded, fold_core_exponential_bounded, fold_to_fixed_point, path_graph,
    Graph, GraphJson, DEFAULT_EXP_VERTEX_BOUND,
};
use expnbhd::hom::{enumerate_hom_cells_bounded, order_complex_of_hom, DEFAULT_HOM_BOUND};
use expnbhd::homology::{betti_bounded_with, BettiTable, ChainComplex, ChainComplexJson};
use expnbhd::pipeline::{
    build_matching_mu, corollary1_report, run_morse, theorem1_report_with, verify, BruteForce, Status, LEMMA_NAMES,
};
use expnbhd::simplicial::{faces_up_to_bounded, neighborhood_complex, Complex, ComplexJson, DEFAULT_FACE_BOUND};
use expnbhd::Error;

#[derive(Parser)]
#[command(name = "expnbhd", version, about = "Exponential graphs, neighborhood complexes and their Z/2 homology")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads (defaults to the available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest number of faces materialized for brute-force homology.
    #[arg(long, global = true, default_value_t = DEFAULT_FACE_BOUND)]
    face_bound: u64,
    /// Largest number of maps enumerated for an exponential graph.
    #[arg(long, global = true, default_value_t = DEFAULT_EXP_VERTEX_BOUND)]
    vertex_bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Morse,
    Bruteforce,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of N(K_{n+1}^{K_n}) through the explicit matching, or the
    /// connectivity statement for N(K_m^{K_n}) with --cor1.
    Reproduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cor1: bool,
        #[arg(long, requires = "cor1")]
        m: Option<usize>,
        /// Defaults to both for n <= 4 and to Morse with a partial brute-force check above.
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Run the lemma checks for one n.
    Verify {
        #[arg(long)]
        n: usize,
        /// Restrict to the named checks (repeatable).
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(LEMMA_NAMES))]
        lemma: Vec<String>,
    },
    /// Ad-hoc constructions and homology queries.
    #[command(subcommand)]
    Compute(Compute),
}

#[derive(Args, Clone)]
struct GraphSource {
    /// Built-in graph (kN, cN, pN) or a path to a graph JSON file.
    #[arg(long)]
    graph: Option<String>,
    /// The folded core of K_M^{K_N}.
    #[arg(long, num_args = 2, value_names = ["M", "N"])]
    exp: Option<Vec<usize>>,
}

#[derive(Subcommand)]
enum Compute {
    /// The exponential graph K_M^{K_N} (or H^G for two graphs).
    ExpGraph {
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        exp: Option<Vec<usize>>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
        /// Return the folded core instead of the full graph.
        #[arg(long)]
        core: bool,
    },
    /// Fold a graph until no fold remains.
    Fold {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Facets of the neighborhood complex.
    Ncomplex {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Faces of the neighborhood complex up to a dimension.
    Faces {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = 1)]
        max_dim: usize,
    },
    /// Z/2 Betti numbers of a neighborhood complex, a complex file, or a chain complex file.
    Homology {
        #[command(flatten)]
        source: GraphSource,
        /// Complex JSON file.
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Chain complex JSON file.
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Homology of the order complex of Hom(G, H).
    Hom {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// The collapsed complex Δ for n.
    Delta {
        #[arg(long)]
        n: usize,
    },
    /// The explicit matching on Δ (CSV dump of pairs).
    Matching {
        #[arg(long)]
        n: usize,
    },
    /// The Morse chain complex of the explicit matching on Δ.
    Morse {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Mismatch(String),
    Usage(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            Error::LemmaViolation(_) | Error::InternalConsistency(_) | Error::InvalidChain { .. } => {
                Failure::Mismatch(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if cli.face_bound == 0 || cli.vertex_bound == 0 {
        eprintln!("error: bounds must be positive");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(m)) => {
            eprintln!("mismatch: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("resource limit: {m}");
            ExitCode::from(3)
        }
    }
}

fn emit_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn emit_csv(header: &[&str], rows: Vec<Vec<String>>) -> Outcome {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(csv_field).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn csv_field(s: String) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Reproduce {
            n,
            cor1,
            m,
            method,
            max_dim,
        } => reproduce(cli, *n, *cor1, *m, *method, *max_dim),
        Command::Verify { n, lemma } => {
            let names: Vec<&str> = lemma.iter().map(String::as_str).collect();
            let checks = verify(*n, &names)?;
            for c in &checks {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                eprintln!("{tag:4}  {:13} {}", c.name, c.detail);
            }
            match cli.format {
                Format::Json => emit_json(&checks)?,
                Format::Csv => emit_csv(
                    &["name", "status", "detail"],
                    checks
                        .iter()
                        .map(|c| {
                            let status = serde_json::to_value(c.status).unwrap();
                            vec![c.name.clone(), status.as_str().unwrap().to_string(), c.detail.clone()]
                        })
                        .collect(),
                )?,
            }
            if checks.iter().any(|c| c.status == Status::Fail) {
                return Err(Failure::Mismatch("verification failed".into()));
            }
            Ok(())
        }
        Command::Compute(c) => compute(cli, c),
    }
}

fn reproduce(
    cli: &Cli,
    n: usize,
    cor1: bool,
    m: Option<usize>,
    method: Option<Method>,
    max_dim: Option<usize>,
) -> Outcome {
    if cor1 {
        let m = m.ok_or_else(|| Failure::Usage("--cor1 needs --m".into()))?;
        let report = corollary1_report(m, n)?;
        match cli.format {
            Format::Json => emit_json(&report)?,
            Format::Csv => emit_csv(
                &["dim", "betti"],
                report
                    .betti
                    .iter()
                    .flatten()
                    .enumerate()
                    .map(|(d, b)| vec![d.to_string(), b.to_string()])
                    .collect(),
            )?,
        }
        return finish(report.crosschecks.iter().map(|c| (c.name.as_str(), c.pass)));
    }
    if method == Some(Method::Both) && n > 4 {
        return Err(Failure::Usage("--method both needs n <= 4; use --method morse".into()));
    }
    if method == Some(Method::Bruteforce) {
        let core = fold_core_exponential_bounded(n + 1, n, cli.vertex_bound)?;
        let want = max_dim.unwrap_or(n.saturating_sub(1));
        let table = betti_bounded_with(&neighborhood_complex(&core), want, cli.face_bound);
        emit_betti(cli, &table)?;
        if table.max_verified_dim != Some(want) {
            return Err(Failure::Resource(format!(
                "brute force certified dimensions up to {:?} of {want}",
                table.max_verified_dim
            )));
        }
        return Ok(());
    }
    let brute = match (method, max_dim) {
        (Some(Method::Morse), _) => BruteForce::Off,
        (_, Some(d)) => BruteForce::UpTo(d),
        (Some(Method::Both), None) => BruteForce::UpTo(n - 1),
        _ => BruteForce::Default,
    };
    let report = theorem1_report_with(n, brute)?;
    match cli.format {
        Format::Json => emit_json(&report)?,
        Format::Csv => emit_csv(
            &["dim", "critical", "betti"],
            (0..report.betti.len().max(report.critical.len()))
                .map(|d| {
                    vec![
                        d.to_string(),
                        report.critical.get(d).copied().unwrap_or(0).to_string(),
                        report.betti.get(d).copied().unwrap_or(0).to_string(),
                    ]
                })
                .collect(),
        )?,
    }
    finish(report.crosschecks.iter().map(|c| (c.name.as_str(), c.pass)))
}

fn finish<'a>(checks: impl Iterator<Item = (&'a str, bool)>) -> Outcome {
    let failed: Vec<&str> = checks.filter(|(_, pass)| !pass).map(|(name, _)| name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("failing checks: {}", failed.join(", "))))
    }
}

fn emit_betti(cli: &Cli, table: &BettiTable) -> Outcome {
    match cli.format {
        Format::Json => emit_json(table),
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            std::io::stdout().lock().write_all(&buf)?;
            Ok(())
        }
    }
}

fn parse_graph(spec: &str) -> Result<Graph, Failure> {
    let size = |rest: &str| rest.parse::<usize>().ok();
    let built = match spec.split_at(1.min(spec.len())) {
        ("k", rest) if size(rest).is_some() => Some(complete_graph(size(rest).unwrap())),
        ("c", rest) if size(rest).is_some() => Some(cycle_graph(size(rest).unwrap())),
        ("p", rest) if size(rest).is_some() => Some(path_graph(size(rest).unwrap())),
        _ => None,
    };
    if let Some(g) = built {
        return Ok(g?);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Failure::Usage(format!("{spec:?} is neither kN/cN/pN nor a readable file: {e}")))?;
    let json: GraphJson = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(Graph::from_json(&json)?)
}

/// `--exp M N` reads as base then exponent: `K_M^{K_N}`.
fn exp_pair(v: &[usize]) -> (usize, usize) {
    (v[0], v[1])
}

fn source_graph(cli: &Cli, src: &GraphSource) -> Result<Graph, Failure> {
    match (&src.graph, &src.exp) {
        (Some(g), None) => parse_graph(g),
        (None, Some(e)) => {
            let (m, n) = exp_pair(e);
            Ok(fold_core_exponential_bounded(m, n, cli.vertex_bound)?.graph)
        }
        _ => Err(Failure::Usage("give exactly one of --graph or --exp".into())),
    }
}

fn emit_graph(cli: &Cli, g: &Graph) -> Outcome {
    match cli.format {
        Format::Json => emit_json(&g.to_json()),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = g.edges().map(|(u, v)| vec![g.label(u).into(), g.label(v).into()]).collect();
            rows.extend(g.loops().map(|v| vec![g.label(v).into(), g.label(v).into()]));
            emit_csv(&["u", "v"], rows)
        }
    }
}

fn emit_complex(cli: &Cli, c: &Complex) -> Outcome {
    match cli.format {
        Format::Json => emit_json(&c.to_json()),
        Format::Csv => emit_csv(
            &["dim", "facet"],
            c.facets()
                .iter()
                .map(|f| {
                    let labels: Vec<&str> = f.vertices().iter().map(|&v| c.label(v)).collect();
                    vec![f.dim().to_string(), labels.join(" ")]
                })
                .collect(),
        ),
    }
}

fn compute(cli: &Cli, c: &Compute) -> Outcome {
    match c {
        Compute::ExpGraph { exp, g, h, core } => {
            let graph = match (exp, g, h) {
                (Some(e), None, None) => {
                    let (m, n) = exp_pair(e);
                    if *core {
                        fold_core_exponential_bounded(m, n, cli.vertex_bound)?.graph
                    } else {
                        exponential_graph_bounded(&complete_graph(n)?, &complete_graph(m)?, cli.vertex_bound)?.graph
                    }
                }
                (None, Some(g), Some(h)) => {
                    let full = exponential_graph_bounded(&parse_graph(g)?, &parse_graph(h)?, cli.vertex_bound)?.graph;
                    if *core {
                        fold_to_fixed_point(&full).core
                    } else {
                        full
                    }
                }
                _ => return Err(Failure::Usage("give --exp M N, or --g and --h".into())),
            };
            emit_graph(cli, &graph)
        }
        Compute::Fold { source } => {
            let g = source_graph(cli, source)?;
            let folded = fold_to_fixed_point(&g);
            eprintln!("{} folds, {} vertices kept", folded.steps.len(), folded.kept.len());
            emit_graph(cli, &folded.core)
        }
        Compute::Ncomplex { source } => emit_complex(cli, &neighborhood_complex(&source_graph(cli, source)?)),
        Compute::Faces { source, max_dim } => {
            let nc = neighborhood_complex(&source_graph(cli, source)?);
            let faces = faces_up_to_bounded(&nc, *max_dim, cli.face_bound)?;
            match cli.format {
                Format::Json => emit_json(&faces.counts()),
                Format::Csv => {
                    let mut buf = Vec::new();
                    faces.write_csv(&mut buf)?;
                    std::io::stdout().lock().write_all(&buf)?;
                    Ok(())
                }
            }
        }
        Compute::Homology {
            source,
            complex,
            chain,
            max_dim,
        } => {
            if let Some(path) = chain {
                let text = std::fs::read_to_string(path)?;
                let json: ChainComplexJson = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
                return emit_betti(cli, &ChainComplex::from_json(&json)?.betti());
            }
            let cx = match complex {
                Some(path) => {
                    if source.graph.is_some() || source.exp.is_some() {
                        return Err(Failure::Usage("give one input".into()));
                    }
                    let text = std::fs::read_to_string(path)?;
                    let json: ComplexJson = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
                    Complex::from_json(&json)?
                }
                None => neighborhood_complex(&source_graph(cli, source)?),
            };
            let table = betti_bounded_with(&cx, *max_dim, cli.face_bound);
            emit_betti(cli, &table)?;
            if table.max_verified_dim != Some(*max_dim) {
                return Err(Failure::Resource(format!(
                    "certified dimensions up to {:?} of {max_dim}",
                    table.max_verified_dim
                )));
            }
            Ok(())
        }
        Compute::Hom { g, h, max_dim } => {
            let (g, h) = (parse_graph(g)?, parse_graph(h)?);
            let cells = enumerate_hom_cells_bounded(&g, &h, DEFAULT_HOM_BOUND)?;
            let oc = order_complex_of_hom(&cells, &h)?;
            let top = oc.dim().unwrap_or(0).min(*max_dim);
            let table = betti_bounded_with(&oc, top, cli.face_bound);
            emit_betti(cli, &table)
        }
        Compute::Delta { n } => emit_complex(cli, &expnbhd::simplicial::build_delta(*n)?.complex),
        Compute::Matching { n } => {
            let mu = build_matching_mu(*n)?;
            let mut buf = Vec::new();
            mu.matching.write_csv(&mu.poset, &mut buf)?;
            std::io::stdout().lock().write_all(&buf)?;
            Ok(())
        }
        Compute::Morse { n } => {
            let run = run_morse(*n)?;
            match cli.format {
                Format::Json => emit_json(&run.morse.chain.to_json()),
                Format::Csv => emit_csv(
                    &["dim", "critical"],
                    run.morse
                        .critical
                        .counts()
                        .iter()
                        .enumerate()
                        .map(|(d, c)| vec![d.to_string(), c.to_string()])
                        .collect(),
                ),
            }
        }
    }
}
