use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use turan_lab::classify::{classify_paths, classify_spiders, Threshold, ThresholdConfig};
use turan_lab::exponent::{atlas, atlas_csv, certify, certify_dense_fraction, regularity_constants, replay};
use turan_lab::families::{density, Family, RootedTree};
use turan_lab::search::{ex_table, turan_number_with, Pattern, SearchOptions};
use turan_lab::{Error, Graph, Rational, VertexSet, SCHEMA};

#[derive(Parser)]
#[command(name = "turan-lab", version, about = "Spiders, blowups, Turán exponents and small Turán numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a family spec.
    Construct {
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Graph6)]
        format: GraphFormat,
    },
    /// Density and balancedness of a rooted tree.
    CheckBalanced {
        #[arg(long)]
        family: String,
        /// `leaves`, or a comma-separated vertex list.
        #[arg(long, default_value = "leaves")]
        roots: String,
    },
    /// Turán exponent certificates and constants.
    Exponent {
        #[command(subcommand)]
        action: ExponentCommand,
    },
    /// Exact ex(n, H) by branch and bound.
    ExSearch {
        #[arg(long)]
        n: usize,
        /// Tabulate ex(m, H) for m from n up to this value.
        #[arg(long)]
        up_to: Option<usize>,
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Light and heavy paths (and optionally spiders) of a graph.
    Classify(ClassifyArgs),
    /// CSV of certificates for every rational in (1, 2) up to a denominator.
    Atlas {
        #[arg(long, default_value_t = 50)]
        max_den: u64,
    },
}

#[derive(Subcommand)]
enum ExponentCommand {
    /// Certify a rational such as `7/5` or `2-4/10`.
    Certify { target: String },
    /// Replay a certificate read from a JSON file (`-` for stdin).
    Replay { file: PathBuf },
    /// Epsilon and the almost-regularity constant K for S^s_{b,k}.
    Regularity {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        k: u64,
    },
    /// Same as the top-level `atlas`.
    Atlas {
        #[arg(long, default_value_t = 50)]
        max_den: u64,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// graph6 or JSON edge-list file, `-` for stdin.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 3)]
    jmax: usize,
    #[arg(long = "L", default_value_t = 1)]
    l: u64,
    #[arg(long = "K", default_value_t = 1)]
    k: u64,
    #[arg(long = "s", default_value_t = 2)]
    s: u32,
    /// Override a threshold, `j=COUNT` (COUNT may be `inf`). Repeatable.
    #[arg(long = "threshold", value_parser = parse_override)]
    thresholds: Vec<(usize, Threshold)>,
    /// Also classify spiders with these leg lengths, e.g. `1,2`.
    #[arg(long)]
    spider: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Graph6,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
}

fn parse_override(text: &str) -> Result<(usize, Threshold), String> {
    let (j, count) = text.split_once('=').ok_or("expected j=COUNT")?;
    let j = j.trim().parse().map_err(|_| format!("bad length `{j}`"))?;
    let count = count.parse().map_err(|e: Error| e.to_string())?;
    Ok((j, count))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(cli.command) {
        Ok(Output::Json(value)) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&value).expect("json"));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(text)) => {
            let _ = write!(stdout, "{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let value = json!({
                "schema": SCHEMA,
                "error": { "kind": error_kind(&err), "message": err.to_string() },
            });
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&value).expect("json"));
            ExitCode::from(1)
        }
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn error_kind(err: &Error) -> String {
    let debug = format!("{err:?}");
    let name = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error");
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}

fn with_schema(value: impl serde::Serialize) -> Value {
    let mut value = serde_json::to_value(value).expect("results serialize");
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), SCHEMA.into());
    }
    value
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    let text = if path.as_os_str() == "-" {
        io::read_to_string(io::stdin())
    } else {
        fs::read_to_string(path)
    };
    text.map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_graph(path: &PathBuf) -> Result<Graph, Error> {
    let text = read_input(path)?;
    let text = text.trim();
    if text.starts_with('{') {
        Graph::from_json(text)
    } else {
        let line = text.lines().next().unwrap_or("");
        Graph::from_graph6(line.strip_prefix(">>graph6<<").unwrap_or(line))
    }
}

fn run(command: Command) -> Result<Output, Error> {
    match command {
        Command::Construct { family, format } => {
            let family: Family = family.parse()?;
            let g = family.graph()?;
            Ok(match format {
                GraphFormat::Graph6 => Output::Text(format!("{}\n", g.to_graph6())),
                GraphFormat::Json => Output::Json(json!({
                    "schema": SCHEMA,
                    "family": family.to_string(),
                    "n": g.order(),
                    "edges": g.to_edge_list().edges,
                    "graph6": g.to_graph6(),
                })),
            })
        }
        Command::CheckBalanced { family, roots } => check_balanced(&family, &roots),
        Command::Exponent { action } => exponent(action),
        Command::ExSearch { n, up_to, family, format: OutputFormat::Json, threads } => {
            let family: Family = family.parse()?;
            let pattern = Pattern::from_family(&family)?;
            let options = SearchOptions { threads };
            match up_to {
                None => Ok(Output::Json(with_schema(turan_number_with(n, &pattern, &options)?))),
                Some(m) => Ok(Output::Json(with_schema(ex_table(&pattern, n..=m, &options)?))),
            }
        }
        Command::Classify(args) => classify(args),
        Command::Atlas { max_den } => Ok(Output::Text(atlas_csv(&atlas(max_den)?))),
    }
}

fn check_balanced(family: &str, roots: &str) -> Result<Output, Error> {
    let family: Family = family.parse()?;
    let tree = if roots == "leaves" {
        match family.spider() {
            Some(spider) => spider.rooted_at_leaves()?,
            None => {
                let g = family.graph()?;
                let leaves: VertexSet = (0..g.order()).filter(|&v| g.degree(v) == 1).collect();
                RootedTree::new(g, leaves)?
            }
        }
    } else {
        let set = roots
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<Result<VertexSet, _>>()
            .map_err(|_| Error::Parameter(format!("bad root list `{roots}`")))?;
        RootedTree::new(family.graph()?, set)?
    };
    let report = density(&tree)?;
    let mut value = with_schema(&report);
    value["family"] = family.to_string().into();
    value["roots"] = json!(tree.roots().iter().collect::<Vec<_>>());
    Ok(Output::Json(value))
}

/// `7/5`, or `2-p/q` with the fraction kept unreduced.
fn certify_target(text: &str) -> Result<Value, Error> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let cert = match compact.strip_prefix("2-") {
        Some(frac) => {
            let (p, q) = frac
                .split_once('/')
                .and_then(|(p, q)| Some((p.parse::<u64>().ok()?, q.parse::<u64>().ok()?)))
                .ok_or_else(|| Error::ParseRational(text.to_string()))?;
            certify_dense_fraction(p, q)?
        }
        None => certify(&compact.parse::<Rational>()?)?,
    };
    let replayed = replay(&cert)?;
    let mut value = with_schema(&cert);
    value["replayed"] = json!(replayed.map(|r| r.to_string()));
    Ok(value)
}

fn exponent(action: ExponentCommand) -> Result<Output, Error> {
    match action {
        ExponentCommand::Certify { target } => Ok(Output::Json(certify_target(&target)?)),
        ExponentCommand::Replay { file } => {
            let text = read_input(&file)?;
            let cert = serde_json::from_str(&text).map_err(|e| Error::Parameter(format!("certificate: {e}")))?;
            let replayed = replay(&cert)?;
            Ok(Output::Json(json!({
                "schema": SCHEMA,
                "valid": replayed.is_some(),
                "value": replayed.map(|r| r.to_string()),
            })))
        }
        ExponentCommand::Regularity { s, b, k } => Ok(Output::Json(with_schema(regularity_constants(s, b, k)?))),
        ExponentCommand::Atlas { max_den } => Ok(Output::Text(atlas_csv(&atlas(max_den)?))),
    }
}

fn classify(args: ClassifyArgs) -> Result<Output, Error> {
    let g = read_graph(&args.graph)?;
    let mut cfg = ThresholdConfig::exact(args.l, args.k, args.s)?;
    if !args.thresholds.is_empty() {
        let table: BTreeMap<usize, Threshold> = args.thresholds.into_iter().collect();
        cfg = cfg.with_overrides(table)?;
    }
    let pc = classify_paths(&g, args.jmax, &cfg)?;
    let thresholds = cfg.thresholds(args.jmax)?;
    let mut value = json!({
        "schema": SCHEMA,
        "graph6": g.to_graph6(),
        "jmax": args.jmax,
        "L": args.l,
        "K": args.k,
        "s": args.s,
        "thresholds": thresholds[1..].iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "paths": pc.entries(),
    });
    if let Some(legs) = args.spider {
        let lengths = legs
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Error::Parameter(format!("bad leg lengths `{legs}`")))?;
        let sc = classify_spiders(&lengths, &cfg, &pc)?;
        value["spiders"] = json!(sc.entries());
    }
    Ok(Output::Json(value))
}
