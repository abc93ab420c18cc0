//! Command-line interface.
//!
//! Subcommands: `cluster`, `ingest`, `trust`, `verify`, `compare`. Exit
//! status is 0 on success, 1 on validation failure, and 2 when a
//! verification suite reports a failing check. Machine-readable output goes
//! to stdout only; diagnostics go to stderr.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::dendrogram::{cut, ultrametric_to_dendrogram};
use crate::error::{Error, Result};
use crate::io::{
    self, dendrogram_value, export, network_csv, network_value, partition_value, report_value,
    ultrametric_value, Exportable, Format, Policy, RunConfig,
};
use crate::matrix::SquareMatrix;
use crate::methods::{Method, UltrametricMatrix};
use crate::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(
    name = "asymclust",
    version,
    about = "Hierarchical clustering for asymmetric dissimilarity networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a dissimilarity matrix into ultrametrics, trees, and cuts
    Cluster(ClusterArgs),
    /// Convert a message-count edge list into a dissimilarity matrix
    Ingest(IngestArgs),
    /// Classify node pairs against the trust bounds at a resolution
    Trust(TrustArgs),
    /// Run the verification suites
    Verify(VerifyArgs),
    /// Compare two clustering results (trees or ultrametrics)
    Compare(CompareArgs),
}

#[derive(Args)]
struct ClusterArgs {
    /// Matrix file (CSV or JSON)
    input: PathBuf,
    /// reciprocal | nonreciprocal | single-linkage | both
    #[arg(long, default_value = "both")]
    method: String,
    /// Write the ultrametric matrix here (.csv or .json); with `both`, the
    /// method name is inserted before the extension
    #[arg(long)]
    output_ultrametric: Option<PathBuf>,
    /// Write the merge tree here (.json, .nwk, or .newick)
    #[arg(long)]
    output_tree: Option<PathBuf>,
    /// Cut resolution; may be repeated
    #[arg(long = "cut", value_name = "DELTA", value_parser = parse_resolution)]
    cuts: Vec<f64>,
}

#[derive(Args)]
struct IngestArgs {
    /// Edge-list CSV with header `source,target,count`
    input: PathBuf,
    /// inverse-normalized | scc
    #[arg(long, default_value = "inverse-normalized")]
    policy: Policy,
    /// Output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// Stdout format: csv | json
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct TrustArgs {
    /// Matrix file (CSV or JSON)
    input: PathBuf,
    /// Trust resolution
    #[arg(long, value_parser = parse_resolution)]
    delta: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// axioms | oracle | sandwich | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Cases per randomized check
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct CompareArgs {
    left: PathBuf,
    right: PathBuf,
}

fn parse_resolution(text: &str) -> std::result::Result<f64, String> {
    let value: f64 = text.parse().map_err(|_| format!("{text:?} is not a number"))?;
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err("resolution must be non-negative and finite".to_string())
    }
}

/// Run the CLI against an argument list and return the process exit status.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(status) => status,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Cluster(args) => run_cluster(args),
        Command::Ingest(args) => run_ingest(args),
        Command::Trust(args) => run_trust(args),
        Command::Verify(args) => run_verify(args),
        Command::Compare(args) => run_compare(args),
    }
}

fn parse_methods(name: &str) -> Result<Vec<Method>> {
    if name == "both" {
        // Canonical order: the lower bound first.
        Ok(vec![Method::Nonreciprocal, Method::Reciprocal])
    } else {
        Ok(vec![name.parse()?])
    }
}

/// Insert the method name before the extension when several methods write
/// to the same requested path.
fn method_path(base: &Path, method: Method, multiple: bool) -> PathBuf {
    if !multiple {
        return base.to_path_buf();
    }
    let extension = base.extension().and_then(|e| e.to_str()).unwrap_or("");
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    let name = if extension.is_empty() {
        format!("{stem}.{}", method.name())
    } else {
        format!("{stem}.{}.{extension}", method.name())
    };
    base.with_file_name(name)
}

fn file_format(path: &Path, object: &'static str) -> Result<Format> {
    let extension = path.extension().and_then(|e| e.to_str()).ok_or_else(|| {
        Error::UnsupportedFormat { format: "(no extension)".to_string(), object }
    })?;
    Format::from_extension(extension)
}

fn run_cluster(args: ClusterArgs) -> Result<i32> {
    let net = io::load_matrix(&args.input)?;
    let config = RunConfig {
        methods: parse_methods(&args.method)?,
        cuts: args.cuts,
        ..RunConfig::default()
    };
    let multiple = config.methods.len() > 1;

    let mut documents = Vec::new();
    for &method in &config.methods {
        let ultrametric = method.run(&net)?;
        let tree = ultrametric_to_dendrogram(&ultrametric);
        let cuts: Vec<Value> = config
            .cuts
            .iter()
            .map(|&delta| partition_value(&cut(&tree, delta)))
            .collect();

        if let Some(base) = &args.output_ultrametric {
            let path = method_path(base, method, multiple);
            let format = file_format(&path, "ultrametric")?;
            fs::write(&path, export(Exportable::Ultrametric(&ultrametric), format)?)?;
        }
        if let Some(base) = &args.output_tree {
            let path = method_path(base, method, multiple);
            let format = file_format(&path, "dendrogram")?;
            fs::write(&path, export(Exportable::Dendrogram(&tree), format)?)?;
        }

        documents.push(json!({
            "cuts": cuts,
            "method": method.name(),
            "tree": dendrogram_value(&tree),
            "ultrametric": ultrametric_value(&ultrametric),
        }));
    }
    println!("{}", serde_json::to_string_pretty(&json!({ "methods": documents }))?);
    Ok(0)
}

fn run_ingest(args: IngestArgs) -> Result<i32> {
    let edges = io::load_edge_list(&args.input)?;
    let net = io::counts_to_dissimilarity(&edges, args.policy)?;
    match &args.output {
        Some(path) => {
            let text = match file_format(path, "matrix")? {
                Format::Csv => network_csv(&net),
                Format::Json => serde_json::to_string_pretty(&network_value(&net))?,
                Format::Newick => {
                    return Err(Error::UnsupportedFormat {
                        format: "newick".to_string(),
                        object: "matrix",
                    })
                }
            };
            fs::write(path, text)?;
        }
        None => match args.format {
            Format::Csv => print!("{}", network_csv(&net)),
            Format::Json => println!("{}", serde_json::to_string_pretty(&network_value(&net))?),
            Format::Newick => {
                return Err(Error::UnsupportedFormat {
                    format: "newick".to_string(),
                    object: "matrix",
                })
            }
        },
    }
    Ok(0)
}

fn run_trust(args: TrustArgs) -> Result<i32> {
    let net = io::load_matrix(&args.input)?;
    let report = io::trust_bounds(&net, args.delta);
    println!("{}", serde_json::to_string_pretty(&report.to_json_value())?);
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> Result<i32> {
    let suite = match args.suite.as_str() {
        "axioms" => Suite::Axioms,
        "oracle" => Suite::Oracle,
        "sandwich" => Suite::Sandwich,
        "all" => Suite::All,
        other => {
            return Err(Error::UnsupportedFormat {
                format: other.to_string(),
                object: "suite",
            })
        }
    };
    let outcome = run_suite(suite, args.trials, args.seed);
    let reports: Vec<Value> = outcome.reports.iter().map(report_value).collect();
    let document = json!({
        "passed": outcome.passed(),
        "reports": reports,
        "seed": outcome.seed,
        "suite": outcome.suite,
        "trials": outcome.trials,
    });
    println!("{}", serde_json::to_string_pretty(&document)?);
    Ok(if outcome.passed() { 0 } else { 2 })
}

fn run_compare(args: CompareArgs) -> Result<i32> {
    let left = io::load_comparable(&args.left)?;
    let right = io::load_comparable(&args.right)?;
    let aligned = align(&left, &right)?;

    let n = left.len();
    let max_abs_difference = left.values().max_abs_difference(&aligned);

    let mut resolutions = left.values().distinct_off_diagonal();
    resolutions.extend(aligned.distinct_off_diagonal());
    resolutions.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    resolutions.dedup();

    // Rand index per resolution: the fraction of unordered pairs on which
    // the two partitions agree (co-clustered in both or separated in both).
    let agreement: Vec<Value> = resolutions
        .iter()
        .map(|&delta| {
            let mut matched = 0u64;
            let mut total = 0u64;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += 1;
                    let together_left = left.get(i, j) <= delta;
                    let together_right = aligned.get(i, j) <= delta;
                    if together_left == together_right {
                        matched += 1;
                    }
                }
            }
            let value = if total == 0 { 1.0 } else { matched as f64 / total as f64 };
            json!({ "agreement": value, "resolution": delta })
        })
        .collect();

    let document = json!({
        "max_abs_difference": max_abs_difference,
        "partition_agreement": agreement,
    });
    println!("{}", serde_json::to_string_pretty(&document)?);
    Ok(0)
}

/// Permute `right` into `left`'s label order; the label sets must coincide.
fn align(left: &UltrametricMatrix, right: &UltrametricMatrix) -> Result<SquareMatrix> {
    if left.len() != right.len() {
        return Err(Error::LabelMismatch);
    }
    let perm: Vec<usize> = left
        .labels()
        .iter()
        .map(|label| {
            right
                .labels()
                .iter()
                .position(|r| r == label)
                .ok_or(Error::LabelMismatch)
        })
        .collect::<Result<_>>()?;
    let n = left.len();
    let mut out = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, right.get(perm[i], perm[j]));
        }
    }
    Ok(out)
}
