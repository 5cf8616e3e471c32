use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leavitt::classifier::{classify, cross_validate, Agreement, CrossReport};
use leavitt::expr::parse_element;
use leavitt::graph::Graph;
use leavitt::lpa::LeavittAlgebra;
use leavitt::matrix::{
    char2_laurent_index3_check, char2_laurent_sharpness, corollary_field, corollary_laurent,
    witness_laurent_nonsolvable, witness_nge3, witness_nilpotent_char2, MatrixError, MatrixReport,
};
use leavitt::scalar::{FieldElem, FieldSpec, LaurentPoly};
use leavitt::series::{Mode, ProbeError, ProbeOptions, Structure};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNAVAILABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "leavitt", version, about = "Leavitt path algebra workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Human-readable output instead of JSON
    #[arg(long)]
    text: bool,
    /// Write the report to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Exact,
    Truncated,
}

#[derive(Copy, Clone, ValueEnum)]
enum StructureArg {
    Lie,
    Jordan,
}

impl From<StructureArg> for Structure {
    fn from(s: StructureArg) -> Self {
        match s {
            StructureArg::Lie => Structure::Lie,
            StructureArg::Jordan => Structure::Jordan,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Case {
    Prop3a,
    Prop3b,
    Prop3cUpper,
    Prop3cSharp,
    Prop3d,
    CorField,
    CorLaurent,
}

#[derive(Subcommand)]
enum Command {
    /// Predict solvability and nilpotency from the graph shape
    Classify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "char")]
        characteristic: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the prediction with a computed derived series
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, value_enum, default_value = "truncated")]
        mode: ModeArg,
        #[arg(long, default_value_t = 6)]
        weight: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value = "lie")]
        structure: StructureArg,
        /// Keep at most this many rows per step in truncated mode
        #[arg(long)]
        max_rows: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Run a matrix-ring witness or property case
    Matrix {
        #[arg(long = "case", value_enum)]
        case: Case,
        #[arg(long)]
        field: Option<FieldSpec>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
        /// Matrix degree
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exponent bound for Laurent entries
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        max_rows: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Print the normal form of an expression
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        output: Output,
    },
    /// Cross-validate every graph file in a directory
    Corpus {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "F2,F3,Q")]
        fields: Vec<FieldSpec>,
        #[arg(long, default_value_t = 6)]
        weight: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Row cap for truncated probes on cyclic graphs
        #[arg(long, default_value_t = 120)]
        max_rows: usize,
        #[command(flatten)]
        output: Output,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Graph::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_scalar(field: FieldSpec, s: &str) -> Result<FieldElem, Failure> {
    let bad = || usage(format!("invalid scalar `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    field
        .ratio(&n, &d)
        .map_err(|e| usage(format!("invalid scalar `{s}`: {e}")))
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                text_lines(x, &key, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{prefix}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                text_lines(x, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn emit<T: Serialize>(report: &T, output: &Output) -> Result<(), Failure> {
    let value = serde_json::to_value(report).expect("report serializes");
    let body = if output.text {
        let mut s = String::new();
        text_lines(&value, "", &mut s);
        s
    } else {
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    };
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn probe_options(mode: ModeArg, weight: usize, depth: usize, max_rows: Option<usize>) -> ProbeOptions {
    ProbeOptions {
        mode: match mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Truncated => Mode::Truncated { weight },
        },
        max_depth: depth,
        max_rows,
    }
}

fn probe_failure(e: ProbeError) -> Failure {
    Failure {
        code: EXIT_UNAVAILABLE,
        msg: e.to_string(),
    }
}

fn matrix_failure(e: MatrixError) -> Failure {
    usage(e.to_string())
}

fn run_matrix(
    case: Case,
    field: Option<FieldSpec>,
    (a, b, c): (&str, &str, &str),
    n: Option<usize>,
    steps: Option<usize>,
    samples: usize,
    seed: u64,
    bound: Option<usize>,
    max_rows: Option<usize>,
) -> Result<MatrixReport, Failure> {
    match case {
        Case::Prop3a => {
            let f = field.unwrap_or(FieldSpec::Rational);
            let (a, b, c) = (parse_scalar(f, a)?, parse_scalar(f, b)?, parse_scalar(f, c)?);
            witness_nge3(f, n.unwrap_or(3), &a, &b, &c, steps.unwrap_or(10)).map_err(matrix_failure)
        }
        Case::Prop3b => {
            witness_nilpotent_char2(field.unwrap_or(FieldSpec::Prime(2)), steps.unwrap_or(10)).map_err(matrix_failure)
        }
        Case::Prop3cUpper => {
            char2_laurent_index3_check(field.unwrap_or(FieldSpec::Prime(2)), samples, bound.unwrap_or(3), seed)
                .map_err(matrix_failure)
        }
        Case::Prop3cSharp => char2_laurent_sharpness(field.unwrap_or(FieldSpec::Prime(2)))
            .map(|(r, _)| r)
            .map_err(matrix_failure),
        Case::Prop3d => {
            let f = field.unwrap_or(FieldSpec::Rational);
            let x = LaurentPoly::x(f);
            witness_laurent_nonsolvable(&(&x - &x.involute()), steps.unwrap_or(6)).map_err(matrix_failure)
        }
        Case::CorField => {
            let f = field.unwrap_or(FieldSpec::Rational);
            Ok(corollary_field(f, n.unwrap_or(2), steps.unwrap_or(10)))
        }
        Case::CorLaurent => {
            let f = field.unwrap_or(FieldSpec::Prime(2));
            if n.is_some_and(|n| n != 2) {
                return Err(usage("cor-laurent is defined for degree 2"));
            }
            Ok(corollary_laurent(
                f,
                bound.unwrap_or(2),
                steps.unwrap_or(4),
                max_rows.or(Some(200)),
            ))
        }
    }
}

#[derive(Serialize)]
struct EvalReport {
    expression: String,
    field: String,
    result: String,
}

#[derive(Serialize)]
struct CorpusEntry {
    file: String,
    field: String,
    status: Option<Agreement>,
    error: Option<String>,
    report: Option<CrossReport>,
}

#[derive(Serialize)]
struct CorpusSummary {
    graphs: usize,
    agree: usize,
    consistent: usize,
    fail: usize,
    errors: usize,
    entries: Vec<CorpusEntry>,
}

fn run_corpus(
    dir: &Path,
    fields: &[FieldSpec],
    weight: usize,
    depth: usize,
    max_rows: Option<usize>,
) -> Result<CorpusSummary, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let jobs: Vec<(&PathBuf, FieldSpec)> = files.iter().flat_map(|f| fields.iter().map(move |&k| (f, k))).collect();
    let entries: Vec<CorpusEntry> = jobs
        .par_iter()
        .map(|&(path, field)| {
            let file = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let graph = match load_graph(path) {
                Ok(g) => g,
                Err(f) => {
                    return CorpusEntry {
                        file,
                        field: field.to_string(),
                        status: None,
                        error: Some(f.msg),
                        report: None,
                    }
                }
            };
            let mode = if graph.is_acyclic() {
                ModeArg::Exact
            } else {
                ModeArg::Truncated
            };
            let opts = probe_options(mode, weight, depth, max_rows);
            match cross_validate(&graph, field, Structure::Lie, opts) {
                Ok(r) => CorpusEntry {
                    file,
                    field: field.to_string(),
                    status: Some(r.status),
                    error: None,
                    report: Some(r),
                },
                Err(e) => CorpusEntry {
                    file,
                    field: field.to_string(),
                    status: None,
                    error: Some(e.to_string()),
                    report: None,
                },
            }
        })
        .collect();
    let count = |s: Agreement| entries.iter().filter(|e| e.status == Some(s)).count();
    Ok(CorpusSummary {
        graphs: files.len(),
        agree: count(Agreement::Agree),
        consistent: count(Agreement::Consistent),
        fail: count(Agreement::Fail),
        errors: entries.iter().filter(|e| e.error.is_some()).count(),
        entries,
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify {
            graph,
            characteristic,
            output,
        } => {
            FieldSpec::with_characteristic(characteristic).map_err(|e| usage(e.to_string()))?;
            let g = load_graph(&graph)?;
            emit(&classify(&g, characteristic), &output)?;
            Ok(0)
        }
        Command::Verify {
            graph,
            field,
            mode,
            weight,
            depth,
            structure,
            max_rows,
            output,
        } => {
            let g = load_graph(&graph)?;
            let opts = probe_options(mode, weight, depth, max_rows);
            let report = cross_validate(&g, field, structure.into(), opts).map_err(probe_failure)?;
            emit(&report, &output)?;
            Ok(if report.status == Agreement::Fail { EXIT_FAIL } else { 0 })
        }
        Command::Matrix {
            case,
            field,
            a,
            b,
            c,
            n,
            steps,
            samples,
            seed,
            bound,
            max_rows,
            output,
        } => {
            let report = run_matrix(case, field, (&a, &b, &c), n, steps, samples, seed, bound, max_rows)?;
            emit(&report, &output)?;
            Ok(if report.passed() { 0 } else { EXIT_FAIL })
        }
        Command::Eval {
            graph,
            field,
            expr,
            output,
        } => {
            let alg = LeavittAlgebra::new(load_graph(&graph)?, field);
            let x = parse_element(&alg, &expr).map_err(|e| usage(e.to_string()))?;
            if output.text {
                let line = format!("{x}\n");
                match &output.out {
                    Some(p) => fs::write(p, line).map_err(|e| usage(format!("{}: {e}", p.display())))?,
                    None => print!("{line}"),
                }
            } else {
                let report = EvalReport {
                    expression: expr,
                    field: field.to_string(),
                    result: x.to_string(),
                };
                emit(&report, &output)?;
            }
            Ok(0)
        }
        Command::Corpus {
            dir,
            fields,
            weight,
            depth,
            max_rows,
            output,
        } => {
            let summary = run_corpus(&dir, &fields, weight, depth, Some(max_rows))?;
            emit(&summary, &output)?;
            Ok(if summary.fail > 0 {
                EXIT_FAIL
            } else if summary.errors > 0 {
                EXIT_USAGE
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
