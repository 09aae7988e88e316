mod render;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qqa::catalog::{self, Catalog, Metadata, SetKind};
use qqa::constructors::{construct, Method};
use qqa::transforms::{invert_outputs, permute_outputs, permute_variables};
use qqa::{baselib, Bits, Permutation, Qqa, StateVector, TruthTable};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "qqa",
    version,
    about = "Simulate, verify, transform and compose quantum query algorithms"
)]
struct Cli {
    /// Tolerance for probability comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformMethod {
    Invert,
    PermuteOutputs,
    PermuteVars,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algorithm against a Boolean function on every input.
    Verify {
        /// Algorithm document path or `builtin:<name>`.
        #[arg(long)]
        algorithm: String,
        /// Function name (`equality3`, `majority:5`, ...) or truth-table CSV path.
        #[arg(long)]
        function: String,
        /// Fail unless the worst-case success probability reaches this value.
        #[arg(long)]
        expect_p: Option<f64>,
        /// Fail unless the algorithm is exact.
        #[arg(long)]
        expect_exact: bool,
    },
    /// Print the state after each query for one or all inputs.
    Trace {
        #[arg(long)]
        algorithm: String,
        /// Input bit string, x1 first.
        #[arg(long, required_unless_present = "all_inputs", conflicts_with = "all_inputs")]
        input: Option<String>,
        #[arg(long)]
        all_inputs: bool,
    },
    /// Derive a new exact algorithm and write it as a document.
    Transform {
        #[arg(long)]
        algorithm: String,
        #[arg(long, value_enum)]
        method: TransformMethod,
        /// Permutation as 1-based images, e.g. `2,1,3`.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compose exact algorithms into a bounded-error one.
    Construct {
        /// One of `and`, `or`, `maj-even4`, `maj3`.
        #[arg(long)]
        method: String,
        /// Comma-separated algorithm paths or builtins.
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate function sets and summarize them.
    Catalog {
        /// `qfunc3`, `qfunc4`, `and`, `or`, `maj_even4`, `majority3` or `all`.
        #[arg(long)]
        set: String,
        /// Write every entry to this CSV file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Sensitivity of a Boolean function, with a witness input.
    Sensitivity {
        #[arg(long)]
        function: String,
    },
}

struct Loaded {
    algorithm: Qqa,
    name: String,
}

fn load_algorithm(source: &str) -> Result<Loaded, String> {
    let algorithm = match source.strip_prefix("builtin:") {
        Some(name) => {
            baselib::builtin(name).map_err(|e| format!("{e} (known: {})", baselib::BUILTIN_NAMES.join(", ")))?
        }
        None => catalog::load(Path::new(source)).map_err(|e| format!("{source}: {e}"))?,
    };
    Ok(Loaded {
        algorithm,
        name: source.to_string(),
    })
}

fn load_function(source: &str) -> Result<TruthTable, String> {
    let path = Path::new(source);
    if path.is_file() {
        let file = File::open(path).map_err(|e| format!("{source}: {e}"))?;
        TruthTable::read_csv(file).map_err(|e| format!("{source}: {e}"))
    } else {
        TruthTable::parse_named(source).map_err(|e| e.to_string())
    }
}

fn parse_sigma(sigma: Option<&str>) -> Result<Permutation, String> {
    let text = sigma.ok_or("--sigma is required for this method")?;
    let images = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("--sigma: {t:?} is not a positive integer"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Permutation::from_one_based(&images).map_err(|e| format!("--sigma: {e}"))
}

fn set_kinds(set: &str) -> Result<Vec<SetKind>, String> {
    if set == "all" {
        Ok(SetKind::ALL.to_vec())
    } else {
        set.parse::<SetKind>().map(|k| vec![k]).map_err(|e| e.to_string())
    }
}

fn pairs(s: &StateVector) -> Vec<[f64; 2]> {
    s.entries().iter().map(|z| [z.re, z.im]).collect()
}

fn print_json(value: &impl Serialize) -> Result<(), String> {
    println!("{}", serde_json::to_string_pretty(value).map_err(|e| e.to_string())?);
    Ok(())
}

fn save(a: &Qqa, name: String, provenance: String, out: &Path) -> Result<(), String> {
    catalog::save(a, Metadata { name, provenance }, out)
        .map(|_| ())
        .map_err(|e| format!("{}: {e}", out.display()))
}

fn describe(a: &Qqa) -> String {
    let computes = a
        .computed_function()
        .map(|f| format!(", computes {}", f.to_hex()))
        .unwrap_or_default();
    format!(
        "{} amplitudes, {} variables, queries = {}{computes}",
        a.amplitudes(),
        a.arity(),
        a.query_count()
    )
}

/// Runs one command. `Ok(false)` means a requested check failed.
fn run(cli: Cli) -> Result<bool, String> {
    let tol = cli.tolerance;
    if !(0.0..0.5).contains(&tol) {
        return Err(format!("--tolerance must lie in [0, 0.5), got {tol}"));
    }
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Verify {
            algorithm,
            function,
            expect_p,
            expect_exact,
        } => {
            if let Some(p) = expect_p {
                if !(0.0..=1.0).contains(&p) {
                    return Err(format!("--expect-p must lie in [0, 1], got {p}"));
                }
            }
            let a = load_algorithm(&algorithm)?;
            let f = load_function(&function)?;
            let report = a.algorithm.verify(&f).map_err(|e| e.to_string())?;
            let p = report.worst_case_p;
            let exact = p >= 1.0 - tol;
            let passed = match (expect_exact, expect_p) {
                (true, _) if !exact => false,
                (_, Some(want)) => p >= want - tol,
                _ => p > 0.5 + tol,
            };
            let kind = if exact {
                "exact"
            } else if p > 0.5 + tol {
                "bounded-error"
            } else {
                "not computed"
            };
            if json {
                print_json(&json!({
                    "algorithm": a.name,
                    "function": function,
                    "result": kind,
                    "exact": exact,
                    "worst_case_p": p,
                    "worst_input": report.worst_input().to_string(),
                    "queries": report.queries,
                    "passed": passed,
                }))?;
            } else if exact {
                println!("exact, p = {p:.6}, queries = {}", report.queries);
            } else {
                println!(
                    "{kind}, p = {p:.6}, queries = {}, worst input {}",
                    report.queries,
                    report.worst_input()
                );
            }
            if !passed {
                eprintln!("verification failed for {}", a.name);
            }
            Ok(passed)
        }
        Command::Trace {
            algorithm,
            input,
            all_inputs,
        } => {
            let a = load_algorithm(&algorithm)?;
            let n = a.algorithm.arity();
            let inputs: Vec<Bits> = match input {
                Some(text) => {
                    let x: Bits = text.parse().map_err(|e: qqa::Error| format!("--input: {e}"))?;
                    if x.len() != n {
                        return Err(format!("--input: expected {n} bits, got {}", x.len()));
                    }
                    vec![x]
                }
                None if all_inputs => Bits::all(n).collect(),
                None => unreachable!("clap requires --input or --all-inputs"),
            };
            let traces = inputs
                .iter()
                .map(|x| a.algorithm.trace(x))
                .collect::<qqa::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            if json {
                let columns = render::query_columns(&a.algorithm);
                let rows: Vec<_> = traces
                    .iter()
                    .map(|t| {
                        let p_one = a
                            .algorithm
                            .run(&t.input)
                            .map(|r| r.probabilities.one)
                            .unwrap_or(f64::NAN);
                        json!({
                            "input": t.input.to_string(),
                            "states": columns.iter().map(|&(_, k)| pairs(&t.states[k])).collect::<Vec<_>>(),
                            "final_state": pairs(t.final_state()),
                            "result": render::most_likely(p_one),
                            "p_one": p_one,
                        })
                    })
                    .collect();
                let names: Vec<&str> = columns.iter().map(|(name, _)| name.as_str()).collect();
                print_json(&json!({ "columns": names, "rows": rows }))?;
            } else {
                print!("{}", render::trace_table(&a.algorithm, &traces));
            }
            Ok(true)
        }
        Command::Transform {
            algorithm,
            method,
            sigma,
            out,
        } => {
            let sigma = match method {
                TransformMethod::Invert => None,
                _ => Some(parse_sigma(sigma.as_deref())?),
            };
            let a = load_algorithm(&algorithm)?;
            let (label, result) = match (method, &sigma) {
                (TransformMethod::Invert, _) => ("invert", invert_outputs(&a.algorithm)),
                (TransformMethod::PermuteOutputs, Some(s)) => ("permute-outputs", permute_outputs(&a.algorithm, s)),
                (TransformMethod::PermuteVars, Some(s)) => ("permute-vars", permute_variables(&a.algorithm, s)),
                _ => unreachable!("sigma parsed above"),
            };
            let b = result.map_err(|e| e.to_string())?;
            let provenance = match &sigma {
                Some(s) => format!("{label}[{s}]({})", a.name),
                None => format!("{label}({})", a.name),
            };
            save(&b, label.to_string(), provenance.clone(), &out)?;
            if json {
                print_json(&json!({
                    "out": out.display().to_string(),
                    "provenance": provenance,
                    "amplitudes": b.amplitudes(),
                    "arity": b.arity(),
                    "queries": b.query_count(),
                    "truth_table_hex": b.computed_function().ok().map(|f| f.to_hex()),
                }))?;
            } else {
                println!("wrote {}: {}", out.display(), describe(&b));
            }
            Ok(true)
        }
        Command::Construct { method, inputs, out } => {
            let method: Method = method.parse().map_err(|e: qqa::Error| e.to_string())?;
            if inputs.len() != method.input_count() {
                return Err(format!(
                    "{method} takes {} input algorithms, got {}",
                    method.input_count(),
                    inputs.len()
                ));
            }
            let loaded = inputs
                .iter()
                .map(|s| load_algorithm(s))
                .collect::<Result<Vec<_>, _>>()?;
            let algs: Vec<Qqa> = loaded.iter().map(|l| l.algorithm.clone()).collect();
            let built = construct(method, &algs).map_err(|e| e.to_string())?;
            let report = built.algorithm.verify(&built.target).map_err(|e| e.to_string())?;
            let passed = report.worst_case_p >= built.guaranteed_p - tol;
            let names: Vec<&str> = loaded.iter().map(|l| l.name.as_str()).collect();
            let provenance = format!("{method}({})", names.join(", "));
            save(&built.algorithm, method.to_string(), provenance.clone(), &out)?;
            if json {
                print_json(&json!({
                    "out": out.display().to_string(),
                    "provenance": provenance,
                    "amplitudes": built.algorithm.amplitudes(),
                    "arity": built.algorithm.arity(),
                    "queries": built.queries,
                    "worst_case_p": report.worst_case_p,
                    "guaranteed_p": built.guaranteed_p,
                    "truth_table_hex": built.target.to_hex(),
                    "passed": passed,
                }))?;
            } else {
                println!(
                    "wrote {}: {method}, {} amplitudes, {} variables, queries = {}, p = {:.6} (guaranteed {:.6})",
                    out.display(),
                    built.algorithm.amplitudes(),
                    built.algorithm.arity(),
                    built.queries,
                    report.worst_case_p,
                    built.guaranteed_p
                );
            }
            Ok(passed)
        }
        Command::Catalog { set, export } => {
            let kinds = set_kinds(&set)?;
            let catalog = Catalog::generate_only(&kinds).map_err(|e| e.to_string())?;
            if let Some(path) = &export {
                let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
                catalog
                    .write_csv(BufWriter::new(file))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let report = catalog.report();
            if json {
                print_json(&report)?;
            } else {
                println!("{report}");
            }
            Ok(true)
        }
        Command::Sensitivity { function } => {
            let f = load_function(&function)?;
            let s = f.sensitivity();
            let vars: Vec<usize> = s.sensitive_variables.iter().map(|k| k + 1).collect();
            if json {
                print_json(&json!({
                    "function": function,
                    "arity": f.arity(),
                    "sensitivity": s.value,
                    "witness": s.witness.to_string(),
                    "sensitive_variables": vars,
                }))?;
            } else {
                let names: Vec<String> = vars.iter().map(|k| format!("x{k}")).collect();
                println!(
                    "s = {}, witness {}, sensitive variables {}",
                    s.value,
                    s.witness,
                    if names.is_empty() {
                        "none".to_string()
                    } else {
                        names.join(", ")
                    }
                );
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
