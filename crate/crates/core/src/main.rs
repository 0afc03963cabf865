//! Command-line surface: datum ingestion, crystal and global basis
//! computation, graph/table export, and the property-check runner.
//!
//! Exit codes: 0 success, 1 check-suite failure, 2 configuration or
//! validation error, 3 internal invariant violation, 4 solver
//! non-convergence (partial table emitted).

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use vtcrystal::cartan::{datum_from_json, CartanDatum, DominantWeight};
use vtcrystal::check::{run_suite, CheckConfig, SUITES};
use vtcrystal::crystal::{binf_crystal, export_dot, export_json, module_crystal, CrystalGraph};
use vtcrystal::error::Error;
use vtcrystal::global::is_integral_laurent;
use vtcrystal::halfalg::HalfAlgebra;
use vtcrystal::modules::Module;
use vtcrystal::oneparam::OneParamHalf;

#[derive(Parser)]
#[command(
    name = "vtcrystal",
    about = "Crystal bases and global bases for two-parameter quantum algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a crystal graph and export it.
    Crystal(CrystalArgs),
    /// Run a named property-check suite.
    Check(CheckArgs),
    /// Compute global basis elements per grade.
    Global(GlobalArgs),
}

#[derive(Args)]
struct CrystalArgs {
    /// Path to the datum JSON file ({"Lambda": [[..]], "labels": [..]})
    #[arg(long)]
    datum: PathBuf,
    /// Highest weight coordinates, comma separated (e.g. 1,0)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    hw: Option<Vec<i64>>,
    /// Compute the crystal of the negative half instead of a module
    #[arg(long)]
    binf: bool,
    /// Closure depth
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Output format: dot or json
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    datum: PathBuf,
    /// Suite name (serre, prop42, tensor-rule, ortho, star, lemma75, global, t1)
    #[arg(long)]
    suite: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    hw: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    hw2: Option<Vec<i64>>,
    #[arg(long)]
    binf: bool,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Seed for randomized checks
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// v-degree bound for the global solver
    #[arg(long, default_value_t = 0)]
    vbound: usize,
}

#[derive(Args)]
struct GlobalArgs {
    #[arg(long)]
    datum: PathBuf,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Output format: tsv or json
    #[arg(long, default_value = "tsv")]
    format: String,
    /// Also compare the t = 1 specialization against the one-parameter solver
    #[arg(long)]
    t1_compare: bool,
    /// v-degree bound for the solver (0 = 4 * depth^2)
    #[arg(long, default_value_t = 0)]
    vbound: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Crystal(args) => cmd_crystal(args),
        Command::Check(args) => cmd_check(args),
        Command::Global(args) => cmd_global(args),
    };
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(classify_error(&e))
        }
    }
}

fn classify_error(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } => 4,
        Error::Invariant(_) | Error::LatticeViolation { .. } => 3,
        _ => 2,
    }
}

fn load_datum(path: &PathBuf) -> Result<Arc<CartanDatum>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {}", path.display(), e)))?;
    datum_from_json(&text)
}

fn write_artifact(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{}", content),
    }
    Ok(())
}

fn build_graph(
    datum: &Arc<CartanDatum>,
    hw: &Option<Vec<i64>>,
    binf: bool,
    depth: usize,
) -> Result<CrystalGraph, Error> {
    if binf {
        let alg = Arc::new(HalfAlgebra::new(datum.clone()));
        binf_crystal(&alg, depth)
    } else {
        let hw = hw
            .clone()
            .ok_or_else(|| Error::Config("crystal needs --hw or --binf".into()))?;
        if hw.len() != datum.rank() {
            return Err(Error::Config(format!(
                "--hw has {} coordinates for rank {}",
                hw.len(),
                datum.rank()
            )));
        }
        let module = Module::highest_weight(datum.clone(), DominantWeight::new(hw)?, depth)?;
        if !module.is_complete() {
            eprintln!(
                "note: module not complete at depth {}; crystal is truncated",
                depth
            );
        }
        module_crystal(&module, depth)
    }
}

fn cmd_crystal(args: CrystalArgs) -> Result<ExitCode, Error> {
    let datum = load_datum(&args.datum)?;
    let graph = build_graph(&datum, &args.hw, args.binf, args.depth)?;
    let artifact = match args.format.as_str() {
        "dot" => export_dot(&graph),
        "json" => export_json(&graph)?,
        other => return Err(Error::Config(format!("unknown format '{}'", other))),
    };
    eprintln!(
        "crystal: {} nodes, {} edges",
        graph.node_count(),
        graph.edge_count()
    );
    write_artifact(&args.out, &artifact)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, Error> {
    let datum = load_datum(&args.datum)?;
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(Error::Config(format!(
            "unknown suite '{}'; valid suites: {}",
            args.suite,
            SUITES.join(", ")
        )));
    }
    let config = CheckConfig {
        hw: args.hw,
        hw2: args.hw2,
        binf: args.binf,
        depth: args.depth,
        seed: args.seed,
        vbound: if args.vbound == 0 {
            (4 * args.depth * args.depth).max(16)
        } else {
            args.vbound
        },
    };
    let report = run_suite(&args.suite, &datum, &config)?;
    if report.ok() {
        println!("{}: pass ({} checks)", args.suite, report.checked);
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "{}: FAIL ({} checks, {} failures)",
            args.suite,
            report.checked,
            report.failures.len()
        );
        for f in &report.failures {
            println!("  counterexample: {}", f);
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_global(args: GlobalArgs) -> Result<ExitCode, Error> {
    let datum = load_datum(&args.datum)?;
    let vbound = if args.vbound == 0 {
        (4 * args.depth * args.depth).max(16)
    } else {
        args.vbound
    };
    let alg = Arc::new(HalfAlgebra::new(datum.clone()));
    let graph = binf_crystal(&alg, args.depth)?;
    // solve grade by grade so a non-convergent grade still leaves a partial
    // table behind (exit 4)
    let mut basis = std::collections::BTreeMap::new();
    let mut nonconvergence: Option<Error> = None;
    let mut grades: Vec<Vec<i64>> = graph.nodes.iter().map(|n| n.xi.clone()).collect();
    grades.sort();
    grades.dedup();
    for xi in grades {
        let nodes = vtcrystal::global::grade_nodes::<vtcrystal::halfalg::HalfElt>(&graph, &xi)?;
        match vtcrystal::global::global_grade(&alg, &nodes, vbound) {
            Ok(g) => {
                basis.insert(xi, g);
            }
            Err(e @ Error::NonConvergence { .. }) => {
                eprintln!("warning: grade {:?} did not converge; table is partial", xi);
                nonconvergence = Some(e);
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let t1_results = if args.t1_compare {
        let oracle = OneParamHalf::new(datum.clone());
        let nodes = oracle.crystal(args.depth)?;
        let mut matched = Vec::new();
        for (xi, grade) in &basis {
            let height: usize = xi.iter().map(|&x| x.unsigned_abs() as usize).sum();
            if height == 0 {
                continue;
            }
            let content: Vec<i64> = xi.iter().map(|&x| -x).collect();
            let oracle_basis = oracle.canonical_basis(&nodes, &content, vbound)?;
            let (matches, report) =
                vtcrystal::global::t1_compare(&alg, grade, &oracle, &oracle_basis)?;
            if !report.ok() {
                return Err(Error::Invariant(format!(
                    "t=1 comparison failed at {:?}: {:?}",
                    xi, report.failures
                )));
            }
            for m in matches {
                matched.push((m.node, m.oracle_node));
            }
        }
        Some(matched)
    } else {
        None
    };

    let mut out = String::new();
    match args.format.as_str() {
        "tsv" => {
            out.push_str("grade\tnode\tmonomial\tcoefficient\tintegral\tt1_match\n");
            for (xi, grade) in &basis {
                for e in &grade.elements {
                    for (desc, coeff) in grade.slice.descriptors.iter().zip(&e.coeffs) {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mono = desc
                            .iter()
                            .map(|(l, c)| {
                                if *c == 1 {
                                    format!("f{}", l + 1)
                                } else {
                                    format!("f{}^({})", l + 1, c)
                                }
                            })
                            .collect::<Vec<_>>()
                            .join(" ");
                        let t1 = t1_results
                            .as_ref()
                            .and_then(|m| {
                                m.iter()
                                    .find(|(n, _)| *n == e.node)
                                    .map(|(_, o)| o.to_string())
                            })
                            .unwrap_or_else(|| "-".to_string());
                        out.push_str(&format!(
                            "{:?}\t{}\t{}\t{}\t{}\t{}\n",
                            xi,
                            e.node,
                            mono,
                            coeff,
                            is_integral_laurent(coeff),
                            t1
                        ));
                    }
                }
            }
        }
        "json" => {
            let mut doc = Vec::new();
            for (xi, grade) in &basis {
                let elements: Vec<serde_json::Value> = grade
                    .elements
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "node": e.node,
                            "monomial_expansion": grade
                                .slice
                                .descriptors
                                .iter()
                                .map(|d| d
                                    .iter()
                                    .map(|(l, c)| serde_json::json!([l + 1, c]))
                                    .collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                            "coeffs": e
                                .coeffs
                                .iter()
                                .map(|c| c.to_string())
                                .collect::<Vec<_>>(),
                            "t1_match": t1_results.as_ref().and_then(|m| m
                                .iter()
                                .find(|(n, _)| *n == e.node)
                                .map(|(_, o)| *o)),
                        })
                    })
                    .collect();
                doc.push(serde_json::json!({
                    "grade": xi,
                    "basis": elements,
                }));
            }
            out = serde_json::to_string_pretty(&doc)?;
            out.push('\n');
        }
        other => return Err(Error::Config(format!("unknown format '{}'", other))),
    }
    eprintln!(
        "global: {} grades, {} elements",
        basis.len(),
        basis.values().map(|g| g.elements.len()).sum::<usize>()
    );
    write_artifact(&args.out, &out)?;
    match nonconvergence {
        Some(_) => Ok(ExitCode::from(4)),
        None => Ok(ExitCode::SUCCESS),
    }
}
