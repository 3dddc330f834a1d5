//! Command-line entry point. Every subcommand reads/writes the documented
//! JSON formats and reports through a machine-parseable JSON document that
//! echoes its own configuration. Exit codes: 0 definite answer, 1 error,
//! 2 inconclusive (budget exhausted or window-inconclusive).

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rado::coloring::Coloring;
use rado::matrix::{columns_property_bounded, verify_certificate, SparseIntMatrix};
use rado::proof::{execute_proof, ProofParams};
use rado::search::{
    dpll, export_cnf, forced, min_forcing_n, parse_dimacs, solve_external, ForcedVerdict,
    MinForcing, SatOutcome,
};
use rado::systems::{
    gen_bhl_kernel, gen_dh_pow2, gen_dh_truncation, gen_finite_system, gen_nearmiss_kernel,
    LinearSystem,
};
use rado::windows::{
    check_new_lemma, check_symmetric_lemma, check_translated_lemma, diffset, filter_above,
    iterate, scale, sumset, window_density, LemmaVerdict, Window, WindowSet,
};
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "rado", about = "computational Ramsey theory workbench", version)]
struct Cli {
    /// Cap on worker threads (current engines are single-threaded;
    /// accepted for forward compatibility and echoed in reports).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Render a human-readable summary alongside the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct SearchArgs {
    /// System JSON file.
    #[arg(long)]
    system: PathBuf,
    /// Number of colors r.
    #[arg(long)]
    colors: usize,
    /// Color the window [1..N].
    #[arg(long)]
    window: usize,
    /// Variables range over [1..B].
    #[arg(long)]
    var_bound: usize,
    /// Node budget for the coloring search.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide the columns property for a matrix file.
    CheckColumns {
        #[arg(long)]
        matrix: PathBuf,
        /// Enumeration bound on the number of columns.
        #[arg(long, default_value_t = 12)]
        bound: usize,
    },
    /// Generate one of the system families as system JSON.
    GenSystem {
        /// One of: dh, dh-pow2, bhl, nearmiss, finite.
        #[arg(long)]
        family: String,
        #[arg(long)]
        nmax: usize,
        /// Comma-separated coefficients a_1,a_2,... (unused for dh-pow2).
        #[arg(long, default_value = "")]
        coeffs: String,
    },
    /// Window-set arithmetic: sum, diff, iterate, scale, filter-above.
    Sumset {
        #[arg(long)]
        op: String,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        out_lo: i64,
        #[arg(long, allow_negative_numbers = true)]
        out_hi: i64,
    },
    /// Exact window density |S ∩ [1..n]| / n.
    Density {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        n: i64,
    },
    /// Finite-window lemma verifiers: symmetric, translated, new.
    CheckLemma {
        #[arg(long)]
        lemma: String,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_lo: Option<usize>,
        #[arg(long)]
        n_hi: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        out_lo: i64,
        #[arg(long, allow_negative_numbers = true)]
        out_hi: i64,
    },
    /// Decide whether every r-coloring of [1..N] admits a witness.
    Forced {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Least forcing window N up to a cap.
    MinN {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Emit the avoiding-coloring encoding as DIMACS CNF.
    ExportCnf {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 5_000_000)]
        clause_cap: usize,
        /// Write the DIMACS text here (the JSON report still goes to --out).
        #[arg(long)]
        cnf_out: Option<PathBuf>,
    },
    /// Run an external SAT solver on the encoding and verify its answer.
    Solve {
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 5_000_000)]
        clause_cap: usize,
        /// Solver command; defaults to $RADO_SOLVER.
        #[arg(long)]
        solver: Option<String>,
    },
    /// Execute the constructive proof against a coloring file.
    RunProof {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        window: usize,
        /// Dense threshold as P/Q (default 1/(2r)).
        #[arg(long)]
        theta: Option<String>,
        #[arg(long, default_value_t = 64)]
        lmax: usize,
        #[arg(long, default_value_t = 12)]
        qmax: i64,
    },
    /// Built-in DPLL on a DIMACS file; speaks SAT-competition output.
    Dpll { file: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn parse_coeffs(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| anyhow!("bad coefficient {t:?}: {e}")))
        .collect()
}

fn load_json(path: &PathBuf) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

fn load_system(path: &PathBuf) -> Result<LinearSystem> {
    LinearSystem::from_json(&load_json(path)?)
        .with_context(|| format!("invalid system in {}", path.display()))
}

fn load_set(path: &PathBuf) -> Result<WindowSet> {
    WindowSet::from_json(&load_json(path)?)
        .with_context(|| format!("invalid window set in {}", path.display()))
}

struct Report {
    config: serde_json::Value,
    result: serde_json::Value,
    pretty_lines: Vec<String>,
    exit: i32,
}

fn emit(cli_out: &Option<PathBuf>, pretty: bool, report: Report) -> Result<i32> {
    let doc = json!({ "config": report.config, "result": report.result });
    let text = serde_json::to_string_pretty(&doc)?;
    match cli_out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    if pretty {
        for line in &report.pretty_lines {
            eprintln!("{line}");
        }
    }
    Ok(report.exit)
}

fn run(cli: Cli) -> Result<i32> {
    let threads = cli.threads;
    let report = match cli.command {
        Cmd::CheckColumns { matrix, bound } => {
            let a = SparseIntMatrix::from_json(&load_json(&matrix)?)?;
            let cert = columns_property_bounded(&a, bound)?;
            let (result, pretty, exit) = match cert {
                Some(cert) => {
                    let valid = verify_certificate(&a, &cert)?;
                    if !valid {
                        bail!("internal error: produced certificate failed verification");
                    }
                    (
                        json!({ "columns_property": true, "certificate": cert.one_based() }),
                        format!("columns property holds: {:?}", cert.one_based()),
                        0,
                    )
                }
                None => (
                    json!({ "columns_property": false }),
                    "columns property does not hold".to_string(),
                    0,
                ),
            };
            Report {
                config: json!({
                    "subcommand": "check-columns",
                    "matrix": matrix.display().to_string(),
                    "bound": bound,
                    "threads": threads,
                }),
                result,
                pretty_lines: vec![pretty],
                exit,
            }
        }
        Cmd::GenSystem {
            family,
            nmax,
            coeffs,
        } => {
            let a = parse_coeffs(&coeffs)?;
            let system = match family.as_str() {
                "dh" => gen_dh_truncation(nmax, &a)?,
                "dh-pow2" => gen_dh_pow2(nmax)?,
                "bhl" => gen_bhl_kernel(nmax, &a)?,
                "nearmiss" => gen_nearmiss_kernel(nmax, &a)?,
                "finite" => gen_finite_system(nmax, &a)?,
                other => bail!("unknown family {other:?} (use dh, dh-pow2, bhl, nearmiss, finite)"),
            };
            Report {
                config: json!({
                    "subcommand": "gen-system",
                    "family": family,
                    "nmax": nmax,
                    "coeffs": a,
                    "threads": threads,
                }),
                result: system.to_json(),
                pretty_lines: vec![format!(
                    "{} rows, {} variables",
                    system.matrix.n_rows(),
                    system.variables.len()
                )],
                exit: 0,
            }
        }
        Cmd::Sumset {
            op,
            a,
            b,
            k,
            m,
            t,
            out_lo,
            out_hi,
        } => {
            let set_a = load_set(&a)?;
            let out = Window::new(out_lo, out_hi)?;
            let result_set = match op.as_str() {
                "sum" | "diff" => {
                    let b_path = b.ok_or_else(|| anyhow!("--b required for {op}"))?;
                    let set_b = load_set(&b_path)?;
                    if op == "sum" {
                        sumset(&set_a, &set_b, out)
                    } else {
                        diffset(&set_a, &set_b, out)
                    }
                }
                "iterate" => iterate(k.ok_or_else(|| anyhow!("--k required"))?, &set_a, out)?,
                "scale" => scale(m.ok_or_else(|| anyhow!("--m required"))?, &set_a, out),
                "filter-above" => filter_above(&set_a, t.ok_or_else(|| anyhow!("--t required"))?),
                other => bail!("unknown op {other:?}"),
            };
            let mut result = result_set.to_json();
            result["clipped"] = json!(result_set.clipped());
            Report {
                config: json!({
                    "subcommand": "sumset", "op": op, "out_lo": out_lo, "out_hi": out_hi,
                    "k": k, "m": m, "t": t, "threads": threads,
                }),
                result,
                pretty_lines: vec![format!("{} members", result_set.len())],
                exit: 0,
            }
        }
        Cmd::Density { set, n } => {
            let s = load_set(&set)?;
            let d = window_density(&s, n)?;
            Report {
                config: json!({ "subcommand": "density", "n": n, "threads": threads }),
                result: json!({ "density": format!("{}/{}", d.numer(), d.denom()) }),
                pretty_lines: vec![format!("density proxy at n = {n}: {d}")],
                exit: 0,
            }
        }
        Cmd::CheckLemma {
            lemma,
            set,
            n,
            n_lo,
            n_hi,
            t,
            m,
            out_lo,
            out_hi,
        } => {
            let s = load_set(&set)?;
            let out = Window::new(out_lo, out_hi)?;
            let report = match lemma.as_str() {
                "symmetric" => check_symmetric_lemma(
                    &s,
                    n.ok_or_else(|| anyhow!("--n required"))?,
                    out,
                )?,
                "translated" => check_translated_lemma(
                    &s,
                    n_lo.ok_or_else(|| anyhow!("--n-lo required"))?,
                    n_hi.ok_or_else(|| anyhow!("--n-hi required"))?,
                    out,
                )?,
                "new" => check_new_lemma(
                    &s,
                    t.unwrap_or(0),
                    n.ok_or_else(|| anyhow!("--n required"))?,
                    m.ok_or_else(|| anyhow!("--m required"))?,
                    out,
                )?,
                other => bail!("unknown lemma {other:?} (use symmetric, translated, new)"),
            };
            let exit = match &report.verdict {
                LemmaVerdict::HoldsOnWindow { .. } | LemmaVerdict::Fails { .. } => 0,
                LemmaVerdict::WindowInconclusive { .. } => 2,
            };
            Report {
                config: json!({
                    "subcommand": "check-lemma", "lemma": lemma, "threads": threads,
                    "out_lo": out_lo, "out_hi": out_hi,
                }),
                result: serde_json::to_value(&report)?,
                pretty_lines: vec![format!("{:?}", report.verdict)],
                exit,
            }
        }
        Cmd::Forced { search } => {
            let system = load_system(&search.system)?;
            let res = forced(
                &system,
                search.colors,
                search.window,
                search.var_bound,
                search.budget,
            )?;
            let (result, exit) = match &res.verdict {
                ForcedVerdict::Forced => (json!({ "verdict": "forced" }), 0),
                ForcedVerdict::Avoidable(c) => (
                    json!({ "verdict": "avoidable", "avoiding_coloring": c.to_json() }),
                    0,
                ),
                ForcedVerdict::Unknown { budget } => {
                    (json!({ "verdict": "unknown", "budget": budget }), 2)
                }
            };
            Report {
                config: search_config("forced", &search, threads),
                result: with_stats(result, res.stats.nodes),
                pretty_lines: vec![format!("{:?}", res.verdict)],
                exit,
            }
        }
        Cmd::MinN { search } => {
            let system = load_system(&search.system)?;
            let res = min_forcing_n(
                &system,
                search.colors,
                search.window,
                search.var_bound,
                search.budget,
            )?;
            let (result, exit) = match res {
                MinForcing::Found(n) => (json!({ "min_forcing_n": n }), 0),
                MinForcing::NotWithin(cap) => {
                    (json!({ "min_forcing_n": null, "searched_up_to": cap }), 0)
                }
                MinForcing::Unknown { at_n } => {
                    (json!({ "min_forcing_n": null, "unknown_at_n": at_n }), 2)
                }
            };
            Report {
                config: search_config("min-n", &search, threads),
                result,
                pretty_lines: vec![],
                exit,
            }
        }
        Cmd::ExportCnf {
            search,
            clause_cap,
            cnf_out,
        } => {
            let system = load_system(&search.system)?;
            let cnf = export_cnf(
                &system,
                search.colors,
                search.window,
                search.var_bound,
                clause_cap,
            )?;
            let dimacs = cnf.to_dimacs();
            if let Some(path) = &cnf_out {
                std::fs::write(path, &dimacs)?;
            }
            Report {
                config: search_config("export-cnf", &search, threads),
                result: json!({
                    "n_vars": cnf.n_vars,
                    "n_clauses": cnf.clauses.len(),
                    "dimacs": if cnf_out.is_some() { json!(null) } else { json!(dimacs) },
                }),
                pretty_lines: vec![format!(
                    "{} variables, {} clauses",
                    cnf.n_vars,
                    cnf.clauses.len()
                )],
                exit: 0,
            }
        }
        Cmd::Solve {
            search,
            clause_cap,
            solver,
        } => {
            let solver = solver
                .or_else(|| std::env::var("RADO_SOLVER").ok())
                .ok_or_else(|| anyhow!("no solver: pass --solver or set RADO_SOLVER"))?;
            let system = load_system(&search.system)?;
            let cnf = export_cnf(
                &system,
                search.colors,
                search.window,
                search.var_bound,
                clause_cap,
            )?;
            let outcome = solve_external(&system, &cnf, search.var_bound, &solver)?;
            let result = match &outcome {
                SatOutcome::Sat(c) => json!({
                    "verdict": "avoidable",
                    "avoiding_coloring": c.to_json(),
                }),
                SatOutcome::Unsat => json!({ "verdict": "forced" }),
            };
            Report {
                config: search_config("solve", &search, threads),
                result,
                pretty_lines: vec![format!("{outcome:?}")],
                exit: 0,
            }
        }
        Cmd::RunProof {
            coloring,
            coeffs,
            nmax,
            window,
            theta,
            lmax,
            qmax,
        } => {
            let a = parse_coeffs(&coeffs)?;
            let col = Coloring::from_json(&load_json(&coloring)?, Some(window))?;
            if col.n() != window {
                bail!(
                    "coloring covers [1..{}] but --window is {window}",
                    col.n()
                );
            }
            let theta_pair = match &theta {
                None => None,
                Some(s) => {
                    let (p, q) = s
                        .split_once('/')
                        .ok_or_else(|| anyhow!("theta must be P/Q"))?;
                    Some((p.trim().parse::<i64>()?, q.trim().parse::<i64>()?))
                }
            };
            let params = ProofParams {
                q_max: qmax,
                l_max: lmax,
                theta: theta_pair,
            };
            let trace = execute_proof(&col, &a, nmax, &params)?;
            let exit = if trace.success { 0 } else { 2 };
            let pretty_lines = trace
                .render_text()
                .lines()
                .map(|l| l.to_string())
                .collect();
            Report {
                config: json!({
                    "subcommand": "run-proof",
                    "coloring": coloring.display().to_string(),
                    "coeffs": a,
                    "nmax": nmax,
                    "window": window,
                    "params": params,
                    "threads": threads,
                }),
                result: serde_json::to_value(&trace)?,
                pretty_lines,
                exit,
            }
        }
        Cmd::Dpll { file } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("cannot read {}", file.display()))?;
            let (n_vars, clauses) = parse_dimacs(&text)?;
            match dpll(n_vars, &clauses) {
                Some(model) => {
                    println!("s SATISFIABLE");
                    let mut line = String::from("v");
                    for (i, val) in model.iter().enumerate() {
                        let lit = if *val { i as i64 + 1 } else { -(i as i64 + 1) };
                        line.push_str(&format!(" {lit}"));
                    }
                    line.push_str(" 0");
                    println!("{line}");
                    return Ok(10);
                }
                None => {
                    println!("s UNSATISFIABLE");
                    return Ok(20);
                }
            }
        }
    };
    emit(&cli.out, cli.pretty, report)
}

fn search_config(subcommand: &str, search: &SearchArgs, threads: usize) -> serde_json::Value {
    json!({
        "subcommand": subcommand,
        "system": search.system.display().to_string(),
        "colors": search.colors,
        "window": search.window,
        "var_bound": search.var_bound,
        "budget": search.budget,
        "threads": threads,
    })
}

fn with_stats(mut result: serde_json::Value, nodes: u64) -> serde_json::Value {
    result["stats"] = json!({ "nodes": nodes });
    result
}
