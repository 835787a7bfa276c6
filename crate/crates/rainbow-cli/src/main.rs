//! `rainbow`: rainbow numbers of Z_n, extremal colorings, witnesses,
//! certification, and structural analysis.
//!
//! Exit codes: 0 success / rainbow-free, 1 witness found, 2 input error,
//! 3 certification bound refusal.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rainbow_core::certify::{certify_rb, desk_bound, CertifyError, CertifyOptions, Verdict};
use rainbow_core::construct::extremal_coloring;
use rainbow_core::format::{parse_coloring, write_coloring};
use rainbow_core::formulas::{factor_profile, rb_schur, rb_sidon};
use rainbow_core::group::{Coloring, LinearEquation, RainbowWitness};
use rainbow_core::reduce::{find_witness_by_reduction, reduce_once, Reduction};
use rainbow_core::solver::find_rainbow_witness;
use rainbow_core::analyzer;

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Rainbow numbers of cyclic groups")]
struct Cli {
    /// Emit structured JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EquationArgs {
    /// Equation by name.
    #[arg(long, default_value = "sidon", value_parser = ["sidon", "schur"])]
    eq: String,
    /// Generic equation coefficients, e.g. "1,1,-1"; overrides --eq.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<i64>>,
    /// Constant term for --coeffs.
    #[arg(long = "const", default_value_t = 0, requires = "coeffs")]
    constant: i64,
}

impl EquationArgs {
    fn equation(&self) -> Result<LinearEquation> {
        match &self.coeffs {
            Some(coeffs) => {
                LinearEquation::new(coeffs.clone(), self.constant).map_err(Into::into)
            }
            None if self.eq == "schur" => Ok(LinearEquation::schur()),
            None => Ok(LinearEquation::sidon()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute rb(Z_n) from the closed-form formula.
    Rb {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        eq: EquationArgs,
        /// Also print the factorization profile and formula instantiation.
        #[arg(long)]
        explain: bool,
    },
    /// Write the extremal rainbow-Sidon-free coloring of Z_n.
    Construct {
        #[arg(long)]
        n: u64,
        /// Output file; stdout when omitted.
        output: Option<PathBuf>,
    },
    /// Decide whether a coloring file is rainbow-free.
    Check {
        file: PathBuf,
        #[command(flatten)]
        eq: EquationArgs,
    },
    /// Extract a rainbow witness, by brute force or coset reduction.
    Witness {
        file: PathBuf,
        #[arg(long, default_value = "brute", value_parser = ["brute", "reduce"])]
        strategy: String,
        #[command(flatten)]
        eq: EquationArgs,
    },
    /// Exhaustively certify rb(Z_n) by searching every palette level.
    Certify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        eq: EquationArgs,
        /// Worker threads; defaults to available parallelism.
        #[arg(long)]
        threads: Option<usize>,
        /// Run past the desk-scale bound.
        #[arg(long)]
        allow_large: bool,
        /// Write the full per-level report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Structural reports on a coloring file.
    Analyze {
        file: PathBuf,
        /// Per-step dominant colors and dominance graph edges.
        #[arg(long)]
        dominance: bool,
        /// Positions of a cyclic color pattern, e.g. "1,1".
        #[arg(long, value_delimiter = ',')]
        pattern: Option<Vec<u32>>,
        /// Maximal strings over a set of 1 or 2 colors, e.g. "0,1".
        #[arg(long, value_delimiter = ',')]
        strings: Option<Vec<u32>>,
        /// Color table of the cosets of the subgroup of index t.
        #[arg(long)]
        cosets: Option<usize>,
    },
    /// Perform one coset reduction step through a prime divisor.
    Reduce {
        file: PathBuf,
        /// Prime divisor of the group order to reduce through.
        #[arg(long)]
        p: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Rb { n, eq, explain } => cmd_rb(*n, eq, *explain, cli.json),
        Command::Construct { n, output } => cmd_construct(*n, output.as_deref(), cli.json),
        Command::Check { file, eq } => cmd_check(file, eq, cli.json),
        Command::Witness { file, strategy, eq } => cmd_witness(file, strategy, eq, cli.json),
        Command::Certify { n, eq, threads, allow_large, report } => {
            cmd_certify(*n, eq, *threads, *allow_large, report.as_deref(), cli.json)
        }
        Command::Analyze { file, dominance, pattern, strings, cosets } => {
            cmd_analyze(file, *dominance, pattern.as_deref(), strings.as_deref(), *cosets)
        }
        Command::Reduce { file, p } => cmd_reduce(file, *p),
    }
}

fn read_coloring(path: &std::path::Path) -> Result<Coloring> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_coloring(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn witness_line(w: &RainbowWitness) -> String {
    let x = &w.elements;
    let eq = if w.equation.is_sidon() {
        format!("{}+{}={}+{}", x[0], x[1], x[2], x[3])
    } else if w.equation.is_schur() {
        format!("{}+{}={}", x[0], x[1], x[2])
    } else {
        format!("{x:?}")
    };
    format!("witness {eq} with colors {:?}", w.colors)
}

fn cmd_rb(n: u64, eq: &EquationArgs, explain: bool, json: bool) -> Result<ExitCode> {
    let equation = eq.equation()?;
    let rb = if equation.is_sidon() {
        if n < 1 {
            bail!("sidon requires n >= 1");
        }
        rb_sidon(n)
    } else if equation.is_schur() {
        rb_schur(n)?
    } else {
        bail!("no closed form for a generic equation; use certify");
    };
    if json {
        let profile = factor_profile(n).ok();
        println!("{}", serde_json::json!({ "n": n, "equation": equation, "rb": rb, "profile": profile }));
    } else {
        println!("rb(Z_{n}, {equation}) = {rb}");
        if explain {
            if let Ok(p) = factor_profile(n) {
                println!("factors: {:?}", p.factors);
                println!("p_m = {}, f1 = {}, f2 = {}", p.p_m, p.f1, p.f2);
                if equation.is_sidon() {
                    println!("rb = rb(Z_{}) + f1 + 2*f2 = {} + {} + {}", p.p_m, rb_sidon(p.p_m), p.f1, 2 * p.f2);
                }
            } else {
                println!("n = 1: convention");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(n: u64, output: Option<&std::path::Path>, json: bool) -> Result<ExitCode> {
    let c = extremal_coloring(n)?;
    let text = write_coloring(&c);
    match output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote Z_{n} coloring with {} colors to {}", c.palette(), path.display());
        }
        None if json => println!(
            "{}",
            serde_json::json!({ "n": n, "r": c.palette(), "colors": c.colors() })
        ),
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(file: &std::path::Path, eq: &EquationArgs, json: bool) -> Result<ExitCode> {
    let c = read_coloring(file)?;
    let equation = eq.equation()?;
    match find_rainbow_witness(&c, &equation) {
        None => {
            if json {
                println!("{}", serde_json::json!({ "verdict": "RAINBOW_FREE" }));
            } else {
                println!("RAINBOW_FREE");
            }
            Ok(ExitCode::SUCCESS)
        }
        Some(w) => {
            if json {
                println!("{}", serde_json::json!({ "verdict": "WITNESS", "witness": w }));
            } else {
                println!("{}", witness_line(&w));
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_witness(
    file: &std::path::Path,
    strategy: &str,
    eq: &EquationArgs,
    json: bool,
) -> Result<ExitCode> {
    let c = read_coloring(file)?;
    let equation = eq.equation()?;
    let witness = if strategy == "reduce" {
        if !equation.is_sidon() {
            bail!("--strategy reduce supports only the sidon equation");
        }
        let w = find_witness_by_reduction(&c);
        if let Some(w) = &w {
            w.validate(&c).map_err(|e| anyhow!("reduction produced an invalid witness: {e}"))?;
        }
        w
    } else {
        find_rainbow_witness(&c, &equation)
    };
    match witness {
        None => {
            println!("NONE");
            Ok(ExitCode::SUCCESS)
        }
        Some(w) => {
            if json {
                println!("{}", serde_json::to_string(&w)?);
            } else {
                println!("{}", witness_line(&w));
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_certify(
    n: usize,
    eq: &EquationArgs,
    threads: Option<usize>,
    allow_large: bool,
    report: Option<&std::path::Path>,
    json: bool,
) -> Result<ExitCode> {
    let equation = eq.equation()?;
    let bound_override = match std::env::var("RB_DESK_BOUND") {
        Ok(v) => Some(v.parse::<usize>().context("RB_DESK_BOUND must be an integer")?),
        Err(_) => None,
    };
    let bound = bound_override.unwrap_or_else(|| desk_bound(&equation));
    if n > bound && !allow_large {
        eprintln!("refusing n = {n} beyond the certification bound {bound}; pass --allow-large");
        return Ok(ExitCode::from(3));
    }
    let opts = CertifyOptions { threads, allow_large: true, bound_override, ..Default::default() };
    let (rb, reports) = match certify_rb(n, &equation, &opts) {
        Ok(out) => out,
        Err(e @ CertifyError::BoundExceeded { .. }) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(3));
        }
        Err(e) => return Err(e.into()),
    };
    if json {
        println!("{}", serde_json::json!({ "n": n, "equation": equation, "rb": rb }));
    } else {
        println!("rb(Z_{n}, {equation}) = {rb} (certified)");
        for rep in &reports {
            match (&rep.verdict, &rep.counterexample) {
                (Verdict::Counterexample, Some(c)) => println!(
                    "  r = {}: rainbow-free coloring {:?} ({} nodes, {} ms)",
                    rep.r, c.colors(), rep.stats.nodes_expanded, rep.stats.wall_ms
                ),
                _ => println!(
                    "  r = {}: all colorings have a rainbow solution ({} nodes, {} ms)",
                    rep.r, rep.stats.nodes_expanded, rep.stats.wall_ms
                ),
            }
        }
    }
    if let Some(path) = report {
        let payload = serde_json::json!({ "n": n, "equation": equation, "rb": rb, "levels": reports });
        std::fs::write(path, serde_json::to_string_pretty(&payload)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(
    file: &std::path::Path,
    dominance: bool,
    pattern: Option<&[u32]>,
    strings: Option<&[u32]>,
    cosets: Option<usize>,
) -> Result<ExitCode> {
    let c = read_coloring(file)?;
    let n = c.n();
    if dominance {
        for i in 1..n {
            let g = analyzer::dominance_graph(&c, i)?;
            let dom: Vec<u32> = g.covering_colors().into_iter().collect();
            println!("i = {i}: dominant {dom:?}, edges {:?}", g.edges);
        }
    }
    if let Some(pattern) = pattern {
        let hits = analyzer::find_pattern(&c, pattern);
        if hits.is_empty() {
            println!("pattern {pattern:?}: no occurrence");
        } else {
            println!("pattern {pattern:?}: positions {:?}", hits.into_iter().collect::<Vec<_>>());
        }
    }
    if let Some(strings) = strings {
        let colorset: BTreeSet<u32> = strings.iter().copied().collect();
        for s in analyzer::maximal_strings(&c, &colorset)? {
            println!("string start = {}, len = {}", s.start, s.len);
        }
    }
    if let Some(t) = cosets {
        for (i, colors) in analyzer::coset_color_table(&c, t)?.iter().enumerate() {
            println!("R_{i}: {:?}", colors.iter().collect::<Vec<_>>());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(file: &std::path::Path, p: usize) -> Result<ExitCode> {
    let c = read_coloring(file)?;
    match reduce_once(&c, p)? {
        Reduction::Step(step) => {
            println!("{}", serde_json::to_string_pretty(&step)?);
            Ok(ExitCode::SUCCESS)
        }
        Reduction::Witness(w) => {
            println!("{}", witness_line(&w));
            Ok(ExitCode::from(1))
        }
    }
}
