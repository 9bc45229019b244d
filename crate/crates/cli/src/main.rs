use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use ribbonpoly::compose::{
    brute_force_z, brute_force_z_ab, compose_br_general, compose_br_planar, compose_tutte,
};
use ribbonpoly::knots::{format_jones, jones, kauffman_bracket, parse_pd, writhe};
use ribbonpoly::ribbon::{load_decomposition, load_graph, TwoDecomposition};
use ribbonpoly::statesum::{br_polynomial, tutte, z_multivariate, Budget};
use ribbonpoly::verify::{run_named, SuiteConfig, DEFAULT_SEED};
use ribbonpoly::{Error, MultiPoly};

/// Tutte and Bollobás-Riordan polynomials of ribbon graphs, their
/// composition over 2-decompositions, and Kauffman brackets of link diagrams.
#[derive(Parser)]
#[command(name = "ribbonpoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial of a ribbon graph given as JSON.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        poly: Poly,
    },
    /// Composed Z of a 2-decomposition given as JSON.
    Compose {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Also compute Z of the assembled graph and report MATCH or MISMATCH.
        #[arg(long)]
        check: bool,
        /// Override a slot's flip, as `edge=true` or `edge=false`.
        #[arg(long, value_name = "EDGE=BOOL")]
        flip: Vec<String>,
        /// Override a slot's end assignment, as `edge=swap` or `edge=default`.
        #[arg(long, value_name = "EDGE=ENDS")]
        ends: Vec<String>,
    },
    /// Run the seeded oracle-equivalence and identity suites.
    Verify {
        #[arg(long, default_value = "small")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Invariants of a link diagram in PD notation.
    #[command(group(ArgGroup::new("invariant").required(true).multiple(true)))]
    Knot {
        #[arg(long)]
        pd: PathBuf,
        #[arg(long, group = "invariant")]
        bracket: bool,
        #[arg(long, group = "invariant")]
        jones: bool,
        #[arg(long, group = "invariant")]
        writhe: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Poly {
    Z,
    Br,
    Tutte,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Tutte,
    Planar,
    General,
}

/// Exit status 2 for unreadable or malformed input, 1 for everything else.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidGraph(_)
        | Error::UnknownEdge(_)
        | Error::UnknownVertex(_)
        | Error::InvalidGap { .. }
        | Error::SameEndpoints(_) => 2,
        _ => 1,
    }
}

fn split_override<'a>(s: &'a str, flag: &str) -> Result<(&'a str, &'a str), Error> {
    s.split_once('=')
        .ok_or_else(|| Error::Parse(format!("--{flag} expects EDGE=VALUE, got `{s}`")))
}

fn apply_overrides(d: &mut TwoDecomposition, flips: &[String], ends: &[String]) -> Result<(), Error> {
    for f in flips {
        let (edge, value) = split_override(f, "flip")?;
        let e = d.template().edge_index(edge)?;
        d.slots_mut()[e].flip = match value {
            "true" => true,
            "false" => false,
            other => return Err(Error::Parse(format!("--flip value must be true or false, got `{other}`"))),
        };
    }
    for s in ends {
        let (edge, value) = split_override(s, "ends")?;
        let e = d.template().edge_index(edge)?;
        d.slots_mut()[e].swap_ends = match value {
            "swap" => true,
            "default" => false,
            other => return Err(Error::Parse(format!("--ends value must be swap or default, got `{other}`"))),
        };
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let budget = Budget::from_env();
    match cli.command {
        Command::Compute { input, poly } => {
            let g = load_graph(&input)?;
            let p = match poly {
                Poly::Z => z_multivariate(&g, budget)?,
                Poly::Br => br_polynomial(&g, budget)?,
                Poly::Tutte => tutte(&g, budget)?,
            };
            println!("{p}");
        }
        Command::Compose {
            decomp,
            method,
            check,
            flip,
            ends,
        } => {
            let mut d = load_decomposition(&decomp)?;
            apply_overrides(&mut d, &flip, &ends)?;
            let z = match method {
                Method::Tutte => compose_tutte(&d, budget)?,
                Method::Planar => compose_br_planar(&d, budget)?,
                Method::General => compose_br_general(&d, budget)?,
            };
            println!("{z}");
            if check {
                let brute: MultiPoly = match method {
                    Method::Tutte => brute_force_z_ab(&d, budget)?,
                    _ => brute_force_z(&d, budget)?,
                };
                if brute == z {
                    println!("MATCH");
                } else {
                    println!("MISMATCH");
                    println!("brute force: {brute}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Verify { suite, seed } => {
            let reports = run_named(&suite, &SuiteConfig::small(seed))?;
            let mut ok = true;
            for r in &reports {
                println!("{}", r.summary());
                for n in &r.notes {
                    println!("  {n}");
                }
                ok &= r.passed();
            }
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Knot {
            pd,
            bracket,
            jones: want_jones,
            writhe: want_writhe,
        } => {
            let d = parse_pd(&std::fs::read_to_string(&pd)?)?;
            if bracket {
                println!("{}", kauffman_bracket(&d, budget)?);
            }
            if want_jones {
                println!("{}", format_jones(&jones(&d, budget)?));
            }
            if want_writhe {
                println!("{}", writhe(&d));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
