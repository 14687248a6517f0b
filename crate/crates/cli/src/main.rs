use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use torus_bundles::appell_humbert::checks::check_group_laws;
use torus_bundles::appell_humbert::decompose;
use torus_bundles::classify::{
    build_deformed_iwasawa, build_iwasawa, classify_with, render_report, ClassifyOptions, Format, ProblemInstance,
};
use torus_bundles::invariants::{cohomology, deformation};
use torus_bundles::lattice::{image_dimension, kernel_of_form, pfaffian_pencil};
use torus_bundles::Error;

#[derive(Parser)]
#[command(name = "tbclass", version, about = "Classify principal torus bundles over complex tori")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    format: OutputFormat,

    /// Problem instance (JSON); read from stdin when omitted.
    #[arg(long, global = true)]
    instance: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance.
    Validate,
    /// Print the blocks B′, B″ and the Riemann obstruction.
    Decompose,
    /// Cohomology and deformation invariants (requires the Riemann relation).
    Invariants,
    /// Pfaffian of the pencil of A (m = 2, d = 1).
    Pencil,
    /// Full classification report.
    Classify {
        /// Search for (V, U) satisfying the Riemann relation when missing (heuristic).
        #[arg(long)]
        find_witness: bool,
        /// Seed for the witness search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the Iwasawa instance.
    Iwasawa {
        /// Use the structure with B′ = 0 instead of the standard one.
        #[arg(long)]
        deformed: bool,
    },
    /// Check the group-model laws on random rational points.
    GroupCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

enum Failure {
    Input(String),
    Precondition(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_malformed_input() {
            Failure::Input(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

fn load(path: &Option<PathBuf>) -> Result<ProblemInstance, Failure> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(ProblemInstance::from_json(&text)?)
}

fn structures(inst: &ProblemInstance) -> Result<(&torus_bundles::PeriodSubspace, &torus_bundles::PeriodSubspace), Failure> {
    match (&inst.v, &inst.u) {
        (Some(v), Some(u)) => Ok((v, u)),
        _ => Err(Failure::Input("this command needs both V and U".into())),
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let text = matches!(cli.format, OutputFormat::Text);
    match &cli.command {
        Command::Iwasawa { deformed } => {
            let inst = if *deformed { build_deformed_iwasawa() } else { build_iwasawa() };
            Ok(inst.to_json() + "\n")
        }
        Command::Validate => {
            let inst = load(&cli.instance)?;
            let v = inst.v.as_ref().map(|v| v.orientation_scalar().to_string());
            let u = inst.u.as_ref().map(|u| u.orientation_scalar().to_string());
            if text {
                let mut out = format!("valid: true\nm: {}\nd: {}\n", inst.a.m, inst.a.d);
                if let Some(v) = v {
                    let _ = writeln!(out, "orientation scalar V: {v}");
                }
                if let Some(u) = u {
                    let _ = writeln!(out, "orientation scalar U: {u}");
                }
                Ok(out)
            } else {
                Ok(pretty(&json!({
                    "valid": true,
                    "m": inst.a.m,
                    "d": inst.a.d,
                    "orientation_V": v,
                    "orientation_U": u,
                })))
            }
        }
        Command::Decompose => {
            let inst = load(&cli.instance)?;
            let (v, u) = structures(&inst)?;
            let summary = decompose(&inst.a, v, u)?.summary();
            if text {
                let mut out = String::new();
                let _ = writeln!(out, "riemann relation: {}", if summary.riemann_ok { "holds" } else { "fails" });
                for (name, blocks) in [
                    ("B'", &summary.bprime),
                    ("B''", &summary.bdoubleprime),
                    ("obstruction", &summary.obstruction),
                ] {
                    for (j, b) in blocks.iter().enumerate() {
                        let rows: Vec<String> = b
                            .iter()
                            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
                            .collect();
                        let _ = writeln!(out, "{name}[{}]: [{}]", j + 1, rows.join("; "));
                    }
                }
                Ok(out)
            } else {
                Ok(pretty(&serde_json::to_value(&summary).expect("serializable")))
            }
        }
        Command::Invariants => {
            let inst = load(&cli.instance)?;
            let (v, u) = structures(&inst)?;
            let dec = decompose(&inst.a, v, u)?;
            let c = cohomology(&dec)?;
            let d = deformation(&dec)?;
            if text {
                let mut out = String::new();
                let _ = writeln!(out, "parallelizable: {}", c.parallelizable);
                let _ = writeln!(out, "h0_omega1: {}", c.h0_omega1);
                let _ = writeln!(out, "closed forms cokernel: {}", c.h0_closed_coker);
                let _ = writeln!(out, "h1_O: {}", c.h1_o);
                let _ = writeln!(out, "h2_O: {} (E3_02 = {}, E3_20 = {}, E3_11 = {})", c.h2_o, c.e3_02, c.e3_20, c.e3_11);
                let _ = writeln!(out, "G rank: {}", d.g_rank);
                let _ = writeln!(out, "tangent dim (Appell-Humbert space): {}", d.tangent_dim_tb);
                let _ = writeln!(out, "tangent dim (complete family): {}", d.tangent_dim_complete);
                let _ = writeln!(out, "smooth: {}", d.smooth);
                let _ = writeln!(out, "kodaira-spencer surjectivity: {}", d.ks_surjective_case);
                let _ = writeln!(out, "not_kaehler: {}", d.not_kaehler);
                Ok(out)
            } else {
                Ok(pretty(&json!({ "cohomology": c, "deformation": d })))
            }
        }
        Command::Pencil => {
            let inst = load(&cli.instance)?;
            let p = pfaffian_pencil(&inst.a)?;
            let kernel = kernel_of_form(&inst.a).dim;
            let image = image_dimension(&inst.a);
            if text {
                Ok(format!(
                    "pfaffian: {}\nverdict: {}\ndiscriminant: {}\nkernel dim: {kernel}\nimage dim: {image}\n",
                    p.form,
                    p.real_point_verdict.as_str(),
                    p.discriminant
                ))
            } else {
                Ok(pretty(&json!({ "pencil": p, "kernel_dim": kernel, "image_dim": image })))
            }
        }
        Command::Classify { find_witness, seed } => {
            let inst = load(&cli.instance)?;
            let options = ClassifyOptions {
                find_witness: find_witness.then_some(*seed),
            };
            let report = classify_with(&inst, options)?;
            let format = if text { Format::Text } else { Format::Json };
            Ok(render_report(&report, format))
        }
        Command::GroupCheck { seed, points } => {
            let inst = load(&cli.instance)?;
            let pair = match (&inst.v, &inst.u) {
                (Some(v), Some(u)) => Some((v, u)),
                _ => None,
            };
            let report = check_group_laws(&inst.a, pair, *seed, *points)?;
            let out = if text {
                let mut out = String::new();
                for l in &report.laws {
                    let _ = writeln!(out, "{}: {}/{}", l.law, l.passed, l.points);
                }
                let _ = writeln!(out, "inversion counterexamples: {}", report.inversion_counterexamples);
                out
            } else {
                pretty(&serde_json::to_value(&report).expect("serializable"))
            };
            if report.all_passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Check("some group laws failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
