use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sizematch::bounds::bound_report_with_cap;
use sizematch::io;
use sizematch::realize::verify_realization;
use sizematch::selftest::{self, Outcome, SelftestConfig};
use sizematch::{extract_diagram, gen, matching_distance, stability_probe, Error};

#[derive(Parser)]
#[command(
    name = "sizematch",
    version,
    about = "Reduced size functions and matching distance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the cornerpoint diagram of a graph given by vertex and edge CSV files.
    Diagram {
        vertices: PathBuf,
        edges: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Matching distance between two diagram JSON files.
    Dist {
        first: PathBuf,
        second: PathBuf,
        /// Also print an optimal matching.
        #[arg(long)]
        witness: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Lower-bound chain for two graphs: jump bound, matching distance and
    /// the exact isomorphism distance when small enough.
    Bound {
        vertices1: PathBuf,
        edges1: PathBuf,
        vertices2: PathBuf,
        edges2: PathBuf,
        /// Largest vertex count for the exact computation (0 disables it).
        #[arg(long, default_value_t = 9)]
        cap: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build two rectangle fields realizing the given diagrams.
    Realize {
        first: PathBuf,
        second: PathBuf,
        /// Subdivisions per grid row used for verification.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        refine: u32,
        /// Write the JSON document here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Random perturbations of a graph's values against the stability bound.
    Stability {
        vertices: PathBuf,
        edges: PathBuf,
        #[arg(long, env = "SIZEMATCH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, env = "SIZEMATCH_SEED", default_value_t = 0)]
        seed: u64,
        /// Instances per suite.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Size limit for oracle-backed suites (0 skips them).
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Disconnected { .. }
        | Error::EmptyGraph
        | Error::NonIsomorphic
        | Error::NotIsomorphism(_)
        | Error::PerturbationTooLarge { .. }
        | Error::SizeCap { .. }
        | Error::DegenerateSquare { .. }
        | Error::Realization(_) => 3,
        Error::Invariant(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Diagram {
            vertices,
            edges,
            format,
        } => {
            let d = extract_diagram(&io::read_size_pair(&vertices, &edges)?);
            match format {
                Format::Json => println!("{}", io::diagram_to_json(&d)),
                Format::Csv => print!("{}", io::diagram_to_csv(&d)),
            }
            Ok(0)
        }
        Command::Dist {
            first,
            second,
            witness,
            format,
        } => {
            let (d1, d2) = (io::read_diagram(&first)?, io::read_diagram(&second)?);
            let (dist, matching) = matching_distance(&d1, &d2);
            println!("{dist}");
            if witness {
                match format {
                    Format::Json => println!("{}", io::matching_to_json(&matching)),
                    Format::Csv => print!("{}", io::matching_to_csv(&matching, &d1, &d2)),
                }
            }
            Ok(0)
        }
        Command::Bound {
            vertices1,
            edges1,
            vertices2,
            edges2,
            cap,
            format,
        } => {
            let sp1 = io::read_size_pair(&vertices1, &edges1)?;
            let sp2 = io::read_size_pair(&vertices2, &edges2)?;
            let report = bound_report_with_cap(&sp1, &sp2, cap)?;
            match format {
                Format::Json => println!("{}", io::bound_report_to_json(&report)),
                Format::Csv => {
                    let exact = report
                        .exact_pseudo_distance
                        .map_or(String::new(), |e| e.to_string());
                    println!("earlier_bound_s,d_match,exact_pseudo_distance");
                    println!("{},{},{}", report.earlier_bound_s, report.d_match, exact);
                    let (d1, d2) = (extract_diagram(&sp1), extract_diagram(&sp2));
                    print!("{}", io::matching_to_csv(&report.matching, &d1, &d2));
                }
            }
            Ok(0)
        }
        Command::Realize {
            first,
            second,
            refine,
            output,
        } => {
            let (d1, d2) = (io::read_diagram(&first)?, io::read_diagram(&second)?);
            let (phi, psi, params, report) = verify_realization(&d1, &d2, refine as usize)?;
            let doc = serde_json::json!({
                "phi": phi.to_json(),
                "psi": psi.to_json(),
                "swapped": params.swapped,
                "report": {
                    "first_roundtrip": report.first_roundtrip,
                    "second_roundtrip": report.second_roundtrip,
                    "refinement_stable": report.refinement_stable,
                    "gap": report.gap.to_string(),
                    "d_match": report.d_match,
                    "tight": report.tight,
                },
            });
            let text = doc.to_string();
            match output {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Stability {
            vertices,
            edges,
            seed,
            trials,
        } => {
            let sp = io::read_size_pair(&vertices, &edges)?;
            let mut rng = gen::rng(seed);
            let mut violations = 0;
            let mut worst = 0.0f64;
            for _ in 0..trials {
                let (eps, psi) = gen::perturbation(&mut rng, sp.values());
                let (dist, holds) = stability_probe(&sp, &psi, eps)?;
                worst = worst.max(dist / eps);
                violations += usize::from(!holds);
            }
            println!(
                "{}",
                serde_json::json!({
                    "trials": trials,
                    "violations": violations,
                    "max_ratio": worst,
                })
            );
            Ok(if violations == 0 { 0 } else { 1 })
        }
        Command::Selftest { seed, cases, cap } => {
            let results = selftest::run(&SelftestConfig { seed, cases, cap });
            let mut failed = false;
            for r in &results {
                match &r.outcome {
                    Outcome::Pass { cases } => println!("{:<20} pass ({cases} cases)", r.name),
                    Outcome::Skipped => println!("{:<20} skipped", r.name),
                    Outcome::Fail { counterexample } => {
                        failed = true;
                        println!("{:<20} FAIL", r.name);
                        println!("  counterexample: {counterexample}");
                    }
                }
            }
            Ok(if failed { 1 } else { 0 })
        }
    }
}
