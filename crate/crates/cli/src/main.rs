use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use minindex::oracle::DEFAULT_BUDGET;
use minindex::reports::{self, catalog_verify, global_report, parse_ram, sweep_report, AnalyzeOptions, EXIT_INPUT};
use minindex::{Error, ExtensionSpec};

#[derive(Parser)]
#[command(name = "minindex", version, about = "Minimal group-ring indices of p-adic Galois extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile, closed forms and optionally the oracle for one extension spec.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
        /// Also run the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Enumerate on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Closed-form invariants for every valid jump with e_K <= E.
    Sweep {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e_max: u64,
        #[arg(long, default_value_t = 1)]
        f: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Runs the built-in catalog through formulas and oracle.
    CatalogVerify {
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_expectation: bool,
    },
    /// v_p(m(L/Q)) for an absolutely abelian field from its ramification data.
    Global {
        #[arg(long)]
        degree: u64,
        /// `p:n,d[,f]`: ramification index p^n·d, local inertia degree f.
        #[arg(long, num_args = 1.., required = true)]
        ram: Vec<String>,
    },
}

fn write_json(target: &Path, text: &str) -> Result<(), Error> {
    if target == Path::new("-") {
        println!("{text}");
        Ok(())
    } else {
        std::fs::write(target, format!("{text}\n")).map_err(|e| Error::InvalidData(format!("{}: {e}", target.display())))
    }
}

fn emit(json: Option<&Path>, text: String, value: String) -> Result<(), Error> {
    match json {
        Some(p) if p == Path::new("-") => write_json(p, &value),
        Some(p) => {
            print!("{text}");
            write_json(p, &value)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Analyze { spec, oracle, precision, budget, json, serial } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Error::InvalidSpec(format!("{}: {e}", spec.display())))?;
            let spec = ExtensionSpec::from_json(&text)?;
            let opts = AnalyzeOptions { oracle, precision, budget, parallel: !serial };
            let doc = reports::analyze(&spec, &opts)?;
            emit(json.as_deref(), doc.render_text(), doc.to_json())?;
            Ok(doc.exit_code())
        }
        Command::Sweep { p, e_max, f, json } => {
            let rep = sweep_report(p, e_max, f)?;
            emit(json.as_deref(), rep.render_text(), serde_json::to_string_pretty(&rep).expect("serializes"))?;
            Ok(rep.exit_code())
        }
        Command::CatalogVerify { budget, precision, json, corrupt_expectation } => {
            let opts = AnalyzeOptions { precision, budget, ..AnalyzeOptions::default() };
            let sum = catalog_verify(&opts, corrupt_expectation)?;
            emit(json.as_deref(), sum.render_text(), serde_json::to_string_pretty(&sum).expect("serializes"))?;
            Ok(sum.exit_code)
        }
        Command::Global { degree, ram } => {
            let ram = ram.iter().map(|s| parse_ram(s)).collect::<Result<Vec<_>, _>>()?;
            let rep = global_report(degree, &ram)?;
            println!("{}", serde_json::to_string_pretty(&rep).expect("serializes"));
            Ok(if rep.agree { reports::EXIT_OK } else { reports::EXIT_DISAGREEMENT })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            reports::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
