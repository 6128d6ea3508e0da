use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod run;

#[derive(Parser)]
#[command(name = "koszulkit", version, about = "Koszul duals, twisted complexes and heart checks for quiver dg algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug, Serialize)]
pub struct Opts {
    /// Q or Fp; overrides the `field` line of the input
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Lowest allowed degree of a realized basis element
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub min_degree: Option<i64>,
    /// Highest allowed degree of a realized basis element
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub max_degree: Option<i64>,
    /// Highest arity of computed A-infinity products
    #[arg(long, global = true, default_value_t = 5)]
    pub arity: usize,
    /// Window parameter: hearts and concentration live in (-d, 0]
    #[arg(long, global = true, default_value_t = 1)]
    pub d: usize,
    /// Maximal number of entries of enumerated twisted complexes
    #[arg(long, global = true, default_value_t = 3)]
    pub size_bound: usize,
    /// Path length bound for rewriting and word length bound for bar duals
    #[arg(long, global = true, default_value_t = 8)]
    pub max_steps: usize,
    /// Write the JSON report here (`-` for stdout)
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Realize a presentation as a finite-dimensional dg algebra
    Realize { input: PathBuf },
    /// Koszul duals and the double-dual comparison
    Koszul {
        #[arg(value_enum)]
        mode: KoszulMode,
        input: PathBuf,
    },
    /// Generation, compliciality, semibrick and recognition checks
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        input: PathBuf,
        /// Module or twisted blocks forming the collection
        #[arg(long, value_delimiter = ',')]
        members: Vec<String>,
        /// Twisted blocks proposed as projectives (recognize)
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
        /// Semibrick index n
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Highest degree tested by the span check
        #[arg(long, default_value_t = 3)]
        top_degree: usize,
    },
    /// Top, radical tower and Loewy bounds of a module block
    Loewy {
        input: PathBuf,
        #[arg(long)]
        module: String,
    },
    /// Hom complex between two twisted blocks
    TwHom {
        input: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KoszulMode {
    Dual,
    DualOfCoconnective,
    DoubleDual,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    #[value(name = "1gen-span")]
    #[serde(rename = "1gen-span")]
    OneGenSpan,
    #[value(name = "1gen-dual")]
    #[serde(rename = "1gen-dual")]
    OneGenDual,
    Complicial,
    Semibrick,
    Recognize,
}

fn init_threads() {
    if let Some(n) = std::env::var("KOSZULKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run::execute(&cli.command, &cli.opts) {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            if let Some(path) = &cli.opts.json {
                let text = serde_json::to_string_pretty(&out.document).expect("serializable report") + "\n";
                if path.as_os_str() == "-" {
                    print!("{text}");
                } else if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(run::exit_code(&e))
        }
    }
}
