use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hmf_cli::commands::{self, HeckeOp, Output};
use hmf_cli::config::{parse_box, parse_element, CommandConfig};
use hmf_cli::exit_code;
use hmf_cli::suites::SuiteOptions;
use hmf_theta::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "hmf", version, about = "Theta series and weight 1/2 Hilbert modular forms over Q(√d)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Squarefree d of the field Q(√d); one of 2, 5, 13
    #[arg(long, global = true, default_value_t = 2)]
    d: i64,
    /// Level: `q^n` or an element such as `4`, `4q`, `8,4`
    #[arg(long, global = true)]
    level: Option<String>,
    /// Character: `trivial`, `phi`, or exponents `e1,e2,...` modulo the level
    #[arg(long = "char", global = true)]
    character: Option<String>,
    /// Truncation box `X` or `X1,X2`
    #[arg(long = "box", global = true)]
    bound: Option<String>,
    /// Decimal digits for floating-point evaluation
    #[arg(long, global = true, default_value_t = 12)]
    precision: u32,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for data-parallel steps
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field data: discriminant, δ, fundamental unit
    Field,
    /// Structure of (R/c)ˣ
    UnitGroup,
    /// Characters modulo the level that are trivial on units
    Characters {
        /// Keep characters whose order divides this
        #[arg(long)]
        order: Option<u64>,
    },
    /// Theta basis of M(c, ψ)
    Basis,
    /// Expansion of θ_(χ,t)
    Theta {
        #[arg(long, default_value = "trivial")]
        chi: String,
        #[arg(long, default_value = "1")]
        t: String,
        /// Write the expansion JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply T(p²), U(p), V(p), K(p) or H to a stored expansion
    Hecke {
        #[arg(long)]
        p: Option<String>,
        /// Expansion JSON file
        #[arg(long)]
        on: PathBuf,
        #[arg(long, default_value = "t")]
        op: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial L-series of a stored expansion against the Euler product of L(2s, ψ)
    Lseries {
        #[arg(long)]
        form: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        /// Sum over ideals of norm at most this
        #[arg(long = "bound", default_value_t = 400)]
        norm_bound: u64,
        #[arg(long)]
        euler_bound: Option<u64>,
    },
    /// Run verification suites
    Verify {
        /// unit-groups, dimensions, hecke-eigen, modularity, gauss-sum, l-coeff or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 16)]
        n_max: u32,
        /// Comma-separated primes, e.g. `3,5,3+q`
        #[arg(long)]
        primes: Option<String>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn config(g: &Global) -> Result<CommandConfig> {
    let bound = g.bound.as_deref().map(parse_box).transpose()?;
    Ok(CommandConfig {
        d: g.d,
        level: g.level.clone(),
        character: g.character.clone(),
        bound,
        precision: g.precision,
        seed: g.seed,
        json: g.json,
    })
}

fn run(cli: &Cli) -> Result<Output> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    let cfg = config(&cli.global)?;
    let ctx = cfg.field()?;
    cfg.validate(&ctx)?;
    match &cli.command {
        Command::Field => commands::field(&cfg),
        Command::UnitGroup => commands::unit_group(&cfg),
        Command::Characters { order } => commands::characters(&cfg, *order),
        Command::Basis => commands::basis_cmd(&cfg),
        Command::Theta { chi, t, out } => commands::theta(&cfg, chi, t, out.as_deref()),
        Command::Hecke { p, on, op, out } => commands::hecke(&cfg, HeckeOp::parse(op)?, p.as_deref(), on, out.as_deref()),
        Command::Lseries {
            form,
            s,
            norm_bound,
            euler_bound,
        } => commands::lseries(&cfg, form, *s, *norm_bound, *euler_bound),
        Command::Verify {
            suite,
            n_max,
            primes,
            samples,
            tol,
        } => {
            let primes = match primes {
                Some(list) => Some(list.split(',').map(|p| parse_element(&ctx, p)).collect::<Result<Vec<_>>>()?),
                None => None,
            };
            let opts = SuiteOptions {
                n_max: *n_max,
                primes,
                samples: *samples,
                tol: *tol,
                seed: cfg.seed,
            };
            commands::verify(&cfg, suite, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = if cli.global.json {
                serde_json::to_string_pretty(&out.json).expect("JSON output")
            } else {
                out.text
            };
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            if cli.global.json {
                let v = serde_json::json!({ "error": e.to_string(), "exit_code": exit_code(&e) });
                let _ = writeln!(
                    std::io::stdout().lock(),
                    "{}",
                    serde_json::to_string_pretty(&v).expect("JSON output")
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
