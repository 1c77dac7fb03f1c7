use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use frobtrace::fixtures::{verify_builtin, FIXTURES};
use frobtrace::groebner::set_step_cap;
use frobtrace::session::{run_session, Options};
use frobtrace::unipoly::set_factor_seed;
use frobtrace::MonomialOrder;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Lex,
    Grevlex,
}

/// Runs a session script (a file, or stdin when absent or `-`).
#[derive(Parser, Debug)]
#[command(name = "frobtrace", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    script: Option<String>,
    /// Characteristic of a ring `R` declared before the script.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Comma-separated variables of the ring `R`.
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long, global = true, value_enum, default_value = "grevlex")]
    order: Order,
    #[arg(long = "max-e", global = true, default_value_t = frobtrace::testideal::DEFAULT_MAX_E)]
    max_e: u32,
    /// Reduction step cap per Gröbner basis.
    #[arg(long = "step-cap", global = true)]
    step_cap: Option<u64>,
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random polynomial splitting; results are canonical regardless.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Runs a built-in example by id, or all of them.
    Verify { id: String },
    /// Lists the built-in examples.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.step_cap {
        set_step_cap(cap);
    }
    if let Some(seed) = cli.seed {
        set_factor_seed(seed);
    }
    let options = Options {
        max_e: cli.max_e,
        p: cli.p,
        vars: cli.vars.clone(),
        order: match cli.order {
            Order::Lex => MonomialOrder::Lex,
            Order::Grevlex => MonomialOrder::Grevlex,
        },
    };
    let code = match &cli.command {
        Some(Command::List) => {
            for f in FIXTURES {
                println!("{}", f.id);
            }
            0
        }
        Some(Command::Verify { id }) => match verify_builtin(id, &options) {
            None => {
                eprintln!("error: unknown example `{id}`");
                2
            }
            Some(summary) => {
                for line in &summary.lines {
                    if cli.json {
                        println!("{}", serde_json::json!({ "line": line }));
                    } else {
                        println!("{line}");
                    }
                }
                summary.exit_code()
            }
        },
        None => {
            let text = match cli.script.as_deref() {
                None | Some("-") => {
                    let mut s = String::new();
                    match std::io::stdin().read_to_string(&mut s) {
                        Ok(_) => s,
                        Err(e) => {
                            eprintln!("error: reading stdin: {e}");
                            return ExitCode::from(2);
                        }
                    }
                }
                Some(path) => match std::fs::read_to_string(path) {
                    Ok(s) => s,
                    Err(e) => {
                        eprintln!("error: reading {path}: {e}");
                        return ExitCode::from(2);
                    }
                },
            };
            let t = run_session(&text, &options);
            if cli.json {
                print!("{}", t.render_json());
            } else {
                print!("{}", t.render_text());
                if let Some(e) = &t.error {
                    eprintln!("{e}");
                }
            }
            t.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
