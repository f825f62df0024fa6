//! Command-line front end for `eecrit-core`.

pub mod config;
pub mod run;
pub mod schema;

pub use config::{Command, RunConfig};
pub use run::{execute, output_path, run, Failure, Outcome};

use clap::Parser;

/// Parses `args` (including the program name), handles `--schema`, runs the
/// command and returns the process exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    if args.iter().skip(1).any(|a| a == "--schema") {
        let name = args.iter().skip(1).find(|a| !a.starts_with('-'));
        return match name.and_then(|n| schema::schema(n)) {
            Some(s) => match serde_json::to_string_pretty(&s) {
                Ok(j) => {
                    run::emit(&format!("{j}\n"));
                    run::EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    run::EXIT_FAILURE
                }
            },
            None => {
                eprintln!(
                    "error: --schema needs a subcommand (one of {})",
                    schema::subcommands().join(", ")
                );
                run::EXIT_USAGE
            }
        };
    }
    match RunConfig::try_parse_from(&args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    run::emit(&e.to_string());
                    run::EXIT_OK
                }
                _ => {
                    eprintln!("{}", usage_line(&e.to_string()));
                    run::EXIT_USAGE
                }
            }
        }
    }
}

/// The clap message up to the usage block, folded onto one line.
fn usage_line(msg: &str) -> String {
    let head = msg.split("\nUsage:").next().unwrap_or(msg);
    let words: Vec<&str> = head
        .lines()
        .filter(|l| !l.trim_start().starts_with("For more information"))
        .flat_map(str::split_whitespace)
        .collect();
    if words.is_empty() {
        "usage error".into()
    } else {
        words.join(" ")
    }
}
