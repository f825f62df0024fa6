//! Machine-readable description of each subcommand, built from the clap
//! definitions.

use clap::CommandFactory;
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Serialize)]
pub struct ArgSchema {
    pub name: String,
    pub long: Option<String>,
    pub positional: bool,
    pub required: bool,
    pub takes_value: bool,
    pub default: Option<String>,
    pub possible_values: Vec<String>,
    pub help: Option<String>,
}

#[derive(Serialize)]
pub struct CommandSchema {
    pub command: String,
    pub about: Option<String>,
    pub arguments: Vec<ArgSchema>,
    /// Formats the artifact can take.
    pub formats: Vec<&'static str>,
    /// Name of the serialized output type.
    pub output: &'static str,
    pub exit_codes: Vec<(i32, &'static str)>,
}

fn output_of(name: &str) -> (&'static str, Vec<&'static str>) {
    match name {
        "check" => ("Verdict", vec!["json"]),
        "region" => ("RegionBoundary", vec!["json", "csv", "svg"]),
        "figure" => ("SVG", vec!["svg"]),
        "bifurcations" => ("BifurcationList", vec!["json"]),
        "alpha" => ("AlphaOutput (x0 as text with --x0)", vec!["json", "text"]),
        "lemma-conv" | "sharpness" => ("ConvSweepReport", vec!["json", "csv"]),
        "cutoff" => ("CutoffOutput", vec!["json"]),
        "commutator" => (
            "CommutatorReport | TwoModeOutput | CorpusReport",
            vec!["json"],
        ),
        "interp-bound" => ("InterpolationReport | CorpusReport", vec!["json"]),
        "oracle" => ("OracleReport", vec!["json"]),
        "type-i" => ("Verdict", vec!["json"]),
        _ => ("unknown", vec![]),
    }
}

/// Subcommand names in declaration order.
pub fn subcommands() -> Vec<String> {
    RunConfig::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect()
}

pub fn schema(name: &str) -> Option<CommandSchema> {
    let root = RunConfig::command();
    let sub = root.find_subcommand(name)?;
    let mut arguments: Vec<ArgSchema> = sub
        .get_arguments()
        .filter(|a| !matches!(a.get_id().as_str(), "help" | "version"))
        .map(|a| ArgSchema {
            name: a.get_id().to_string(),
            long: a.get_long().map(str::to_string),
            positional: a.is_positional(),
            required: a.is_required_set(),
            takes_value: a.get_num_args().map(|n| n.takes_values()).unwrap_or(true),
            default: a
                .get_default_values()
                .first()
                .map(|v| v.to_string_lossy().into_owned()),
            possible_values: a
                .get_possible_values()
                .iter()
                .map(|v| v.get_name().to_string())
                .collect(),
            help: a.get_help().map(|h| h.to_string()),
        })
        .collect();
    for g in root.get_arguments().filter(|a| a.is_global_set()) {
        arguments.push(ArgSchema {
            name: g.get_id().to_string(),
            long: g.get_long().map(str::to_string),
            positional: false,
            required: false,
            takes_value: true,
            default: None,
            possible_values: vec![],
            help: g.get_help().map(|h| h.to_string()),
        });
    }
    let (output, formats) = output_of(name);
    Some(CommandSchema {
        command: name.to_string(),
        about: sub.get_about().map(|h| h.to_string()),
        arguments,
        formats,
        output,
        exit_codes: vec![
            (0, "success"),
            (1, "other failure"),
            (2, "out of domain"),
            (3, "inconclusive"),
            (64, "usage"),
        ],
    })
}
