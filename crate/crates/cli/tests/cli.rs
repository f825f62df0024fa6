use std::process::Command as Proc;

use clap::Parser;
use eecrit_cli::config::{Command, FormatArg, KindArg, ScenarioArgs};
use eecrit_cli::{execute, output_path, RunConfig};
use eecrit_core::numeric::rat;
use eecrit_core::Exponent;
use proptest::prelude::*;

fn parse(args: &[&str]) -> RunConfig {
    RunConfig::try_parse_from(std::iter::once("eecrit").chain(args.iter().copied())).unwrap()
}

fn round_trip(cfg: &RunConfig) -> RunConfig {
    RunConfig::try_parse_from(std::iter::once("eecrit".to_string()).chain(cfg.to_args())).unwrap()
}

fn eecrit(args: &[&str]) -> std::process::Output {
    Proc::new(env!("CARGO_BIN_EXE_eecrit"))
        .args(args)
        .env_remove("EECRIT_OUT_DIR")
        .output()
        .unwrap()
}

const INVOCATIONS: &[&[&str]] = &[
    &[
        "check",
        "--p",
        "4",
        "--q",
        "4",
        "--d",
        "1",
        "--scenario",
        "slice",
    ],
    &[
        "check",
        "--p",
        "inf",
        "--q",
        "7/3",
        "--gamma",
        "9/10",
        "--d",
        "1/2",
        "--measure-zero",
    ],
    &[
        "region",
        "--d",
        "2",
        "--format",
        "svg",
        "--arc-samples",
        "64",
    ],
    &["figure", "fig3"],
    &["figure", "custom", "--gamma", "17/20", "--d", "2/3"],
    &["bifurcations", "--gamma", "4/5"],
    &["alpha", "--d", "2", "--gamma", "1", "--x0"],
    &[
        "alpha", "--d", "1/2", "--p", "3", "--q", "3", "--out", "a.json",
    ],
    &[
        "lemma-conv",
        "--d",
        "2/3",
        "--alpha",
        "13/6",
        "--sigma",
        "1",
        "--s",
        "4/5",
        "--format",
        "csv",
    ],
    &[
        "sharpness",
        "--d",
        "1/2",
        "--sigma",
        "3",
        "--s",
        "1/2",
        "--j-max",
        "10",
    ],
    &[
        "cutoff", "--radius", "1/4", "--a", "1.5", "--dim", "2", "--n", "65",
    ],
    &["commutator", "--modes", "3,5", "--p", "inf", "--n", "512"],
    &[
        "interp-bound",
        "--gamma",
        "0.3",
        "--a",
        "inf",
        "--cutoff-radius",
        "0.5",
        "--corpus",
        "4",
    ],
    &["oracle", "--d", "1/2", "--resolution", "21"],
    &["type-i", "--kind", "in_time", "--d", "1/2"],
];

#[test]
fn invocations_round_trip() {
    for args in INVOCATIONS {
        let cfg = parse(args);
        assert_eq!(round_trip(&cfg), cfg, "{args:?}");
    }
}

fn rational_text() -> impl Strategy<Value = String> {
    (0i64..50, 1i64..20).prop_map(|(n, d)| format!("{n}/{d}"))
}

fn exponent_text() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("inf".to_string()),
        (2i64..40, 1i64..5).prop_map(|(n, d)| format!("{}/{d}", n * d + 1))
    ]
}

proptest! {
    #[test]
    fn check_configs_round_trip(g in rational_text(), d in rational_text(), p in exponent_text(), q in exponent_text(), general in any::<bool>(), mz in any::<bool>()) {
        let mut args = vec!["check", "--gamma", &g, "--d", &d, "--p", &p, "--q", &q];
        if general {
            args.extend(["--scenario", "general"]);
        }
        if mz {
            args.push("--measure-zero");
        }
        let cfg = parse(&args);
        prop_assert_eq!(round_trip(&cfg), cfg);
    }

    #[test]
    fn sweep_configs_round_trip(d in rational_text(), a in rational_text(), sg in rational_text(), s in rational_text(), j in 1u32..20, csv in any::<bool>()) {
        let f = if csv { "csv" } else { "json" };
        let js = j.to_string();
        let cfg = parse(&["lemma-conv", "--d", &d, "--alpha", &a, "--sigma", &sg, "--s", &s, "--j-max", &js, "--format", f]);
        prop_assert_eq!(round_trip(&cfg), cfg);
    }
}

#[test]
fn documented_defaults() {
    let cfg = parse(&["check", "--p", "4", "--q", "4"]);
    let Command::Check { scenario, p, q } = cfg.command else {
        panic!()
    };
    assert_eq!(scenario, ScenarioArgs::default());
    assert_eq!(scenario.scenario, KindArg::Slice);
    assert_eq!(scenario.gamma, rat(1, 1));
    assert_eq!(
        (p, q),
        (Exponent::Finite(rat(4, 1)), Exponent::Finite(rat(4, 1)))
    );
    let Command::Region { format, .. } = parse(&["region"]).command else {
        panic!()
    };
    assert_eq!(format, FormatArg::Json);
}

#[test]
fn lions_point_check() {
    let out = execute(&parse(&[
        "check",
        "--p",
        "4",
        "--q",
        "4",
        "--d",
        "1",
        "--scenario",
        "slice",
    ]))
    .unwrap();
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
    assert_eq!(v["status"], "Guaranteed");
    assert_eq!(v["on_boundary"], true);
}

#[test]
fn crossover_text() {
    let out = execute(&parse(&["alpha", "--d", "2", "--gamma", "1", "--x0"])).unwrap();
    assert_eq!(out.body, "7/18\n");
}

#[test]
fn figure_matches_region_export() {
    use eecrit_core::region::boundary::build_region;
    use eecrit_core::region::export::{to_svg_titled, DEFAULT_ARC_SAMPLES};
    use eecrit_core::Scenario;
    let out = execute(&parse(&["figure", "fig3"])).unwrap();
    let rb = build_region(&Scenario::classical_slice(rat(1, 1))).unwrap();
    assert_eq!(out.body, to_svg_titled(&rb, DEFAULT_ARC_SAMPLES, "d=1"));
    assert!(out.body.contains("<title>d=1</title>"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| eecrit(args).status.code().unwrap();
    assert_eq!(code(&["check", "--p", "4", "--q", "4"]), 0);
    assert_eq!(code(&["check", "--p", "1", "--q", "4"]), 2);
    assert_eq!(code(&["check", "--p", "4", "--q", "4", "--d", "3"]), 2);
    assert_eq!(code(&["bifurcations", "--gamma", "1"]), 2);
    assert_eq!(code(&["check", "--p", "4"]), 64);
    assert_eq!(code(&["region", "--format", "png"]), 64);
    assert_eq!(code(&["figure", "fig99"]), 64);
    assert_eq!(code(&["frobnicate"]), 64);
    // Between the bounded and divergent thresholds of the verdict rule.
    let borderline = eecrit(&[
        "sharpness",
        "--d",
        "1/2",
        "--sigma",
        "3",
        "--s",
        "1/2",
        "--j-max",
        "4",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&borderline.stdout).unwrap();
    let expected = if v["verdict"]["verdict"] == "inconclusive" {
        3
    } else {
        0
    };
    assert_eq!(borderline.status.code().unwrap(), expected);
}

#[test]
fn usage_errors_are_one_line() {
    for args in [
        &["check", "--p", "4"][..],
        &["region", "--format", "png"],
        &["figure", "nope"],
        &["check", "--p", "x", "--q", "4"],
    ] {
        let out = eecrit(args);
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn every_subcommand_has_help_and_schema() {
    for name in eecrit_cli::schema::subcommands() {
        if name == "help" {
            continue;
        }
        let help = eecrit(&[&name, "--help"]);
        assert_eq!(help.status.code(), Some(0), "{name}");
        assert!(
            String::from_utf8(help.stdout).unwrap().contains("Usage:"),
            "{name}"
        );
        let schema = eecrit(&[&name, "--schema"]);
        assert_eq!(schema.status.code(), Some(0), "{name}");
        let v: serde_json::Value = serde_json::from_slice(&schema.stdout).unwrap();
        assert_eq!(v["command"], name.as_str());
        assert!(
            v["arguments"]
                .as_array()
                .unwrap()
                .iter()
                .any(|a| a["long"] == "out"),
            "{name}"
        );
        assert_ne!(v["output"], "unknown", "{name}");
    }
    let v: serde_json::Value =
        serde_json::from_slice(&eecrit(&["check", "--schema"]).stdout).unwrap();
    let p = v["arguments"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["long"] == "p")
        .unwrap();
    assert_eq!(p["required"], true);
}

#[test]
fn output_directory_variable() {
    assert_eq!(
        output_path("a.json".as_ref(), Some("/tmp/x")),
        std::path::PathBuf::from("/tmp/x/a.json")
    );
    assert_eq!(
        output_path("/abs/a.json".as_ref(), Some("/tmp/x")),
        std::path::PathBuf::from("/abs/a.json")
    );
    assert_eq!(
        output_path("a.json".as_ref(), None),
        std::path::PathBuf::from("a.json")
    );

    let dir = std::env::temp_dir().join(format!("eecrit-out-{}", std::process::id()));
    let status = Proc::new(env!("CARGO_BIN_EXE_eecrit"))
        .args(["bifurcations", "--gamma", "4/5", "--out", "sub/b.json"])
        .env("EECRIT_OUT_DIR", &dir)
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read_to_string(dir.join("sub/b.json")).unwrap();
    assert_eq!(
        written,
        String::from_utf8(eecrit(&["bifurcations", "--gamma", "4/5"]).stdout).unwrap()
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
