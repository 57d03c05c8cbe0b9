use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use icr_core::classifier::{AtlasSummary, PatternReport};
use icr_core::dof::DofEstimate;
use icr_core::report::{from_csv, from_json, to_csv, to_json, SweepRow, TraceRow};
use icr_core::sim::SimulationTrace;
use icr_lab::{run, AtlasDocument, Cli, CliError, RunConfig};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icr-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn config(args: &[&str]) -> Result<RunConfig, CliError> {
    let mut full = vec!["icr-lab"];
    full.extend_from_slice(args);
    RunConfig::from_cli(Cli::try_parse_from(full).unwrap())
}

#[test]
fn classify_table_entry() {
    let out = lab(&["classify", "--pattern", "DD,PN,NP", "--no-timestamp"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let (_, rows): (_, Vec<PatternReport>) = from_csv(&stdout).unwrap();
    assert_eq!(rows[0].scheme.unwrap().to_string(), "Scheme 1");
    assert!(stdout.contains("Synergistic"));
}

#[test]
fn bad_pattern_lists_alphabet() {
    let out = lab(&["classify", "--pattern", "XX,PN,NP"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    for s in ["PP", "PD", "PN", "DP", "DD", "DN", "NP", "ND", "NN"] {
        assert!(err.contains(s), "{err}");
    }
}

#[test]
fn validation_errors() {
    assert!(matches!(
        config(&["classify"]),
        Err(CliError::Validation(_))
    ));
    assert!(matches!(
        config(&["simulate"]),
        Err(CliError::Validation(_))
    ));
    assert!(matches!(
        config(&["dof-sweep", "--scheme", "tdm", "--trials", "0"]),
        Err(CliError::Validation(_))
    ));
    assert!(matches!(
        config(&["simulate", "--scheme", "nope"]),
        Err(CliError::Validation(_))
    ));
    assert!(matches!(
        config(&["dof-sweep", "--pattern", "NN,NN,NN"]),
        Err(CliError::Validation(_))
    ));
    assert!(matches!(
        config(&["simulate", "--scheme", "scheme1", "--noise", "-1"]),
        Err(CliError::Validation(_))
    ));
    let cfg = config(&["dof-sweep", "--scheme", "tdm", "--powers", "20"]).unwrap();
    let e = run(&cfg, &mut Vec::new()).unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn csit_violation_exits_two() {
    let out = lab(&["simulate", "--scheme", "scheme1", "--pattern", "DD,NN,NP"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("not available at slot 2"));
}

#[test]
fn unwritable_output_exits_one() {
    let out = lab(&[
        "classify",
        "--pattern",
        "DD,PN,NP",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tdm_sweep_slope_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tdm.json");
    let out = lab(&[
        "dof-sweep",
        "--scheme",
        "tdm",
        "--trials",
        "400",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (stamp, est): (_, DofEstimate) = from_json(&read(&path)).unwrap();
    assert!(stamp.is_some());
    assert!((est.slope - 1.0).abs() < 0.03, "{}", est.slope);
}

#[test]
fn pattern_selects_scheme_for_sweep() {
    let cfg = config(&[
        "dof-sweep",
        "--pattern",
        "DD,DD,PP",
        "--trials",
        "50",
        "--no-timestamp",
    ])
    .unwrap();
    let mut buf = Vec::new();
    let summary = run(&cfg, &mut buf).unwrap();
    assert!(summary.starts_with("Scheme 2"), "{summary}");
    let (_, rows): (_, Vec<SweepRow>) = from_csv(&String::from_utf8(buf).unwrap()).unwrap();
    assert_eq!(rows.len(), 5);
}

#[test]
fn reports_round_trip_through_their_parsers() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let s = |path: &Path| path.to_str().unwrap().to_string();

    let atlas = p("atlas.csv");
    assert!(lab(&["enumerate", "--out", &s(&atlas)]).status.success());
    let text = read(&atlas);
    let (stamp, rows): (_, Vec<PatternReport>) = from_csv(&text).unwrap();
    assert_eq!(rows.len(), 729);
    assert_eq!(to_csv(&rows, stamp).unwrap(), text);
    let side = read(&dir.path().join("atlas.summary.json"));
    let (stamp, summary): (_, AtlasSummary) = from_json(&side).unwrap();
    assert_eq!(summary.counts.disagreements, 0);
    assert_eq!(to_json(&summary, stamp).unwrap(), side);

    let atlas_json = p("atlas.json");
    assert!(
        lab(&["enumerate", "--format", "json", "--out", &s(&atlas_json)])
            .status
            .success()
    );
    let text = read(&atlas_json);
    let (stamp, doc): (_, AtlasDocument) = from_json(&text).unwrap();
    assert_eq!(to_json(&doc, stamp).unwrap(), text);

    let trace = p("trace.csv");
    assert!(lab(&[
        "simulate",
        "--scheme",
        "scheme3-mirror",
        "--noise",
        "0.01",
        "--out",
        &s(&trace)
    ])
    .status
    .success());
    let text = read(&trace);
    let (stamp, rows): (_, Vec<TraceRow>) = from_csv(&text).unwrap();
    assert_eq!(to_csv(&rows, stamp).unwrap(), text);

    let trace_json = p("trace.json");
    assert!(lab(&[
        "simulate",
        "--pattern",
        "PP,PP,PP",
        "--powers",
        "10",
        "--format",
        "json",
        "--out",
        &s(&trace_json)
    ])
    .status
    .success());
    let text = read(&trace_json);
    let (stamp, t): (_, SimulationTrace) = from_json(&text).unwrap();
    assert_eq!(t.power, 1024.0);
    assert_eq!(to_json(&t, stamp).unwrap(), text);

    let sweep = p("sweep.csv");
    assert!(lab(&[
        "dof-sweep",
        "--scheme",
        "scheme2",
        "--trials",
        "30",
        "--out",
        &s(&sweep)
    ])
    .status
    .success());
    let text = read(&sweep);
    let (stamp, rows): (_, Vec<SweepRow>) = from_csv(&text).unwrap();
    assert_eq!(to_csv(&rows, stamp).unwrap(), text);
    let fit = read(&dir.path().join("sweep.fit.json"));
    let (stamp, est): (_, DofEstimate) = from_json(&fit).unwrap();
    assert_eq!(to_json(&est, stamp).unwrap(), fit);
}

#[test]
fn demo_walks_through_three_schemes() {
    let out = lab(&["demo"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for head in [
        "Scheme 1 under (DD,PN,NP)",
        "Scheme 2 under (ND,DN,PP)",
        "Scheme 3 under (DN,PD,NP)",
    ] {
        assert!(text.contains(head), "{head}");
    }
    assert!(text.contains("Y1(1) - Y1(2) = L_1^1 (I_1 cancelled)"));
    assert_eq!(text.matches("slot 3 [CSIT").count(), 3);
}
