//! Configuration resolution: defaults, file, flags.

use clap::Parser;

use qu8it::identities::Section;
use qu8it::lattice::BaryonSector;
use qu8it::statespec::StateSpec;
use qu8it_cli::config::{CommandKind, Format, RunConfig};
use qu8it_cli::Cli;

fn resolve(args: &[&str]) -> anyhow::Result<RunConfig> {
    let cli = Cli::try_parse_from(std::iter::once("qu8it").chain(args.iter().copied()))?;
    RunConfig::from_command(&cli.command)
}

#[test]
fn json_round_trip() {
    let cfg = resolve(&[
        "evolve", "--nf", "1", "--L", "2", "--mass", "0.5", "--h", "3", "--t", "2.5",
        "--steps", "40", "--order", "2", "--state", "gs:B=0", "--out", "x",
    ])
    .unwrap();
    let back = RunConfig::from_json(&cfg.to_json().unwrap()).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.state, StateSpec::GroundState(BaryonSector::new(0)));
}

#[test]
fn flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{ "nf": 2, "L": 1, "masses": [0.3, 0.7], "g": 2.0, "h": 5.0,
             "t": 4.0, "steps": 80, "format": "json" }"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let cfg = resolve(&["evolve", "--config", p, "--g", "1.5", "--steps", "10"]).unwrap();
    assert_eq!(cfg.command, CommandKind::Evolve);
    assert_eq!(cfg.params.nf, 2);
    assert_eq!(cfg.params.masses, vec![0.3, 0.7]);
    assert_eq!(cfg.params.g, 1.5);
    assert_eq!(cfg.params.h, 5.0);
    assert_eq!(cfg.t, 4.0);
    assert_eq!(cfg.steps, 10);
    assert_eq!(cfg.format, Format::Json);
}

#[test]
fn single_mass_applies_to_every_flavour() {
    let cfg = resolve(&["spectrum", "--nf", "2", "--mass", "0.4"]).unwrap();
    assert_eq!(cfg.params.masses, vec![0.4, 0.4]);
}

#[test]
fn default_state_is_empty_register() {
    let cfg = resolve(&["evolve", "--L", "1"]).unwrap();
    assert_eq!(cfg.state.to_string(), "1,1\u{304}");
}

#[test]
fn unknown_file_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{ "nf": 1, "colour": 3 }"#).unwrap();
    assert!(resolve(&["spectrum", "--config", path.to_str().unwrap()]).is_err());
}

#[test]
fn invalid_values_are_rejected() {
    for args in [
        &["evolve", "--order", "3"][..],
        &["evolve", "--steps", "0"],
        &["spectrum", "--nf", "0"],
        &["verify", "--identity-tol", "-1"],
    ] {
        assert!(resolve(args).is_err(), "{args:?}");
    }
}

#[test]
fn repeated_sections() {
    let cfg = resolve(&["verify", "--section", "appD", "--section", "resources"]).unwrap();
    assert_eq!(cfg.sections, vec![Section::AppD, Section::Resources]);
}
