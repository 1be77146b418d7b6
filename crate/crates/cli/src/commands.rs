//! Subcommand implementations. Each returns the text to print and writes
//! its files into the configured output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Serialize;

use qu8it::evolution::{
    exact_trajectory, trotter_evolve, ExactEvolver, ExactMethod, ObservableRecord, ObservableSet,
    TrotterPlan,
};
use qu8it::identities::{run_suite, Check, Report, Section, IDENTITY_TOL};
use qu8it::io::{fmt_float, schema, spectrum_csv, to_json, trajectory_csv, write_json};
use qu8it::lattice::{build_qu8it_hamiltonian, BlockTag, Mapping};
use qu8it::resources::{
    closed_form_counts, enumerate_circuit_counts, reduction_ratios, render_table, ResourceReport,
};
use qu8it::spectrum::{spectrum, Level};

use crate::config::{Format, RunConfig};

/// Result of one command: the stdout text and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub success: bool,
    pub files: Vec<PathBuf>,
}

fn prepare_out(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))
}

fn write_text(cfg: &RunConfig, name: &str, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = cfg.out.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    files.push(path);
    Ok(())
}

#[derive(Serialize)]
struct SpectrumFile<'a> {
    schema: String,
    config: &'a RunConfig,
    dim: usize,
    /// Present when the levels are written to a CSV file instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    levels: Option<&'a [Level]>,
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    let h = build_qu8it_hamiltonian(&cfg.params)?;
    let levels = spectrum(&h, cfg.sector, cfg.dense_cap)?;
    prepare_out(cfg)?;
    let mut files = Vec::new();
    let csv_name = "spectrum.csv";
    let manifest = SpectrumFile {
        schema: schema("spectrum"),
        config: cfg,
        dim: h.dim(),
        table: (cfg.format == Format::Csv).then_some(csv_name),
        levels: (cfg.format == Format::Json).then_some(levels.as_slice()),
    };
    if cfg.format == Format::Csv {
        write_text(cfg, csv_name, &spectrum_csv(&levels), &mut files)?;
    }
    write_text(cfg, "spectrum.json", &to_json(&manifest)?, &mut files)?;

    let mut text = String::new();
    let scope = cfg
        .sector
        .map(|s| format!("sector B={s}"))
        .unwrap_or_else(|| "full register".into());
    let _ = writeln!(text, "{} levels ({scope}, dim {})", levels.len(), h.dim());
    for l in levels.iter().take(12) {
        let _ = writeln!(text, "  E = {:>22}  C = {:>22}  B = {}", fmt_float(l.energy), fmt_float(l.casimir), l.sector);
    }
    if levels.len() > 12 {
        let _ = writeln!(text, "  ... {} more", levels.len() - 12);
    }
    Ok(Outcome {
        text,
        success: true,
        files,
    })
}

#[derive(Serialize)]
struct PlanSummary {
    order: u8,
    steps_per_trotter_step: usize,
    entangling_steps: usize,
    entangling_by_block: Vec<(BlockTag, usize)>,
    max_group_commutator: f64,
    terms: Vec<String>,
}

#[derive(Serialize)]
struct TrajectoryFile<'a> {
    schema: String,
    config: &'a RunConfig,
    dim: usize,
    exact_method: ExactMethod,
    plan: PlanSummary,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    tables: Option<[&'a str; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trotter: Option<&'a [ObservableRecord]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<&'a [ObservableRecord]>,
}

#[derive(Serialize)]
struct Tolerances {
    norm: f64,
    group_commutator: f64,
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<Outcome> {
    let h = build_qu8it_hamiltonian(&cfg.params)?;
    let psi0 = cfg.state.resolve(&h, cfg.dense_cap)?;
    let plan = TrotterPlan::build(&h.model, cfg.order)?;
    let obs = ObservableSet::new(&h)?;
    let exact = ExactEvolver::auto(&h.matrix, cfg.dense_cap)?;
    let (_, trotter) = trotter_evolve(&plan, &obs, &psi0, cfg.t, cfg.steps, Some(&exact))?;
    let reference = exact_trajectory(&exact, &obs, &psi0, cfg.t, cfg.steps)?;

    prepare_out(cfg)?;
    let mut files = Vec::new();
    let names = ["trajectory.csv", "exact.csv"];
    if cfg.format == Format::Csv {
        write_text(cfg, names[0], &trajectory_csv(&trotter), &mut files)?;
        write_text(cfg, names[1], &trajectory_csv(&reference), &mut files)?;
    }
    let manifest = TrajectoryFile {
        schema: schema("trajectory"),
        config: cfg,
        dim: h.dim(),
        exact_method: exact.method(),
        plan: PlanSummary {
            order: plan.order,
            steps_per_trotter_step: plan.schedule(1.0).len(),
            entangling_steps: plan.entangling_steps(),
            entangling_by_block: BlockTag::ALL
                .iter()
                .map(|&t| (t, plan.count_by_tag(t)))
                .collect(),
            max_group_commutator: plan.max_group_commutator,
            terms: plan.steps.iter().map(|s| format!("{}: {}", s.info.group, s.info.term)).collect(),
        },
        tolerances: Tolerances {
            norm: qu8it::evolution::NORM_TOL,
            group_commutator: qu8it::evolution::GROUP_COMMUTATOR_TOL,
        },
        tables: (cfg.format == Format::Csv).then_some(names),
        trotter: (cfg.format == Format::Json).then_some(trotter.as_slice()),
        exact: (cfg.format == Format::Json).then_some(reference.as_slice()),
    };
    write_text(cfg, "trajectory.json", &to_json(&manifest)?, &mut files)?;

    let mut text = String::new();
    let last = trotter.last().expect("trajectory has at least one record");
    let last_exact = reference.last().expect("trajectory has at least one record");
    let _ = writeln!(
        text,
        "evolved {} to t = {} in {} order-{} steps (dim {}, exact: {:?})",
        cfg.state,
        cfg.t,
        cfg.steps,
        cfg.order,
        h.dim(),
        exact.method()
    );
    let _ = writeln!(text, "  fidelity vs exact : {}", last.fidelity.map(fmt_float).unwrap_or_default());
    let _ = writeln!(text, "  energy  trotter/exact : {} / {}", fmt_float(last.energy), fmt_float(last_exact.energy));
    let _ = writeln!(text, "  baryon  trotter/exact : {} / {}", fmt_float(last.baryon), fmt_float(last_exact.baryon));
    let _ = writeln!(text, "  casimir trotter/exact : {} / {}", fmt_float(last.casimir), fmt_float(last_exact.casimir));
    Ok(Outcome {
        text,
        success: true,
        files,
    })
}

#[derive(Serialize)]
struct ResourcesFile<'a> {
    schema: String,
    config: &'a RunConfig,
    qubit: ResourceReport,
    qu8it: ResourceReport,
    enumerated: ResourceReport,
    /// Qubit over qu8it: qudits, kinetic, electric.
    ratios: [Option<f64>; 3],
}

fn resources_csv(rows: &[&ResourceReport]) -> String {
    let mut s = String::from(
        "mapping,source,nf,L,qudits,kinetic_entangling,electric_entangling,h_entangling,ungrouped_total,controlled_gates,single_rotations\n",
    );
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let mapping = match r.mapping {
            Mapping::Qu8it => "qu8it",
            Mapping::Qubit => "qubit",
        };
        let source = serde_json::to_value(r.source)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{mapping},{source},{},{},{},{},{},{},{},{},{}",
            r.nf,
            r.l,
            r.qudit_count,
            r.kinetic_entangling,
            r.electric_entangling,
            opt(r.h_entangling),
            opt(r.ungrouped.map(|u| u.total())),
            opt(r.controlled_gate_count),
            opt(r.single_rotation_count)
        );
    }
    s
}

pub fn cmd_resources(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let qubit = closed_form_counts(p, Mapping::Qubit);
    let qu8it = closed_form_counts(p, Mapping::Qu8it);
    let enumerated = enumerate_circuit_counts(p, p.include_h)?;
    let ratios = reduction_ratios(p);
    prepare_out(cfg)?;
    let mut files = Vec::new();
    if cfg.format == Format::Csv {
        write_text(cfg, "resources.csv", &resources_csv(&[&qubit, &qu8it, &enumerated]), &mut files)?;
    }
    let manifest = ResourcesFile {
        schema: schema("resources"),
        config: cfg,
        qubit,
        qu8it,
        enumerated,
        ratios,
    };
    write_text(cfg, "resources.json", &to_json(&manifest)?, &mut files)?;

    let mut text = render_table(&[(p.nf, p.l)]);
    let e = &manifest.enumerated;
    let _ = writeln!(
        text,
        "enumerated qu8it: kinetic {} electric {} h {} | ungrouped {} | controlled {} singles {}",
        e.kinetic_entangling,
        e.electric_entangling,
        e.h_entangling.unwrap_or(0),
        e.ungrouped.map(|u| u.total()).unwrap_or(0),
        e.controlled_gate_count.unwrap_or(0),
        e.single_rotation_count.unwrap_or(0)
    );
    Ok(Outcome {
        text,
        success: true,
        files,
    })
}

#[derive(Serialize)]
struct VerifyFile<'a> {
    schema: String,
    passed: bool,
    checks: &'a [Check],
}

fn algebraic(section: Section) -> bool {
    matches!(
        section,
        Section::AppA | Section::AppB | Section::AppC | Section::AppD | Section::Hamiltonian
    )
}

/// Applies an identity-tolerance override to the algebraic checks.
pub fn apply_identity_tol(report: &mut Report, tol: f64) {
    for ch in report.checks.iter_mut().filter(|c| algebraic(c.section)) {
        if ch.tolerance == IDENTITY_TOL {
            ch.tolerance = tol;
            ch.passed = ch.residual <= tol;
        }
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let sections: Vec<Section> = if cfg.sections.is_empty() {
        Section::ALL.to_vec()
    } else {
        cfg.sections.clone()
    };
    let mut report = run_suite(&sections);
    if let Some(tol) = cfg.identity_tol {
        apply_identity_tol(&mut report, tol);
    }
    let file = VerifyFile {
        schema: schema("verify"),
        passed: report.passed(),
        checks: &report.checks,
    };
    let json = to_json(&file)?;
    prepare_out(cfg)?;
    let mut files = Vec::new();
    write_json(&cfg.out.join("verify.json"), &file)?;
    files.push(cfg.out.join("verify.json"));

    let text = match cfg.format {
        Format::Json => json,
        Format::Csv => {
            let mut t = String::new();
            for c in &report.checks {
                let _ = writeln!(
                    t,
                    "[{}] {:<13} {:<44} residual {:.3e} (tol {:.1e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.section.name(),
                    c.name,
                    c.residual,
                    c.tolerance
                );
            }
            let failed = report.failures().count();
            let _ = writeln!(t, "{} checks, {} failed", report.checks.len(), failed);
            t
        }
    };
    Ok(Outcome {
        text,
        success: report.passed(),
        files,
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    use crate::config::CommandKind::*;
    match cfg.command {
        Spectrum => cmd_spectrum(cfg),
        Evolve => cmd_evolve(cfg),
        Resources => cmd_resources(cfg),
        Verify => cmd_verify(cfg),
    }
}
