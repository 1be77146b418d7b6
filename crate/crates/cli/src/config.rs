//! Run configuration: defaults, an optional JSON file, then command-line
//! flags, in increasing priority.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qu8it::identities::Section;
use qu8it::lattice::{BaryonSector, LatticeParams};
use qu8it::sparse::DEFAULT_DENSE_CAP;
use qu8it::statespec::StateSpec;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QU8IT_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "qu8it-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Spectrum,
    Evolve,
    Resources,
    Verify,
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: LatticeParams,
    pub t: f64,
    pub steps: usize,
    pub order: u8,
    pub state: StateSpec,
    pub sector: Option<BaryonSector>,
    pub out: PathBuf,
    pub format: Format,
    pub dense_cap: usize,
    /// Empty means every section.
    pub sections: Vec<Section>,
    /// Replaces the tolerance of every algebraic identity check.
    pub identity_tol: Option<f64>,
}

/// Partial configuration as read from a JSON file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub nf: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub masses: Option<Vec<f64>>,
    pub g: Option<f64>,
    pub h: Option<f64>,
    pub include_h: Option<bool>,
    pub t: Option<f64>,
    pub steps: Option<usize>,
    pub order: Option<u8>,
    pub state: Option<StateSpec>,
    pub sector: Option<BaryonSector>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub dense_cap: Option<usize>,
    pub sections: Option<Vec<Section>>,
    pub identity_tol: Option<f64>,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON config file; flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of flavours.
    #[arg(long)]
    pub nf: Option<usize>,
    /// Number of spatial sites.
    #[arg(long = "L", visible_alias = "l")]
    pub l: Option<usize>,
    /// Quark mass, or one comma-separated mass per flavour.
    #[arg(long, value_delimiter = ',')]
    pub mass: Option<Vec<f64>>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Include the total-charge penalty term.
    #[arg(long, value_name = "BOOL")]
    pub include_h: Option<bool>,
    /// Output directory (default: $QU8IT_OUT_DIR, else ./qu8it-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Largest dimension diagonalized densely.
    #[arg(long)]
    pub dense_cap: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Baryon sector, e.g. 0, 1/3, B=-1.
    #[arg(long)]
    pub sector: Option<BaryonSector>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Total evolution time.
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of Trotter steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Trotter order, 1 or 2.
    #[arg(long)]
    pub order: Option<u8>,
    /// Initial state: per-slot labels such as "1,8bar", or "gs:B=0".
    #[arg(long)]
    pub state: Option<StateSpec>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Restrict to a section (repeatable): appA, appB, appC, appD,
    /// hamiltonian, spectra, connectivity, resources.
    #[arg(long = "section")]
    pub sections: Vec<Section>,
    /// Tolerance for algebraic identity checks.
    #[arg(long)]
    pub identity_tol: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact eigenvalues with the colour Casimir of every level.
    Spectrum(SpectrumArgs),
    /// Trotter and exact trajectories with observables.
    Evolve(EvolveArgs),
    /// Entangling-gate counts, closed form and enumerated.
    Resources(SpectrumArgs),
    /// Run the identity and consistency suite.
    Verify(VerifyArgs),
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

impl RunConfig {
    pub fn defaults(command: CommandKind) -> Self {
        RunConfig {
            command,
            params: LatticeParams::uniform(1, 1, 1.0, 1.0, 0.0),
            t: 1.0,
            steps: 20,
            order: 1,
            state: StateSpec::Basis(Vec::new()),
            sector: None,
            out: std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
            format: Format::Csv,
            dense_cap: DEFAULT_DENSE_CAP,
            sections: Vec::new(),
            identity_tol: None,
        }
    }

    fn apply_file(&mut self, f: FileConfig) {
        let p = &mut self.params;
        p.nf = f.nf.unwrap_or(p.nf);
        p.l = f.l.unwrap_or(p.l);
        if let Some(m) = f.masses {
            p.masses = m;
        }
        p.g = f.g.unwrap_or(p.g);
        p.h = f.h.unwrap_or(p.h);
        p.include_h = f.include_h.unwrap_or(p.include_h);
        self.t = f.t.unwrap_or(self.t);
        self.steps = f.steps.unwrap_or(self.steps);
        self.order = f.order.unwrap_or(self.order);
        if let Some(s) = f.state {
            self.state = s;
        }
        self.sector = f.sector.or(self.sector);
        if let Some(o) = f.out {
            self.out = o;
        }
        self.format = f.format.unwrap_or(self.format);
        self.dense_cap = f.dense_cap.unwrap_or(self.dense_cap);
        if let Some(s) = f.sections {
            self.sections = s;
        }
        self.identity_tol = f.identity_tol.or(self.identity_tol);
    }

    fn apply_common(&mut self, a: &CommonArgs) -> Result<()> {
        if let Some(path) = &a.config {
            self.apply_file(load_file(path)?);
        }
        let p = &mut self.params;
        p.nf = a.nf.unwrap_or(p.nf);
        p.l = a.l.unwrap_or(p.l);
        p.g = a.g.unwrap_or(p.g);
        p.h = a.h.unwrap_or(p.h);
        p.include_h = a.include_h.unwrap_or(p.include_h);
        if let Some(m) = &a.mass {
            p.masses = m.clone();
        }
        // A single mass applies to every flavour.
        if p.masses.len() == 1 && p.nf > 1 {
            p.masses = vec![p.masses[0]; p.nf];
        }
        if let Some(o) = &a.out {
            self.out = o.clone();
        }
        self.format = a.format.unwrap_or(self.format);
        self.dense_cap = a.dense_cap.unwrap_or(self.dense_cap);
        Ok(())
    }

    /// Resolves a parsed command line into a validated configuration.
    pub fn from_command(cmd: &Command) -> Result<Self> {
        let cfg = match cmd {
            Command::Spectrum(a) | Command::Resources(a) => {
                let kind = if matches!(cmd, Command::Spectrum(_)) {
                    CommandKind::Spectrum
                } else {
                    CommandKind::Resources
                };
                let mut cfg = RunConfig::defaults(kind);
                cfg.apply_common(&a.common)?;
                cfg.sector = a.sector.or(cfg.sector);
                cfg
            }
            Command::Evolve(a) => {
                let mut cfg = RunConfig::defaults(CommandKind::Evolve);
                cfg.apply_common(&a.common)?;
                cfg.t = a.t.unwrap_or(cfg.t);
                cfg.steps = a.steps.unwrap_or(cfg.steps);
                cfg.order = a.order.unwrap_or(cfg.order);
                if let Some(s) = &a.state {
                    cfg.state = s.clone();
                }
                cfg
            }
            Command::Verify(a) => {
                let mut cfg = RunConfig::defaults(CommandKind::Verify);
                cfg.apply_common(&a.common)?;
                if !a.sections.is_empty() {
                    cfg.sections = a.sections.clone();
                }
                cfg.identity_tol = a.identity_tol.or(cfg.identity_tol);
                cfg
            }
        };
        cfg.validate()?;
        Ok(cfg.with_default_state())
    }

    /// Empty basis spec means the all-empty register `1,1̄,…`.
    fn with_default_state(mut self) -> Self {
        if matches!(&self.state, StateSpec::Basis(v) if v.is_empty()) {
            let n = self.params.qu8it_count();
            self.state = StateSpec::Basis(
                (0..n).map(|s| (1, self.params.is_anti_slot(s))).collect(),
            );
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.t.is_finite() && self.t >= 0.0) {
            bail!("--t must be a finite non-negative time, got {}", self.t);
        }
        if self.steps == 0 {
            bail!("--steps must be at least 1");
        }
        if self.order != 1 && self.order != 2 {
            bail!("--order must be 1 or 2, got {}", self.order);
        }
        if self.dense_cap == 0 {
            bail!("--dense-cap must be positive");
        }
        if let Some(tol) = self.identity_tol {
            if !(tol.is_finite() && tol >= 0.0) {
                bail!("--identity-tol must be a non-negative number");
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(qu8it::io::to_json(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
