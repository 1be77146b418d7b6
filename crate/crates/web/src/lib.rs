//! Browser bindings: spectra, trajectories and gate counts as JSON.
//!
//! Every entry point takes a JSON request and returns a JSON response. The
//! `*_json` functions are the wasm exports; the plain functions behind them
//! are what the native tests call.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use qu8it::evolution::{
    build_trotter_plan, exact_trajectory, trotter_evolve, ExactEvolver, ObservableRecord,
    ObservableSet,
};
use qu8it::lattice::{build_qu8it_hamiltonian, BaryonSector, LatticeParams, Mapping};
use qu8it::resources::{closed_form_counts, reduction_ratios, ResourceReport};
use qu8it::spectrum::{spectrum, Level};
use qu8it::statespec::StateSpec;

/// Largest register diagonalized in the browser; larger exact evolutions
/// fall back to Krylov propagation.
pub const WEB_DENSE_CAP: usize = 512;
/// Largest register the page will simulate at all.
pub const WEB_MAX_DIM: usize = 4096;

#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
struct Model {
    nf: usize,
    #[serde(rename = "L")]
    l: usize,
    mass: f64,
    g: f64,
    h: f64,
}

impl Default for Model {
    fn default() -> Self {
        Model {
            nf: 1,
            l: 1,
            mass: 1.0,
            g: 1.0,
            h: 0.0,
        }
    }
}

impl Model {
    fn params(&self) -> Result<LatticeParams, String> {
        let p = LatticeParams::uniform(self.nf, self.l, self.mass, self.g, self.h);
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }

    fn checked_params(&self) -> Result<LatticeParams, String> {
        let p = self.params()?;
        let dim = 8usize.checked_pow(p.qu8it_count() as u32).unwrap_or(usize::MAX);
        if dim > WEB_MAX_DIM {
            return Err(format!("register dimension {dim} exceeds the browser limit {WEB_MAX_DIM}"));
        }
        Ok(p)
    }
}

#[derive(Debug, Deserialize)]
struct SpectrumRequest {
    #[serde(flatten)]
    model: Model,
    #[serde(default)]
    sector: Option<BaryonSector>,
}

#[derive(Serialize)]
struct SpectrumResponse {
    dim: usize,
    levels: Vec<Level>,
}

#[derive(Debug, Deserialize)]
struct EvolveRequest {
    #[serde(flatten)]
    model: Model,
    #[serde(default = "default_t")]
    t: f64,
    #[serde(default = "default_steps")]
    steps: usize,
    #[serde(default = "default_order")]
    order: u8,
    #[serde(default)]
    state: Option<StateSpec>,
}

fn default_t() -> f64 {
    1.0
}

fn default_steps() -> usize {
    20
}

fn default_order() -> u8 {
    1
}

#[derive(Serialize)]
struct EvolveResponse {
    dim: usize,
    state: String,
    trotter: Vec<ObservableRecord>,
    exact: Vec<ObservableRecord>,
}

#[derive(Debug, Deserialize)]
struct ResourcesRequest {
    #[serde(flatten)]
    model: Model,
}

#[derive(Serialize)]
struct ResourcesResponse {
    qubit: ResourceReport,
    qu8it: ResourceReport,
    /// Qubit over qu8it: qudits, kinetic, electric.
    ratios: [Option<f64>; 3],
}

fn parse<'a, T: Deserialize<'a>>(request: &'a str) -> Result<T, String> {
    serde_json::from_str(request).map_err(|e| format!("bad request: {e}"))
}

fn respond<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Levels with energy and colour Casimir, optionally one baryon sector.
pub fn spectrum_response(request: &str) -> Result<String, String> {
    let req: SpectrumRequest = parse(request)?;
    let h = build_qu8it_hamiltonian(&req.model.checked_params()?).map_err(|e| e.to_string())?;
    let levels = spectrum(&h, req.sector, WEB_DENSE_CAP).map_err(|e| e.to_string())?;
    respond(&SpectrumResponse { dim: h.dim(), levels })
}

/// Trotter and exact trajectories of the requested initial state.
pub fn evolve_response(request: &str) -> Result<String, String> {
    let req: EvolveRequest = parse(request)?;
    if req.steps == 0 || req.steps > 2000 {
        return Err("steps must be between 1 and 2000".into());
    }
    if !(req.t.is_finite() && req.t >= 0.0) {
        return Err("t must be a finite non-negative time".into());
    }
    let p = req.model.checked_params()?;
    let h = build_qu8it_hamiltonian(&p).map_err(|e| e.to_string())?;
    let state = req.state.unwrap_or_else(|| {
        StateSpec::Basis((0..p.qu8it_count()).map(|s| (1, p.is_anti_slot(s))).collect())
    });
    let run = || -> qu8it::Result<EvolveResponse> {
        let psi0 = state.resolve(&h, WEB_DENSE_CAP)?;
        let plan = build_trotter_plan(&h, req.order)?;
        let obs = ObservableSet::new(&h)?;
        let exact = ExactEvolver::auto(&h.matrix, WEB_DENSE_CAP)?;
        let (_, trotter) = trotter_evolve(&plan, &obs, &psi0, req.t, req.steps, Some(&exact))?;
        let reference = exact_trajectory(&exact, &obs, &psi0, req.t, req.steps)?;
        Ok(EvolveResponse {
            dim: h.dim(),
            state: state.to_string(),
            trotter,
            exact: reference,
        })
    };
    respond(&run().map_err(|e| e.to_string())?)
}

/// Closed-form entangling-gate counts for both encodings.
pub fn resources_response(request: &str) -> Result<String, String> {
    let req: ResourcesRequest = parse(request)?;
    let p = req.model.params()?;
    respond(&ResourcesResponse {
        qubit: closed_form_counts(&p, Mapping::Qubit),
        qu8it: closed_form_counts(&p, Mapping::Qu8it),
        ratios: reduction_ratios(&p),
    })
}

#[wasm_bindgen]
pub fn spectrum_json(request: &str) -> Result<String, JsValue> {
    spectrum_response(request).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn evolve_json(request: &str) -> Result<String, JsValue> {
    evolve_response(request).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn resources_json(request: &str) -> Result<String, JsValue> {
    resources_response(request).map_err(|e| JsValue::from_str(&e))
}
