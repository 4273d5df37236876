//! Scenario execution: configuration loading, paired ion/model evolution,
//! CSV trajectory output with a JSON metadata sidecar, and the convergence
//! check (halved step, raised cutoff).
//!
//! Config files carry every frequency in Hz; they are multiplied by 2π on
//! load so the rest of the stack works in angular units.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{make_space, HilbertSpace, QuantumState};
use crate::dynamics::{evolve_lindblad, evolve_unitary, NoiseSpec, TimeGrid};
use crate::error::{Error, Result};
use crate::ionsim::{ion_hamiltonian, recommended_timestep, FidelityLevel, IonParams};
use crate::mapping::{classify_regime, stretch_mode_error, tones_from_model, STRETCH_MODE_BOUND};
use crate::models::{build_model, dicke_state, ModelKind, ModelSpec, Picture};
use crate::observables::{measure_trajectory, Trajectory};
use crate::presets::Preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceNoise {
    Unitary,
    Dephasing,
}

impl std::fmt::Display for ReferenceNoise {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReferenceNoise::Unitary => f.write_str("unitary"),
            ReferenceNoise::Dephasing => f.write_str("dephasing"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub n_qubits: usize,
    /// Mode frequency ω/2π in Hz.
    pub omega_hz: f64,
    /// Qubit frequency ω^q/2π in Hz.
    pub omega_q_hz: f64,
    /// Coupling g/2π in Hz.
    pub g_hz: f64,
    /// Bias drive h/2π in Hz (biased model only).
    #[serde(default)]
    pub h_hz: f64,
    /// Counter-rotating weight (dimensionless).
    #[serde(default = "one")]
    pub s: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonConfig {
    /// Trap frequency ν/2π in Hz.
    pub nu_hz: f64,
    /// Optical transition frequency ω⁰/2π in Hz (metadata only).
    #[serde(default = "default_omega0_hz")]
    pub omega0_hz: f64,
    pub eta: f64,
    /// Dephasing rate Γ/2π in Hz.
    #[serde(default)]
    pub gamma_hz: f64,
}

fn default_omega0_hz() -> f64 {
    1.0e14
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateConfig {
    #[serde(default)]
    pub phonons: usize,
    /// Spin configuration: a string of `d`/`u` (or `↓`/`↑`) per qubit, or
    /// `dicke:k` for the symmetric k-excitation Dicke state.
    pub spins: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Horizon as gt/π.
    pub gt_end_pi: f64,
    /// Optional fixed-step override in seconds.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    500
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub model: ModelConfig,
    pub ion: IonConfig,
    #[serde(default = "default_level")]
    pub fidelity_level: FidelityLevel,
    pub initial_state: InitialStateConfig,
    pub grid: GridConfig,
    pub cutoff: usize,
    #[serde(default = "default_reference_noise")]
    pub reference_noise: ReferenceNoise,
    /// Output stem: writes `<output>.csv` and `<output>.meta.json`.
    #[serde(default)]
    pub output: Option<String>,
}

fn default_level() -> FidelityLevel {
    FidelityLevel::SidebandRwa
}

fn default_reference_noise() -> ReferenceNoise {
    ReferenceNoise::Unitary
}

const TWO_PI: f64 = std::f64::consts::TAU;

impl ScenarioConfig {
    pub fn from_preset(p: &Preset) -> Self {
        ScenarioConfig {
            name: p.name.to_string(),
            model: ModelConfig {
                kind: p.model.kind,
                n_qubits: p.model.n_qubits,
                omega_hz: p.model.omega / TWO_PI,
                omega_q_hz: p.model.omega_q / TWO_PI,
                g_hz: p.model.g / TWO_PI,
                h_hz: p.model.h / TWO_PI,
                s: p.model.s,
            },
            ion: IonConfig {
                nu_hz: p.ion.nu / TWO_PI,
                omega0_hz: p.ion.omega0 / TWO_PI,
                eta: p.ion.eta,
                gamma_hz: p.ion.gamma / TWO_PI,
            },
            fidelity_level: FidelityLevel::SidebandRwa,
            initial_state: InitialStateConfig {
                phonons: 1,
                spins: "d".repeat(p.model.n_qubits),
            },
            grid: GridConfig { gt_end_pi: p.gt_end_pi, dt: None, samples: 500 },
            cutoff: p.cutoff,
            reference_noise: ReferenceNoise::Unitary,
            output: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ScenarioConfig = serde_json::from_str(&text)?;
        Ok(cfg)
    }

    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec {
            kind: self.model.kind,
            n_qubits: self.model.n_qubits,
            omega: TWO_PI * self.model.omega_hz,
            omega_q: TWO_PI * self.model.omega_q_hz,
            g: TWO_PI * self.model.g_hz,
            h: TWO_PI * self.model.h_hz,
            s: self.model.s,
        }
    }

    pub fn ion_params(&self) -> IonParams {
        IonParams {
            nu: TWO_PI * self.ion.nu_hz,
            omega0: TWO_PI * self.ion.omega0_hz,
            eta: self.ion.eta,
            gamma: TWO_PI * self.ion.gamma_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model_spec().validate()?;
        self.ion_params().validate()?;
        if !(self.grid.gt_end_pi > 0.0) {
            return Err(Error::Config("grid.gt_end_pi must be positive".into()));
        }
        if self.grid.samples == 0 {
            return Err(Error::Config("grid.samples must be positive".into()));
        }
        if let Some(dt) = self.grid.dt {
            if !(dt > 0.0) {
                return Err(Error::Config("grid.dt override must be positive".into()));
            }
        }
        parse_initial_state(
            &self.initial_state,
            make_space(self.model.n_qubits, self.cutoff)?,
        )?;
        Ok(())
    }
}

fn parse_initial_state(cfg: &InitialStateConfig, space: HilbertSpace) -> Result<QuantumState> {
    if cfg.phonons > space.fock_cutoff() {
        return Err(Error::Config(format!(
            "initial phonon number {} exceeds Fock cutoff {}",
            cfg.phonons,
            space.fock_cutoff()
        )));
    }
    if let Some(k) = cfg.spins.strip_prefix("dicke:") {
        let k: usize = k
            .parse()
            .map_err(|_| Error::Config(format!("bad Dicke excitation count in '{}'", cfg.spins)))?;
        return dicke_state(space, k, cfg.phonons);
    }
    let n = space.n_qubits();
    let chars: Vec<char> = cfg.spins.chars().collect();
    if chars.len() != n {
        return Err(Error::Config(format!(
            "spin string '{}' has {} entries for {} qubits",
            cfg.spins,
            chars.len(),
            n
        )));
    }
    let mut qubits = 0usize;
    for (m, c) in chars.iter().enumerate() {
        match c {
            'd' | 'D' | '↓' => {}
            'u' | 'U' | '↑' => qubits |= space.qubit_bit(m + 1),
            other => {
                return Err(Error::Config(format!("unknown spin character '{other}'")));
            }
        }
    }
    QuantumState::basis(space, cfg.phonons, qubits)
}

/// Paired trajectories from one scenario run: the driven ion system and the
/// target-model reference on the same sample grid. The ion trajectory carries
/// the fidelity column (vs the reference).
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub ion: Trajectory,
    pub model: Trajectory,
    pub grid_dt: f64,
    pub n_steps: usize,
    /// Integrator invariants over the sampled ion states.
    pub invariants: StateInvariants,
}

/// Worst-case deviations over all sampled states of one evolution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StateInvariants {
    pub max_trace_drift: f64,
    pub max_herm_defect: f64,
    pub min_eigenvalue: f64,
}

fn state_invariants(states: &[QuantumState]) -> StateInvariants {
    let mut inv = StateInvariants {
        max_trace_drift: 0.0,
        max_herm_defect: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    for st in states {
        match st.rep() {
            crate::algebra::StateRep::Pure(v) => {
                let norm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                inv.max_trace_drift = inv.max_trace_drift.max((norm2 - 1.0).abs());
                inv.min_eigenvalue = inv.min_eigenvalue.min(0.0);
            }
            crate::algebra::StateRep::Mixed(rho) => {
                let tr: num_complex::Complex64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
                inv.max_trace_drift =
                    inv.max_trace_drift.max((tr.re - 1.0).abs().max(tr.im.abs()));
                inv.max_herm_defect = inv.max_herm_defect.max(crate::algebra::herm_defect(rho));
                inv.min_eigenvalue = inv.min_eigenvalue.min(st.min_eigenvalue());
            }
        }
    }
    inv
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    config.validate()?;
    let spec = config.model_spec();
    let ion = config.ion_params();
    let space = make_space(spec.n_qubits, config.cutoff)?;
    let psi0 = parse_initial_state(&config.initial_state, space)?;

    let t_end = config.grid.gt_end_pi * std::f64::consts::PI / spec.g;
    let tones = tones_from_model(&spec, &ion)?;
    let h_model = build_model(&spec, space, Picture::Interaction)?;
    let h_ion = ion_hamiltonian(&ion, &tones, space, config.fidelity_level)?;
    let dt_max = match config.grid.dt {
        Some(dt) => dt,
        None => {
            // The envelope rule alone under-resolves strong coupling at high
            // Fock cutoffs; also demand 40 points per spectral-radius
            // oscillation so RK4 keeps density matrices positive.
            let dt_env = recommended_timestep(&ion, &tones, config.fidelity_level, t_end)?;
            let lam = h_ion.spectral_bound().max(h_model.spectral_bound());
            if lam > 0.0 {
                dt_env.min(TWO_PI / (40.0 * lam))
            } else {
                dt_env
            }
        }
    };
    let grid = TimeGrid::new(t_end, dt_max, config.grid.samples)?;
    let times = grid.sample_times();

    let model_states = match config.reference_noise {
        ReferenceNoise::Unitary => evolve_unitary(&h_model, &psi0, &grid)?,
        ReferenceNoise::Dephasing => {
            evolve_lindblad(&h_model, &NoiseSpec { dephasing_rate: ion.gamma }, &psi0, &grid)?
        }
    };

    let ion_states = if ion.gamma > 0.0 {
        evolve_lindblad(&h_ion, &NoiseSpec { dephasing_rate: ion.gamma }, &psi0, &grid)?
    } else {
        evolve_unitary(&h_ion, &psi0, &grid)?
    };

    let mut model_traj = measure_trajectory(&model_states, &times, None, &spec, space)?;
    let mut ion_traj =
        measure_trajectory(&ion_states, &times, Some(&model_states), &spec, space)?;

    let regime = classify_regime(&spec)?;
    let mut notes = Vec::new();
    if ion.lamb_dicke_marginal() {
        notes.push(format!(
            "eta = {} is marginal for the first-order Lamb-Dicke expansion",
            ion.eta
        ));
    }
    let rabi_max = tones.iter().map(|t| t.rabi).fold(0.0, f64::max);
    let stretch = stretch_mode_error(&ion, rabi_max, spec.n_qubits)?;
    if stretch >= STRETCH_MODE_BOUND {
        notes.push(format!("stretch-mode excitation probability {stretch:.3e} exceeds 1e-4"));
    }
    notes.push("regime thresholds on g_eff/omega: WF < 0.1 <= USC < 1 <= DSC".to_string());
    notes.push(
        "collective dephasing would scale coherence decay by up to N^2 (not simulated)"
            .to_string(),
    );

    let meta = crate::observables::TrajectoryMeta {
        scenario: config.name.clone(),
        fidelity_level: config.fidelity_level.to_string(),
        cutoff: config.cutoff,
        dt: grid.dt(),
        n_steps: grid.n_steps(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        regime: regime.label.to_string(),
        reference_noise: config.reference_noise.to_string(),
        notes,
        parameters: serde_json::to_value(config)?,
    };
    ion_traj.metadata = meta.clone();
    model_traj.metadata = meta;

    Ok(ScenarioResult {
        ion: ion_traj,
        model: model_traj,
        grid_dt: grid.dt(),
        n_steps: grid.n_steps(),
        invariants: state_invariants(&ion_states),
    })
}

pub const CSV_HEADER: &str = "t_seconds,gt,phonon_ion,excitation_ion,parity_ion,sz_ion,\
                              phonon_model,excitation_model,parity_model,sz_model,fidelity";

/// Deterministic CSV: fixed column order, 12 significant digits, header row.
pub fn write_csv(result: &ScenarioResult, mut out: impl std::io::Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for (i, m) in result.ion.samples.iter().zip(result.model.samples.iter()) {
        let f = i.fidelity.unwrap_or(f64::NAN);
        writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            i.t, i.gt, i.phonon, i.excitation, i.parity, i.sz,
            m.phonon, m.excitation, m.parity, m.sz, f
        )?;
    }
    Ok(())
}

/// Write `<stem>.csv` plus `<stem>.meta.json`. The timestamp lives only in
/// the sidecar so the CSV stays byte-identical across reruns.
pub fn write_outputs(result: &ScenarioResult, stem: &Path) -> Result<()> {
    let csv_path = stem.with_extension("csv");
    let meta_path = stem.with_extension("meta.json");
    let file = std::fs::File::create(&csv_path)?;
    write_csv(result, std::io::BufWriter::new(file))?;

    let unix_time = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let sidecar = serde_json::json!({
        "metadata": serde_json::to_value(&result.ion.metadata)?,
        "written_unix_time": unix_time,
        "csv": csv_path.file_name().and_then(|s| s.to_str()),
    });
    let mut f = std::fs::File::create(&meta_path)?;
    writeln!(f, "{}", serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub scenario: String,
    pub base_dt: f64,
    pub refined_dt: f64,
    pub base_cutoff: usize,
    pub refined_cutoff: usize,
    /// Largest absolute change per CSV column, observable columns only.
    pub max_deltas: Vec<(String, f64)>,
    pub max_delta: f64,
    pub pass: bool,
}

/// Re-run with halved step and cutoff raised by 5; report the largest
/// absolute change of every observable column at every sample. Passes when
/// all changes are below 1e−3.
pub fn convergence_check(config: &ScenarioConfig) -> Result<ConvergenceReport> {
    let base = run_scenario(config)?;
    let mut refined_cfg = config.clone();
    refined_cfg.cutoff += 5;
    refined_cfg.grid.dt = Some(base.grid_dt / 2.0);
    let refined = run_scenario(&refined_cfg)?;

    let columns: [(&str, fn(&crate::observables::ObservableSample) -> f64); 5] = [
        ("phonon", |s| s.phonon),
        ("excitation", |s| s.excitation),
        ("parity", |s| s.parity),
        ("sz", |s| s.sz),
        ("fidelity", |s| s.fidelity.unwrap_or(f64::NAN)),
    ];
    let mut max_deltas = Vec::new();
    for (name, getter) in columns {
        for (traj_name, a, b) in
            [("ion", &base.ion, &refined.ion), ("model", &base.model, &refined.model)]
        {
            if name == "fidelity" && traj_name == "model" {
                continue;
            }
            let d = a
                .samples
                .iter()
                .zip(b.samples.iter())
                .map(|(x, y)| (getter(x) - getter(y)).abs())
                .fold(0.0, f64::max);
            max_deltas.push((format!("{name}_{traj_name}"), d));
        }
    }
    let max_delta = max_deltas.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    Ok(ConvergenceReport {
        scenario: config.name.clone(),
        base_dt: base.grid_dt,
        refined_dt: base.grid_dt / 2.0,
        base_cutoff: config.cutoff,
        refined_cutoff: config.cutoff + 5,
        max_deltas,
        max_delta,
        pass: max_delta < 1e-3,
    })
}
