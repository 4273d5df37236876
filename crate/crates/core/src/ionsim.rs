//! Trapped-ion drive Hamiltonians.
//!
//! Two fidelity levels are supported: `full` keeps the first-order Lamb-Dicke
//! expansion of every tone, including off-resonant micromotion terms rotating
//! at trap-frequency scale; `sideband_rwa` keeps only the slow resonant
//! carrier/red/blue terms left after the vibrational rotating-wave
//! approximation.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{ladder, spin, HilbertSpace, SpinKind, SpinTarget};
use crate::error::{Error, Result};
use crate::models::TimeDependentHamiltonian;

/// Trap and ion constants. All frequencies angular (rad/s); `omega0` is the
/// optical transition frequency and is metadata only (never integrated).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IonParams {
    pub nu: f64,
    pub omega0: f64,
    pub eta: f64,
    pub gamma: f64,
}

impl IonParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::Config("Lamb-Dicke parameter eta must be positive".into()));
        }
        if self.eta > 0.2 {
            return Err(Error::Config(format!(
                "eta = {} is outside the Lamb-Dicke regime guard (max 0.2)",
                self.eta
            )));
        }
        if self.nu <= 0.0 {
            return Err(Error::Config("trap frequency nu must be positive".into()));
        }
        if self.gamma < 0.0 {
            return Err(Error::Config("dephasing rate gamma must be non-negative".into()));
        }
        Ok(())
    }

    /// True when eta is high enough that first-order Lamb-Dicke truncation
    /// deserves a warning (soft threshold, not an error).
    pub fn lamb_dicke_marginal(&self) -> bool {
        self.eta > 0.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToneKind {
    Carrier,
    Red,
    Blue,
}

/// One laser drive line. `detuning` is the small per-resonance detuning δ;
/// the laser detuning with respect to the ionic transition follows from the
/// tone kind: Δ = δ (carrier), −ν+δ (red), ν+δ (blue).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub kind: ToneKind,
    pub rabi: f64,
    pub detuning: f64,
    pub phase: f64,
}

impl Tone {
    pub fn laser_detuning(&self, nu: f64) -> f64 {
        match self.kind {
            ToneKind::Carrier => self.detuning,
            ToneKind::Red => -nu + self.detuning,
            ToneKind::Blue => nu + self.detuning,
        }
    }

    /// Absolute laser frequency ω_L = ω⁰ + Δ (informational).
    pub fn laser_frequency(&self, params: &IonParams) -> f64 {
        params.omega0 + self.laser_detuning(params.nu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityLevel {
    Full,
    SidebandRwa,
}

impl std::fmt::Display for FidelityLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FidelityLevel::Full => f.write_str("full"),
            FidelityLevel::SidebandRwa => f.write_str("sideband_rwa"),
        }
    }
}

fn check_tones(tones: &[Tone]) -> Result<()> {
    if tones.is_empty() {
        return Err(Error::Config("tone list is empty".into()));
    }
    for (i, a) in tones.iter().enumerate() {
        if a.rabi < 0.0 {
            return Err(Error::Config("tone Rabi frequency must be non-negative".into()));
        }
        for b in &tones[i + 1..] {
            if a.kind == b.kind {
                return Err(Error::Config(format!("duplicate {:?} tone", a.kind)));
            }
        }
    }
    Ok(())
}

/// Multi-tone interaction-picture drive Hamiltonian.
///
/// Per tone, the first-order Lamb-Dicke expansion is
/// `H = (Ω/2) Σ^+ e^{i(φ−Δt)} [1 + iη(a e^{−iνt} + a† e^{iνt})] + H.c.`
/// At `sideband_rwa` level only the slow resonant term of each tone survives.
pub fn ion_hamiltonian(
    params: &IonParams,
    tones: &[Tone],
    space: HilbertSpace,
    level: FidelityLevel,
) -> Result<TimeDependentHamiltonian> {
    params.validate()?;
    check_tones(tones)?;

    let (a, adag) = ladder(space);
    let sp = spin(space, SpinKind::SigmaPlus, SpinTarget::Collective)?;
    let a_sp = a.matrix().dot(sp.matrix());
    let adag_sp = adag.matrix().dot(sp.matrix());

    let mut h = TimeDependentHamiltonian::new(space);
    for tone in tones {
        let phase = C64::new(0.0, tone.phase).exp();
        match level {
            FidelityLevel::SidebandRwa => {
                let half = C64::new(tone.rabi / 2.0, 0.0);
                let side = C64::i() * C64::new(tone.rabi * params.eta / 2.0, 0.0);
                match tone.kind {
                    ToneKind::Carrier => {
                        h.push_term(half * phase, -tone.detuning, sp.matrix().clone())
                    }
                    ToneKind::Red => h.push_term(side * phase, -tone.detuning, a_sp.clone()),
                    ToneKind::Blue => h.push_term(side * phase, -tone.detuning, adag_sp.clone()),
                }
            }
            FidelityLevel::Full => {
                let half = C64::new(tone.rabi / 2.0, 0.0) * phase;
                let side = half * C64::i() * C64::new(params.eta, 0.0);
                let d = tone.detuning;
                let nu = params.nu;
                // Frequencies −Δ, −(Δ+ν), −(Δ−ν) written per kind so the
                // resonant term carries exactly −δ (no ν cancellation noise).
                let (f_spin, f_red, f_blue) = match tone.kind {
                    ToneKind::Carrier => (-d, -(d + nu), nu - d),
                    ToneKind::Red => (nu - d, -d, 2.0 * nu - d),
                    ToneKind::Blue => (-(nu + d), -(2.0 * nu + d), -d),
                };
                h.push_term(half, f_spin, sp.matrix().clone());
                h.push_term(side, f_red, a_sp.clone());
                h.push_term(side, f_blue, adag_sp.clone());
            }
        }
    }
    Ok(h)
}

/// Fixed-step size guaranteeing at least 40 integration points per fastest
/// envelope oscillation, capped at `t_total / 1000`.
///
/// The fastest angular frequency is taken as `2ν + max|Δ|` at `full` level
/// and the largest of the per-tone δ and derived model frequencies at
/// `sideband_rwa` level.
pub fn recommended_timestep(
    params: &IonParams,
    tones: &[Tone],
    level: FidelityLevel,
    t_total: f64,
) -> Result<f64> {
    params.validate()?;
    check_tones(tones)?;
    let omega_max = match level {
        FidelityLevel::Full => {
            let max_delta = tones
                .iter()
                .map(|t| t.laser_detuning(params.nu).abs())
                .fold(0.0, f64::max);
            2.0 * params.nu + max_delta
        }
        FidelityLevel::SidebandRwa => {
            let max_small = tones.iter().map(|t| t.detuning.abs()).fold(0.0, f64::max);
            // Derived model frequencies when both sidebands are driven.
            let red = tones.iter().find(|t| t.kind == ToneKind::Red);
            let blue = tones.iter().find(|t| t.kind == ToneKind::Blue);
            let model_max = match (red, blue) {
                (Some(r), Some(b)) => {
                    let omega = (r.detuning - b.detuning) / 2.0;
                    let omega_q = -(r.detuning + b.detuning) / 2.0;
                    omega.abs().max(omega_q.abs()).max((omega + omega_q).abs())
                }
                _ => 0.0,
            };
            max_small.max(model_max)
        }
    };
    Ok(crate::dynamics::recommended_dt(omega_max, t_total))
}
