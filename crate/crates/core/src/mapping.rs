//! Parameter conversion between ion drives and Dicke-family models, coupling
//! regime classification, and the stretch-mode error estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ionsim::{IonParams, Tone, ToneKind};
use crate::models::{ModelKind, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    WF,
    USC,
    DSC,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::WF => f.write_str("WF"),
            Regime::USC => f.write_str("USC"),
            Regime::DSC => f.write_str("DSC"),
        }
    }
}

/// Regime label with the effective coupling ratio that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeLabel {
    pub label: Regime,
    /// `r = max(g, s·g) / ω`.
    pub ratio: f64,
}

/// Thresholds on `r = g_eff/ω`: below `WF_THRESHOLD` is weak field, from
/// there to `DSC_THRESHOLD` ultrastrong, above deep strong.
pub const WF_THRESHOLD: f64 = 0.1;
pub const DSC_THRESHOLD: f64 = 1.0;

/// Laser tones realizing the given model on the ion system:
/// red (δ^r = ω−ω^q, φ = −π/2, Ω^r = 2g/η), blue (δ^b = −(ω+ω^q), φ = −π/2,
/// Ω^b = s·Ω^r), and for the biased model a carrier (δ^c = −ω^q, φ = 0,
/// Ω^c = 2h).
pub fn tones_from_model(spec: &ModelSpec, ion: &IonParams) -> Result<Vec<Tone>> {
    spec.validate()?;
    ion.validate()?;
    let rabi_red = 2.0 * spec.g / ion.eta;
    let phase = -std::f64::consts::FRAC_PI_2;
    let mut tones = vec![
        Tone { kind: ToneKind::Red, rabi: rabi_red, detuning: spec.omega - spec.omega_q, phase },
        Tone {
            kind: ToneKind::Blue,
            rabi: spec.s * rabi_red,
            detuning: -(spec.omega + spec.omega_q),
            phase,
        },
    ];
    if spec.h > 0.0 {
        tones.push(Tone {
            kind: ToneKind::Carrier,
            rabi: 2.0 * spec.h,
            detuning: -spec.omega_q,
            phase: 0.0,
        });
    }
    Ok(tones)
}

/// Invert [`tones_from_model`]: effective model frequencies from the sideband
/// detunings, `g = Ω^r η/2`, `s = Ω^b/Ω^r`, `h = Ω^c/2`.
pub fn model_from_tones(tones: &[Tone], ion: &IonParams, n_qubits: usize) -> Result<ModelSpec> {
    ion.validate()?;
    let red = tones
        .iter()
        .find(|t| t.kind == ToneKind::Red)
        .ok_or_else(|| Error::Config("red sideband tone missing".into()))?;
    let blue = tones
        .iter()
        .find(|t| t.kind == ToneKind::Blue)
        .ok_or_else(|| Error::Config("blue sideband tone missing".into()))?;
    let carrier = tones.iter().find(|t| t.kind == ToneKind::Carrier);

    let omega = (red.detuning - blue.detuning) / 2.0;
    let omega_q = -(red.detuning + blue.detuning) / 2.0;
    let g = red.rabi * ion.eta / 2.0;
    let s = if red.rabi > 0.0 { blue.rabi / red.rabi } else { 0.0 };
    let h = carrier.map(|c| c.rabi / 2.0).unwrap_or(0.0);

    let kind = if h > 0.0 {
        if s != 1.0 {
            return Err(Error::Config(
                "carrier tone with unequal sideband Rabi frequencies has no model mapping".into(),
            ));
        }
        ModelKind::Biased
    } else if s == 0.0 {
        ModelKind::TavisCummings
    } else if s == 1.0 {
        ModelKind::Dicke
    } else {
        ModelKind::Anisotropic
    };
    Ok(ModelSpec { kind, n_qubits, omega, omega_q, g, h, s })
}

/// Coupling-regime classification from `r = max(g, s·g)/ω`.
pub fn classify_regime(spec: &ModelSpec) -> Result<RegimeLabel> {
    if spec.omega <= 0.0 {
        return Err(Error::Config("regime classification needs ω > 0".into()));
    }
    let g_eff = spec.g.max(spec.s * spec.g);
    let ratio = g_eff / spec.omega;
    let label = if ratio < WF_THRESHOLD {
        Regime::WF
    } else if ratio < DSC_THRESHOLD {
        Regime::USC
    } else {
        Regime::DSC
    };
    Ok(RegimeLabel { label, ratio })
}

/// Probability of unintended stretch-mode excitation,
/// `(√N η Ω / [(√3−1) ν])²`. Values at or above 1e−4 are flagged.
pub fn stretch_mode_error(ion: &IonParams, rabi: f64, n_qubits: usize) -> Result<f64> {
    if ion.nu <= 0.0 {
        return Err(Error::Config("trap frequency must be positive".into()));
    }
    let x = (n_qubits as f64).sqrt() * ion.eta * rabi / ((3.0f64.sqrt() - 1.0) * ion.nu);
    Ok(x * x)
}

/// Acceptable ceiling for the stretch-mode excitation probability.
pub const STRETCH_MODE_BOUND: f64 = 1e-4;
