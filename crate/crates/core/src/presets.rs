//! Built-in scenario presets. All share the common ion constants
//! ν = 2π×3 MHz, Ω (or Ω^r) = 2π×50 kHz, η = 0.05, Γ = Ωη/100, and the
//! initial state |1,↓…↓⟩; they differ in qubit count, sideband detunings,
//! bias drive, and coupling anisotropy.

use crate::ionsim::IonParams;
use crate::models::{ModelKind, ModelSpec};

const TWO_PI: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub model: ModelSpec,
    pub ion: IonParams,
    /// Default Fock cutoff (WF: 8, USC/DSC: 20).
    pub cutoff: usize,
    /// Default horizon as gt/π (WF: 4, USC/DSC: 20).
    pub gt_end_pi: f64,
}

fn ion() -> IonParams {
    // Γ = Ωη/100 = 2π×25 Hz
    IonParams {
        nu: TWO_PI * 3.0e6,
        omega0: TWO_PI * 1.0e14,
        eta: 0.05,
        gamma: TWO_PI * 50.0e3 * 0.05 / 100.0,
    }
}

/// Model frequencies from sideband detunings (Hz, sign as driven):
/// ω = (δ^r − δ^b)/2, ω^q = −(δ^r + δ^b)/2.
fn from_detunings(
    kind: ModelKind,
    n_qubits: usize,
    delta_r_hz: f64,
    delta_b_hz: f64,
    h_hz: f64,
    s: f64,
) -> ModelSpec {
    let dr = TWO_PI * delta_r_hz;
    let db = TWO_PI * delta_b_hz;
    ModelSpec {
        kind,
        n_qubits,
        omega: (dr - db) / 2.0,
        omega_q: -(dr + db) / 2.0,
        g: TWO_PI * 1250.0, // Ω^r η / 2
        h: TWO_PI * h_hz,
        s,
    }
}

pub fn all_presets() -> Vec<Preset> {
    use ModelKind::*;
    let p = ion();
    vec![
        Preset {
            name: "dicke3_wf",
            description: "Dicke, 3 qubits, weak field (δr=0, δb=-2π·125 kHz)",
            model: from_detunings(Dicke, 3, 0.0, -125_000.0, 0.0, 1.0),
            ion: p,
            cutoff: 8,
            gt_end_pi: 4.0,
        },
        Preset {
            name: "dicke3_usc",
            description: "Dicke, 3 qubits, ultrastrong (δr=-2π·100 Hz, δb=-2π·2.7 kHz)",
            model: from_detunings(Dicke, 3, -100.0, -2700.0, 0.0, 1.0),
            ion: p,
            cutoff: 20,
            gt_end_pi: 20.0,
        },
        Preset {
            name: "biased2_wf_h_g",
            description: "biased Dicke, 2 qubits, weak field, h=g",
            model: from_detunings(Biased, 2, 0.0, -125_000.0, 1250.0, 1.0),
            ion: p,
            cutoff: 8,
            gt_end_pi: 4.0,
        },
        Preset {
            name: "biased2_wf_h_5g",
            description: "biased Dicke, 2 qubits, weak field, h=5g",
            model: from_detunings(Biased, 2, 0.0, -125_000.0, 6250.0, 1.0),
            ion: p,
            cutoff: 8,
            gt_end_pi: 4.0,
        },
        Preset {
            name: "biased2_usc_h_g",
            description: "biased Dicke, 2 qubits, ultrastrong, h=g",
            model: from_detunings(Biased, 2, -100.0, -2700.0, 1250.0, 1.0),
            ion: p,
            cutoff: 20,
            gt_end_pi: 20.0,
        },
        Preset {
            name: "biased2_usc_h_5g",
            description: "biased Dicke, 2 qubits, ultrastrong, h=5g",
            model: from_detunings(Biased, 2, -100.0, -2700.0, 6250.0, 1.0),
            ion: p,
            cutoff: 20,
            gt_end_pi: 20.0,
        },
        Preset {
            name: "anis2_usc_s3",
            description: "anisotropic Dicke, 2 qubits, ultrastrong, s=3",
            model: from_detunings(Anisotropic, 2, -100.0, -7700.0, 0.0, 3.0),
            ion: p,
            cutoff: 20,
            gt_end_pi: 20.0,
        },
        Preset {
            name: "anis2_usc_s5",
            description: "anisotropic Dicke, 2 qubits, ultrastrong, s=5",
            model: from_detunings(Anisotropic, 2, -100.0, -12_700.0, 0.0, 5.0),
            ion: p,
            cutoff: 20,
            gt_end_pi: 20.0,
        },
        Preset {
            name: "anis2_dsc_s3",
            description: "anisotropic Dicke, 2 qubits, deep strong, s=3",
            model: from_detunings(Anisotropic, 2, -112.0, -7238.0, 0.0, 3.0),
            ion: p,
            cutoff: 20,
            gt_end_pi: 20.0,
        },
        Preset {
            name: "anis2_dsc_s5",
            description: "anisotropic Dicke, 2 qubits, deep strong, s=5",
            model: from_detunings(Anisotropic, 2, -187.0, -12_063.0, 0.0, 5.0),
            ion: p,
            cutoff: 20,
            gt_end_pi: 20.0,
        },
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    all_presets().into_iter().find(|p| p.name == name)
}
