//! Dicke-family Hamiltonians: static and interaction-picture forms, the
//! parity operator, and Dicke states.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    excitation_number, ladder, spin, HilbertSpace, Operator, QuantumState, SpinKind, SpinTarget,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Dicke,
    Biased,
    Anisotropic,
    TavisCummings,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ModelKind::Dicke => "dicke",
            ModelKind::Biased => "biased",
            ModelKind::Anisotropic => "anisotropic",
            ModelKind::TavisCummings => "tavis_cummings",
        };
        f.write_str(s)
    }
}

/// Model parameters. All frequencies are angular (rad/s); `s` is the
/// dimensionless weight of the counter-rotating coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n_qubits: usize,
    pub omega: f64,
    pub omega_q: f64,
    pub g: f64,
    pub h: f64,
    pub s: f64,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::Config("model needs at least one qubit".into()));
        }
        if self.g < 0.0 || self.h < 0.0 || self.s < 0.0 {
            return Err(Error::Config("g, h and s must be non-negative".into()));
        }
        let ok = match self.kind {
            ModelKind::Dicke => self.h == 0.0 && self.s == 1.0,
            ModelKind::TavisCummings => self.h == 0.0 && self.s == 0.0,
            ModelKind::Biased => self.s == 1.0,
            ModelKind::Anisotropic => self.h == 0.0,
        };
        if !ok {
            return Err(Error::Config(format!(
                "kind {} is inconsistent with h={} s={}",
                self.kind, self.h, self.s
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    Static,
    Interaction,
}

/// One rotating term: contributes `amplitude · e^{i·frequency·t} · op + H.c.`
/// to the Hamiltonian. Static Hermitian pieces use `frequency = 0` with half
/// the physical amplitude, so the conjugate pairing restores the full weight.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    pub amplitude: C64,
    pub frequency: f64,
    pub op: Array2<C64>,
}

/// Time-dependent Hamiltonian `H(t) = Σ_k amp_k e^{i f_k t} op_k + H.c.`
/// Hermitian at every `t` by construction.
#[derive(Debug, Clone)]
pub struct TimeDependentHamiltonian {
    space: HilbertSpace,
    terms: Vec<HamiltonianTerm>,
}

impl TimeDependentHamiltonian {
    pub fn new(space: HilbertSpace) -> Self {
        Self { space, terms: Vec::new() }
    }

    pub fn push_term(&mut self, amplitude: C64, frequency: f64, op: Array2<C64>) {
        if amplitude.norm() == 0.0 {
            return;
        }
        debug_assert_eq!(op.nrows(), self.space.dim());
        self.terms.push(HamiltonianTerm { amplitude, frequency, op });
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn is_static(&self) -> bool {
        self.terms.iter().all(|t| t.frequency == 0.0)
    }

    /// Largest envelope angular frequency present.
    pub fn max_frequency(&self) -> f64 {
        self.terms.iter().map(|t| t.frequency.abs()).fold(0.0, f64::max)
    }

    /// Upper bound on the spectral radius of `H(t)`, valid at every t:
    /// each term contributes `2·|amplitude|·‖op‖₂` (the 2 covers the
    /// Hermitian conjugate added during evaluation).
    pub fn spectral_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let gram = crate::algebra::dagger(&t.op).dot(&t.op);
                let lmax = crate::algebra::herm_eigenvalues(&gram)
                    .into_iter()
                    .fold(0.0, f64::max);
                2.0 * t.amplitude.norm() * lmax.max(0.0).sqrt()
            })
            .sum()
    }

    /// Keep only terms with `|frequency| < cut` (term-classification helper).
    pub fn filtered(&self, cut: f64) -> Self {
        Self {
            space: self.space,
            terms: self.terms.iter().filter(|t| t.frequency.abs() < cut).cloned().collect(),
        }
    }

    pub fn evaluate(&self, t: f64) -> Array2<C64> {
        let n = self.space.dim();
        let mut out = Array2::zeros((n, n));
        self.evaluate_into(t, &mut out);
        out
    }

    /// Evaluate `H(t)` into a caller-owned buffer (hot path of the integrators).
    pub fn evaluate_into(&self, t: f64, out: &mut Array2<C64>) {
        out.fill(C64::new(0.0, 0.0));
        for term in &self.terms {
            let c = term.amplitude * C64::new(0.0, term.frequency * t).exp();
            ndarray::Zip::from(&mut *out).and(&term.op).for_each(|o, &p| *o += c * p);
        }
        let n = self.space.dim();
        for i in 0..n {
            for j in i..n {
                let v = out[(i, j)] + out[(j, i)].conj();
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
    }
}

/// Build the requested Dicke-family Hamiltonian.
///
/// Static form: `ω a†a + (ω^q/2) Σ^z + g (a Σ^+ + H.c.) + s·g (a† Σ^+ + H.c.)
/// + h Σ^x`. Interaction picture (with respect to the free part) replaces the
/// coupling terms with envelopes `e^{±i(ω^q−ω)t}`, `e^{±i(ω^q+ω)t}` and
/// `e^{±iω^q t}`.
pub fn build_model(
    spec: &ModelSpec,
    space: HilbertSpace,
    picture: Picture,
) -> Result<TimeDependentHamiltonian> {
    spec.validate()?;
    if spec.n_qubits != space.n_qubits() {
        return Err(Error::Config(format!(
            "model has {} qubits but space has {}",
            spec.n_qubits,
            space.n_qubits()
        )));
    }
    let (a, adag) = ladder(space);
    let sp = spin(space, SpinKind::SigmaPlus, SpinTarget::Collective)?;
    let a_sp = a.matrix().dot(sp.matrix());
    let adag_sp = adag.matrix().dot(sp.matrix());

    let mut h = TimeDependentHamiltonian::new(space);
    let re = |x: f64| C64::new(x, 0.0);
    match picture {
        Picture::Static => {
            let n_op = crate::algebra::number(space);
            let sz = spin(space, SpinKind::SigmaZ, SpinTarget::Collective)?;
            h.push_term(re(spec.omega / 2.0), 0.0, n_op.matrix().clone());
            h.push_term(re(spec.omega_q / 4.0), 0.0, sz.matrix().clone());
            h.push_term(re(spec.g), 0.0, a_sp);
            h.push_term(re(spec.s * spec.g), 0.0, adag_sp);
            h.push_term(re(spec.h), 0.0, sp.matrix().clone());
        }
        Picture::Interaction => {
            h.push_term(re(spec.g), spec.omega_q - spec.omega, a_sp);
            h.push_term(re(spec.s * spec.g), spec.omega_q + spec.omega, adag_sp);
            h.push_term(re(spec.h), spec.omega_q, sp.matrix().clone());
        }
    }
    Ok(h)
}

/// Parity `P = exp(iπ n̂)` with `n̂` the total excitation number. Diagonal
/// with entries ±1; exact.
pub fn parity_operator(space: HilbertSpace) -> Operator {
    let n_hat = excitation_number(space);
    Operator::from_diagonal(space, |i| {
        if (n_hat.matrix()[(i, i)].re as i64) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

/// `|n⟩ ⊗ |D_N^k⟩`: Fock level `n` with the normalized symmetric
/// superposition of all `C(N,k)` spin configurations holding `k` up-spins.
/// Built by explicit enumeration.
pub fn dicke_state(space: HilbertSpace, excitations: usize, phonons: usize) -> Result<QuantumState> {
    let n_q = space.n_qubits();
    if excitations > n_q {
        return Err(Error::InvalidState(format!(
            "k={excitations} exceeds qubit count {n_q}"
        )));
    }
    if phonons > space.fock_cutoff() {
        return Err(Error::InvalidState(format!(
            "phonon level {phonons} exceeds cutoff {}",
            space.fock_cutoff()
        )));
    }
    let configs: Vec<usize> =
        (0..space.qubit_dim()).filter(|q| q.count_ones() as usize == excitations).collect();
    let amp = C64::new(1.0 / (configs.len() as f64).sqrt(), 0.0);
    let mut amps = Array1::zeros(space.dim());
    for q in configs {
        amps[space.index(phonons, q)] = amp;
    }
    QuantumState::pure(space, amps)
}
