//! Trajectory observables: phonon number, excitation number, parity, spin z
//! component, and the Jozsa fidelity between two trajectories.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    excitation_number, herm_eigenvalues, herm_sqrt, number, spin, HilbertSpace, Operator,
    QuantumState, SpinKind, SpinTarget, StateRep,
};
use crate::error::{Error, Result};
use crate::models::ModelSpec;

/// One sampled point of a trajectory. `gt` is the dimensionless time `g·t`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ObservableSample {
    pub t: f64,
    pub gt: f64,
    pub phonon: f64,
    pub excitation: f64,
    pub parity: f64,
    pub sz: f64,
    pub fidelity: Option<f64>,
}

/// Run metadata attached to a trajectory. The wall-clock timestamp lives in
/// the sidecar only, keeping trajectory files reproducible byte for byte.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub scenario: String,
    pub fidelity_level: String,
    pub cutoff: usize,
    pub dt: f64,
    pub n_steps: usize,
    pub code_version: String,
    pub regime: String,
    pub reference_noise: String,
    pub notes: Vec<String>,
    #[serde(default)]
    pub parameters: serde_json::Value,
}

#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub samples: Vec<ObservableSample>,
    pub metadata: TrajectoryMeta,
}

/// Expectation value of a Hermitian operator: `⟨ψ|A|ψ⟩` or `tr(Aρ)`.
/// Imaginary residue below 1e−9 is discarded; anything ≥ 1e−7 is an error.
pub fn expectation(op: &Operator, state: &QuantumState) -> Result<f64> {
    if op.space() != state.space() {
        return Err(Error::Config("operator and state live on different spaces".into()));
    }
    let value: C64 = match state.rep() {
        StateRep::Pure(v) => {
            let av = op.matrix().dot(v);
            v.iter().zip(av.iter()).map(|(a, b)| a.conj() * b).sum()
        }
        StateRep::Mixed(rho) => {
            let n = rho.nrows();
            let mut tr = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    tr += op.matrix()[(i, j)] * rho[(j, i)];
                }
            }
            tr
        }
    };
    if value.im.abs() >= 1e-7 {
        return Err(Error::Numerical(format!(
            "expectation has imaginary part {:.3e}; operator not Hermitian or state corrupted",
            value.im
        )));
    }
    Ok(value.re)
}

/// Jozsa fidelity `F(ρ,σ) = (Tr √(√ρ σ √ρ))²`, clamped to [0,1] after a
/// ≤ 1e−7 overshoot check. Pure states are promoted to density matrices.
pub fn fidelity(reference: &QuantumState, actual: &QuantumState) -> Result<f64> {
    if reference.space() != actual.space() {
        return Err(Error::Config("states live on different spaces".into()));
    }
    // When either state is pure the general formula collapses: for
    // ρ = |ψ⟩⟨ψ| one has F = ⟨ψ|σ|ψ⟩ (and |⟨ψ|φ⟩|² for two pure states),
    // which avoids the matrix square root entirely.
    let clamp = |f: f64| -> Result<f64> {
        if f > 1.0 + 1e-7 {
            return Err(Error::Numerical(format!("fidelity overshoot {f}")));
        }
        Ok(f.clamp(0.0, 1.0))
    };
    match (reference.amplitudes(), actual.amplitudes()) {
        (Some(psi), Some(phi)) => {
            let overlap: C64 = psi.iter().zip(phi.iter()).map(|(a, b)| a.conj() * b).sum();
            return clamp(overlap.norm_sqr());
        }
        (Some(psi), None) | (None, Some(psi)) => {
            let sigma = if reference.is_pure() { actual.to_density() } else { reference.to_density() };
            let mut f = 0.0;
            for i in 0..psi.len() {
                for j in 0..psi.len() {
                    f += (psi[i].conj() * sigma[(i, j)] * psi[j]).re;
                }
            }
            return clamp(f);
        }
        (None, None) => {}
    }
    let space = reference.space();
    let rho = Operator::new(space, reference.to_density())?;
    let sigma = actual.to_density();
    let root = herm_sqrt(&rho)?;
    let inner = root.matrix().dot(&sigma).dot(root.matrix());
    // symmetrize away the roundoff before taking eigenvalues
    let inner = inner.mapv(|v| v * 0.5) + crate::algebra::dagger(&inner).mapv(|v| v * 0.5);
    // √ amplifies eigendecomposition noise around zero, so drop everything
    // below a relative floor before taking roots
    let eigs = herm_eigenvalues(&inner);
    let floor = eigs.iter().cloned().fold(0.0, f64::max) * 1e-13;
    let trace_root: f64 =
        eigs.into_iter().map(|l| if l > floor { l.sqrt() } else { 0.0 }).sum();
    let f = trace_root * trace_root;
    if f > 1.0 + 1e-7 {
        return Err(Error::Numerical(format!("fidelity overshoot {f}")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Precomputed observable operators for one space.
pub struct ObservableSet {
    phonon: Operator,
    excitation: Operator,
    parity: Operator,
    sz_half: Operator,
}

impl ObservableSet {
    pub fn new(space: HilbertSpace) -> Result<Self> {
        let sz = spin(space, SpinKind::SigmaZ, SpinTarget::Collective)?;
        Ok(Self {
            phonon: number(space),
            excitation: excitation_number(space),
            parity: crate::models::parity_operator(space),
            sz_half: sz.scale(C64::new(0.5, 0.0)),
        })
    }
}

/// Compute the five observables for each sampled state. The fidelity column
/// is present only when reference states are supplied, and compares sample
/// for sample in the shared interaction frame.
pub fn measure_trajectory(
    states: &[QuantumState],
    times: &[f64],
    reference: Option<&[QuantumState]>,
    spec: &ModelSpec,
    space: HilbertSpace,
) -> Result<Trajectory> {
    if states.len() != times.len() {
        return Err(Error::Config("states and times length mismatch".into()));
    }
    if let Some(r) = reference {
        if r.len() != states.len() {
            return Err(Error::Config("reference grid does not match sample grid".into()));
        }
    }
    let obs = ObservableSet::new(space)?;
    let mut samples = Vec::with_capacity(states.len());
    for (k, state) in states.iter().enumerate() {
        let f = match reference {
            Some(refs) => Some(fidelity(&refs[k], state)?),
            None => None,
        };
        samples.push(ObservableSample {
            t: times[k],
            gt: spec.g * times[k],
            phonon: expectation(&obs.phonon, state)?,
            excitation: expectation(&obs.excitation, state)?,
            parity: expectation(&obs.parity, state)?,
            sz: expectation(&obs.sz_half, state)?,
            fidelity: f,
        });
    }
    Ok(Trajectory { samples, metadata: TrajectoryMeta::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_space;
    use crate::dynamics::{evolve_unitary, recommended_dt, TimeGrid};
    use crate::models::{build_model, dicke_state, ModelKind, Picture};
    use ndarray::Array1;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TWO_PI: f64 = std::f64::consts::TAU;

    #[test]
    fn excitation_and_spin_examples() {
        let space = make_space(3, 2).unwrap();
        let obs = ObservableSet::new(space).unwrap();
        let st = QuantumState::basis(space, 1, 0).unwrap(); // |1,↓,↓,↓⟩
        assert!((expectation(&obs.excitation, &st).unwrap() - 1.0).abs() < 1e-12);
        assert!((expectation(&obs.sz_half, &st).unwrap() + 1.5).abs() < 1e-12);
        let d31 = dicke_state(space, 1, 0).unwrap(); // |0,D_3^1⟩
        assert!((expectation(&obs.sz_half, &d31).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let space = make_space(1, 1).unwrap();
        let (a, _) = crate::algebra::ladder(space);
        let mut amps = Array1::<C64>::zeros(space.dim());
        amps[space.index(0, 0)] = C64::new(0.5f64.sqrt(), 0.0);
        amps[space.index(1, 0)] = C64::new(0.0, 0.5f64.sqrt());
        let st = QuantumState::pure(space, amps).unwrap();
        assert!(expectation(&a, &st).is_err());
    }

    #[test]
    fn fidelity_identical_and_orthogonal() {
        let space = make_space(2, 1).unwrap();
        let st = QuantumState::basis(space, 1, 2).unwrap();
        assert!((fidelity(&st, &st).unwrap() - 1.0).abs() < 1e-9);
        let other = QuantumState::basis(space, 0, 1).unwrap();
        assert!(fidelity(&st, &other).unwrap() < 1e-12);
    }

    fn random_pure(rng: &mut impl Rng, space: HilbertSpace) -> QuantumState {
        let mut v = Array1::from_shape_fn(space.dim(), |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.mapv_inplace(|x| x / norm);
        QuantumState::pure(space, v).unwrap()
    }

    #[test]
    fn fidelity_of_pure_states_is_overlap_squared() {
        let space = make_space(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let psi = random_pure(&mut rng, space);
            let phi = random_pure(&mut rng, space);
            let overlap: C64 = psi
                .amplitudes()
                .unwrap()
                .iter()
                .zip(phi.amplitudes().unwrap().iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let f = fidelity(&psi, &phi).unwrap();
            assert!((f - overlap.norm_sqr()).abs() < 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn fidelity_symmetric_on_mixed_pairs(seed in 0u64..1000) {
            let space = make_space(1, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mix = |rng: &mut ChaCha8Rng| {
                let a = random_pure(rng, space).to_density();
                let b = random_pure(rng, space).to_density();
                let w = rng.gen_range(0.1..0.9);
                let m = a.mapv(|v| v * w) + b.mapv(|v| v * (1.0 - w));
                QuantumState::mixed(space, m).unwrap()
            };
            let rho = mix(&mut rng);
            let sigma = mix(&mut rng);
            let f1 = fidelity(&rho, &sigma).unwrap();
            let f2 = fidelity(&sigma, &rho).unwrap();
            prop_assert!((f1 - f2).abs() < 1e-8);
        }
    }

    #[test]
    fn trajectory_initial_sample_and_self_fidelity() {
        let space = make_space(3, 6).unwrap();
        let spec = crate::models::ModelSpec {
            kind: ModelKind::Dicke,
            n_qubits: 3,
            omega: TWO_PI * 62.5e3,
            omega_q: TWO_PI * 62.5e3,
            g: TWO_PI * 1250.0,
            h: 0.0,
            s: 1.0,
        };
        let h = build_model(&spec, space, Picture::Interaction).unwrap();
        let psi0 = QuantumState::basis(space, 1, 0).unwrap();
        let t_end = 0.2e-3;
        let grid = TimeGrid::new(t_end, recommended_dt(TWO_PI * 125.0e3, t_end), 20).unwrap();
        let states = evolve_unitary(&h, &psi0, &grid).unwrap();
        let traj =
            measure_trajectory(&states, &grid.sample_times(), Some(&states), &spec, space)
                .unwrap();
        let first = &traj.samples[0];
        assert!((first.excitation - 1.0).abs() < 1e-9);
        assert!((first.parity + 1.0).abs() < 1e-9);
        for s in &traj.samples {
            assert!((s.fidelity.unwrap() - 1.0).abs() < 1e-8);
            assert!(s.sz >= -1.5 - 1e-7 && s.sz <= 1.5 + 1e-7);
        }
    }

    #[test]
    fn tavis_cummings_conserves_excitation_along_trajectory() {
        let space = make_space(3, 6).unwrap();
        let spec = crate::models::ModelSpec {
            kind: ModelKind::TavisCummings,
            n_qubits: 3,
            omega: TWO_PI * 62.5e3,
            omega_q: TWO_PI * 62.5e3,
            g: TWO_PI * 1250.0,
            h: 0.0,
            s: 0.0,
        };
        let h = build_model(&spec, space, Picture::Interaction).unwrap();
        let psi0 = QuantumState::basis(space, 1, 0).unwrap();
        let t_end = 1.0e-3;
        let grid = TimeGrid::new(t_end, recommended_dt(spec.g * 20.0, t_end), 100).unwrap();
        let states = evolve_unitary(&h, &psi0, &grid).unwrap();
        let traj =
            measure_trajectory(&states, &grid.sample_times(), None, &spec, space).unwrap();
        for s in &traj.samples {
            assert!((s.excitation - 1.0).abs() < 1e-6);
            assert!((s.parity + 1.0).abs() < 1e-6);
        }
    }
}
