//! Time evolution: fixed-step fourth-order Runge-Kutta for the Schrödinger
//! equation (pure states) and the dephasing Lindblad master equation
//! (density matrices), both with time-dependent Hamiltonians.
//!
//! Fixed step keeps runs bit-for-bit reproducible; the step size comes from
//! the 40-points-per-fastest-oscillation rule.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::algebra::{herm_defect, HilbertSpace, QuantumState, StateRep};
use crate::error::{Error, Result};
use crate::models::TimeDependentHamiltonian;

/// Per-qubit σ^z dephasing at rate Γ:
/// `ℒρ = Γ Σ_m (σ_m^z ρ σ_m^z − ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub dephasing_rate: f64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dephasing_rate < 0.0 {
            return Err(Error::Config("dephasing rate must be non-negative".into()));
        }
        Ok(())
    }
}

/// Uniform integration grid. The step count is a multiple of the sample
/// interval count, so sample times are exactly a subset of step times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    dt: f64,
    n_steps: usize,
    sample_every: usize,
}

impl TimeGrid {
    /// Grid covering `[0, t_end]` with step ≤ `dt_max` and `samples` output
    /// intervals (so `samples + 1` sampled states including t = 0).
    pub fn new(t_end: f64, dt_max: f64, samples: usize) -> Result<Self> {
        if !(t_end > 0.0) || !(dt_max > 0.0) {
            return Err(Error::Config("t_end and dt must be positive".into()));
        }
        if samples == 0 {
            return Err(Error::Config("sample count must be positive".into()));
        }
        let per_sample = (t_end / (samples as f64) / dt_max).ceil().max(1.0) as usize;
        let n_steps = per_sample * samples;
        Ok(Self { t_end, dt: t_end / n_steps as f64, n_steps, sample_every: per_sample })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn sample_count(&self) -> usize {
        self.n_steps / self.sample_every + 1
    }

    pub fn sample_times(&self) -> Vec<f64> {
        (0..self.sample_count()).map(|k| (k * self.sample_every) as f64 * self.dt).collect()
    }

    fn is_sample_step(&self, step: usize) -> bool {
        step % self.sample_every == 0
    }
}

/// Step-size rule shared by the ion and model integrators: at least 40 points
/// per fastest envelope oscillation, and never more than 1000 steps' worth of
/// coarseness over the whole horizon.
pub fn recommended_dt(omega_max: f64, t_total: f64) -> f64 {
    let cap = t_total / 1000.0;
    if omega_max <= 0.0 {
        cap
    } else {
        (std::f64::consts::TAU / omega_max / 40.0).min(cap)
    }
}

/// Fixed-step RK4 on `dψ/dt = −i H(t) ψ`. Returns states at sample times.
/// The norm is renormalized when drift exceeds 1e−12 and the run aborts when
/// drift exceeds 1e−6 (too-large step).
pub fn evolve_unitary(
    h: &TimeDependentHamiltonian,
    psi0: &QuantumState,
    grid: &TimeGrid,
) -> Result<Vec<QuantumState>> {
    let space = h.space();
    let psi0 = match psi0.rep() {
        StateRep::Pure(v) => v.clone(),
        StateRep::Mixed(_) => {
            return Err(Error::InvalidState("unitary evolution needs a pure state".into()))
        }
    };
    if psi0.len() != space.dim() {
        return Err(Error::InvalidState("state dimension mismatch".into()));
    }

    let dim = space.dim();
    let dt = grid.dt();
    let mut hbuf = Array2::<C64>::zeros((dim, dim));
    let mut psi = psi0;
    let mut samples = Vec::with_capacity(grid.sample_count());
    samples.push(QuantumState::pure(space, psi.clone())?);

    let mut k1 = Array1::<C64>::zeros(dim);
    let mut k2 = Array1::<C64>::zeros(dim);
    let mut k3 = Array1::<C64>::zeros(dim);
    let mut k4 = Array1::<C64>::zeros(dim);
    let mut stage = Array1::<C64>::zeros(dim);

    let minus_i = C64::new(0.0, -1.0);
    let zero = C64::new(0.0, 0.0);

    for step in 0..grid.n_steps() {
        let t = step as f64 * dt;

        h.evaluate_into(t, &mut hbuf);
        ndarray::linalg::general_mat_vec_mul(minus_i, &hbuf, &psi, zero, &mut k1);

        stage.assign(&psi);
        stage.scaled_add(C64::new(dt / 2.0, 0.0), &k1);
        h.evaluate_into(t + dt / 2.0, &mut hbuf);
        ndarray::linalg::general_mat_vec_mul(minus_i, &hbuf, &stage, zero, &mut k2);

        stage.assign(&psi);
        stage.scaled_add(C64::new(dt / 2.0, 0.0), &k2);
        ndarray::linalg::general_mat_vec_mul(minus_i, &hbuf, &stage, zero, &mut k3);

        stage.assign(&psi);
        stage.scaled_add(C64::new(dt, 0.0), &k3);
        h.evaluate_into(t + dt, &mut hbuf);
        ndarray::linalg::general_mat_vec_mul(minus_i, &hbuf, &stage, zero, &mut k4);

        let w = dt / 6.0;
        for i in 0..dim {
            psi[i] += C64::new(w, 0.0) * (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]);
        }

        if !psi.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::Numerical(format!("non-finite state at step {step}")));
        }
        let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let drift = (norm - 1.0).abs();
        if drift > 1e-6 {
            return Err(Error::Numerical(format!(
                "norm drift {drift:.3e} at step {step}: timestep too large"
            )));
        }
        if drift > 1e-12 {
            psi.mapv_inplace(|c| c / norm);
        }

        if grid.is_sample_step(step + 1) {
            samples.push(QuantumState::pure(space, psi.clone())?);
        }
    }
    Ok(samples)
}

/// Fixed-step RK4 on the master equation
/// `dρ/dt = −i[H(t), ρ] + Γ Σ_m (σ_m^z ρ σ_m^z − ρ)`.
///
/// The state is carried as the real pair (Re ρ symmetric, Im ρ antisymmetric)
/// so Hermiticity is exact by representation, and each right-hand side costs
/// three real matrix products (Karatsuba form of the complex product Hρ; the
/// commutator is completed by transposition). The dephasing dissipator
/// reduces to an elementwise damping mask because every σ_m^z is diagonal.
pub fn evolve_lindblad(
    h: &TimeDependentHamiltonian,
    noise: &NoiseSpec,
    rho0: &QuantumState,
    grid: &TimeGrid,
) -> Result<Vec<QuantumState>> {
    noise.validate()?;
    let space = h.space();
    let rho = rho0.to_density();
    if rho.nrows() != space.dim() {
        return Err(Error::InvalidState("state dimension mismatch".into()));
    }

    let dim = space.dim();
    let dt = grid.dt();
    let mask = dephasing_mask(space, noise.dephasing_rate);

    let mut rho_r = rho.mapv(|c| c.re);
    let mut rho_i = rho.mapv(|c| c.im);
    let mut hbuf = Array2::<C64>::zeros((dim, dim));
    let mut h_r = Array2::<f64>::zeros((dim, dim));
    let mut h_i = Array2::<f64>::zeros((dim, dim));
    let mut h_s = Array2::<f64>::zeros((dim, dim));
    let mut scratch = RhsScratch::new(dim);
    let mut k: [SplitMatrix; 4] = std::array::from_fn(|_| SplitMatrix::zeros(dim));
    let mut stage = SplitMatrix::zeros(dim);

    let mut samples = Vec::with_capacity(grid.sample_count());
    samples.push(sample_density(space, &rho, 0)?);

    // split H(t) once per evaluation point, including the Karatsuba sum Hr+Hi
    let eval_split = |t: f64,
                          h_r: &mut Array2<f64>,
                          h_i: &mut Array2<f64>,
                          h_s: &mut Array2<f64>,
                          hbuf: &mut Array2<C64>| {
        h.evaluate_into(t, hbuf);
        ndarray::Zip::from(&mut *h_r)
            .and(&mut *h_i)
            .and(&mut *h_s)
            .and(&*hbuf)
            .for_each(|r, i, s, &c| {
                *r = c.re;
                *i = c.im;
                *s = c.re + c.im;
            });
    };

    for step in 0..grid.n_steps() {
        let t = step as f64 * dt;

        eval_split(t, &mut h_r, &mut h_i, &mut h_s, &mut hbuf);
        lindblad_rhs_split(&h_r, &h_i, &h_s, &rho_r, &rho_i, &mask, &mut scratch, &mut k[0]);

        stage.assign_step(&rho_r, &rho_i, dt / 2.0, &k[0]);
        eval_split(t + dt / 2.0, &mut h_r, &mut h_i, &mut h_s, &mut hbuf);
        lindblad_rhs_split(&h_r, &h_i, &h_s, &stage.re, &stage.im, &mask, &mut scratch, &mut k[1]);

        stage.assign_step(&rho_r, &rho_i, dt / 2.0, &k[1]);
        lindblad_rhs_split(&h_r, &h_i, &h_s, &stage.re, &stage.im, &mask, &mut scratch, &mut k[2]);

        stage.assign_step(&rho_r, &rho_i, dt, &k[2]);
        eval_split(t + dt, &mut h_r, &mut h_i, &mut h_s, &mut hbuf);
        lindblad_rhs_split(&h_r, &h_i, &h_s, &stage.re, &stage.im, &mask, &mut scratch, &mut k[3]);

        let w = dt / 6.0;
        ndarray::Zip::from(&mut rho_r)
            .and(&k[0].re)
            .and(&k[1].re)
            .and(&k[2].re)
            .and(&k[3].re)
            .for_each(|r, &a, &b, &c, &d| *r += w * (a + (b + c) * 2.0 + d));
        ndarray::Zip::from(&mut rho_i)
            .and(&k[0].im)
            .and(&k[1].im)
            .and(&k[2].im)
            .and(&k[3].im)
            .for_each(|r, &a, &b, &c, &d| *r += w * (a + (b + c) * 2.0 + d));

        if grid.is_sample_step(step + 1) {
            let rho = ndarray::Zip::from(&rho_r)
                .and(&rho_i)
                .map_collect(|&re, &im| C64::new(re, im));
            samples.push(sample_density(space, &rho, step + 1)?);
        }
    }
    Ok(samples)
}

struct SplitMatrix {
    re: Array2<f64>,
    im: Array2<f64>,
}

impl SplitMatrix {
    fn zeros(dim: usize) -> Self {
        Self { re: Array2::zeros((dim, dim)), im: Array2::zeros((dim, dim)) }
    }

    /// `self = base + c·k` (one RK4 stage input).
    fn assign_step(&mut self, base_r: &Array2<f64>, base_i: &Array2<f64>, c: f64, k: &Self) {
        ndarray::Zip::from(&mut self.re)
            .and(base_r)
            .and(&k.re)
            .for_each(|s, &b, &kk| *s = b + c * kk);
        ndarray::Zip::from(&mut self.im)
            .and(base_i)
            .and(&k.im)
            .for_each(|s, &b, &kk| *s = b + c * kk);
    }
}

struct RhsScratch {
    p1: Array2<f64>,
    p2: Array2<f64>,
    p3: Array2<f64>,
    sum_b: Array2<f64>,
}

impl RhsScratch {
    fn new(dim: usize) -> Self {
        Self {
            p1: Array2::zeros((dim, dim)),
            p2: Array2::zeros((dim, dim)),
            p3: Array2::zeros((dim, dim)),
            sum_b: Array2::zeros((dim, dim)),
        }
    }
}

/// Right-hand side in split-real form. With `P + iQ = Hρ`,
/// `−i[H,ρ] = (Q + Qᵀ) + i(Pᵀ − P)`, so
/// `d(Re ρ)/dt = Q + Qᵀ + mask∘Re ρ` and `d(Im ρ)/dt = Pᵀ − P + mask∘Im ρ`.
/// P and Q come from three real products: P1 = Hr·ρr, P2 = Hi·ρi,
/// P3 = (Hr+Hi)·(ρr+ρi); P = P1 − P2, Q = P3 − P1 − P2. The caller supplies
/// `h_s = Hr+Hi` since it is fixed per evaluation point, not per stage.
#[allow(clippy::too_many_arguments)]
fn lindblad_rhs_split(
    h_r: &Array2<f64>,
    h_i: &Array2<f64>,
    h_s: &Array2<f64>,
    rho_r: &Array2<f64>,
    rho_i: &Array2<f64>,
    mask: &Array2<f64>,
    s: &mut RhsScratch,
    out: &mut SplitMatrix,
) {
    ndarray::Zip::from(&mut s.sum_b).and(rho_r).and(rho_i).for_each(|o, &a, &b| *o = a + b);
    ndarray::linalg::general_mat_mul(1.0, h_r, rho_r, 0.0, &mut s.p1);
    ndarray::linalg::general_mat_mul(1.0, h_i, rho_i, 0.0, &mut s.p2);
    ndarray::linalg::general_mat_mul(1.0, h_s, &s.sum_b, 0.0, &mut s.p3);

    // tiled so the transposed (j,i) reads stay cache-resident
    const B: usize = 48;
    let n = h_r.nrows();
    let mut bi = 0;
    while bi < n {
        let ei = (bi + B).min(n);
        let mut bj = 0;
        while bj < n {
            let ej = (bj + B).min(n);
            for i in bi..ei {
                for j in bj..ej {
                    let p_ij = s.p1[(i, j)] - s.p2[(i, j)];
                    let p_ji = s.p1[(j, i)] - s.p2[(j, i)];
                    let q_ij = s.p3[(i, j)] - s.p1[(i, j)] - s.p2[(i, j)];
                    let q_ji = s.p3[(j, i)] - s.p1[(j, i)] - s.p2[(j, i)];
                    out.re[(i, j)] = q_ij + q_ji + mask[(i, j)] * rho_r[(i, j)];
                    out.im[(i, j)] = p_ji - p_ij + mask[(i, j)] * rho_i[(i, j)];
                }
            }
            bj = ej;
        }
        bi = ei;
    }
}

/// `Γ(Σ_m z_m(i) z_m(j) − N)` per entry; real, ≤ 0, zero on the diagonal.
fn dephasing_mask(space: HilbertSpace, gamma: f64) -> Array2<f64> {
    let dim = space.dim();
    let n_q = space.n_qubits();
    Array2::from_shape_fn((dim, dim), |(i, j)| {
        let (_, qi) = space.split(i);
        let (_, qj) = space.split(j);
        let mut c = 0i64;
        for m in 1..=n_q {
            let bit = space.qubit_bit(m);
            let zi = if qi & bit != 0 { 1 } else { -1 };
            let zj = if qj & bit != 0 { 1 } else { -1 };
            c += (zi * zj) as i64;
        }
        gamma * (c - n_q as i64) as f64
    })
}

fn sample_density(space: HilbertSpace, rho: &Array2<C64>, step: usize) -> Result<QuantumState> {
    if !rho.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Numerical(format!("non-finite density matrix at step {step}")));
    }
    let trace: C64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
    let drift = (trace.re - 1.0).abs().max(trace.im.abs());
    if drift > 1e-6 {
        return Err(Error::Numerical(format!("trace drift {drift:.3e} at step {step}")));
    }
    // re-symmetrize the sampled copy
    let sym = rho.mapv(|v| v * 0.5) + crate::algebra::dagger(rho).mapv(|v| v * 0.5);
    debug_assert!(herm_defect(&sym) < 1e-12);
    let state = QuantumState::mixed(space, sym)
        .map_err(|e| Error::Numerical(format!("invalid density matrix at step {step}: {e}")))?;
    let min_eig = state.min_eigenvalue();
    if min_eig < -1e-5 {
        return Err(Error::Numerical(format!(
            "density matrix lost positivity (min eigenvalue {min_eig:.3e}) at step {step}"
        )));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        herm_propagator, make_space, spin, Operator, SpinKind, SpinTarget,
    };
    use crate::models::TimeDependentHamiltonian;

    const TWO_PI: f64 = std::f64::consts::TAU;

    fn free_hamiltonian(space: crate::algebra::HilbertSpace) -> TimeDependentHamiltonian {
        TimeDependentHamiltonian::new(space)
    }

    #[test]
    fn grid_sample_times_subset_of_steps() {
        let grid = TimeGrid::new(1.0e-3, 0.33e-6, 500).unwrap();
        assert_eq!(grid.n_steps() % 500, 0);
        assert!(grid.dt() <= 0.33e-6);
        let times = grid.sample_times();
        assert_eq!(times.len(), 501);
        assert_eq!(times[0], 0.0);
        assert!((times.last().unwrap() - 1.0e-3).abs() < 1e-12);
    }

    #[test]
    fn zero_hamiltonian_keeps_state() {
        let space = make_space(2, 2).unwrap();
        let h = free_hamiltonian(space);
        let psi0 = QuantumState::basis(space, 1, 1).unwrap();
        let grid = TimeGrid::new(1.0e-3, 1.0e-5, 10).unwrap();
        let out = evolve_unitary(&h, &psi0, &grid).unwrap();
        for st in &out {
            let diff: f64 = st
                .amplitudes()
                .unwrap()
                .iter()
                .zip(psi0.amplitudes().unwrap().iter())
                .map(|(a, b)| (a - b).norm())
                .sum();
            assert!(diff < 1e-14);
        }
    }

    #[test]
    fn rabi_flop_matches_analytic() {
        let space = make_space(1, 0).unwrap();
        let omega = TWO_PI * 50.0e3;
        let sx = spin(space, SpinKind::SigmaX, SpinTarget::Qubit(1)).unwrap();
        let mut h = TimeDependentHamiltonian::new(space);
        h.push_term(C64::new(omega / 4.0, 0.0), 0.0, sx.matrix().clone());
        let psi0 = QuantumState::basis(space, 0, 0).unwrap(); // |↓⟩
        let t_end = 2.0 * TWO_PI / omega;
        let grid = TimeGrid::new(t_end, recommended_dt(omega, t_end), 200).unwrap();
        let out = evolve_unitary(&h, &psi0, &grid).unwrap();
        for (k, st) in out.iter().enumerate() {
            let t = grid.sample_times()[k];
            let up = space.index(0, 1);
            let pop = st.amplitudes().unwrap()[up].norm_sqr();
            let expected = (omega * t / 2.0).sin().powi(2);
            assert!((pop - expected).abs() < 1e-6, "t={t}: {pop} vs {expected}");
        }
    }

    #[test]
    fn rk4_matches_matrix_exponential() {
        let space = make_space(2, 3).unwrap();
        let spec = crate::models::ModelSpec {
            kind: crate::models::ModelKind::Dicke,
            n_qubits: 2,
            omega: TWO_PI * 1300.0,
            omega_q: TWO_PI * 1400.0,
            g: TWO_PI * 1250.0,
            h: 0.0,
            s: 1.0,
        };
        let h = crate::models::build_model(&spec, space, crate::models::Picture::Static).unwrap();
        let h0 = Operator::new(space, h.evaluate(0.0)).unwrap();
        let psi0 = QuantumState::basis(space, 1, 0).unwrap();
        let t_end = 1.0e-3;
        let grid = TimeGrid::new(t_end, recommended_dt(TWO_PI * 4000.0, t_end), 10).unwrap();
        let rk4 = evolve_unitary(&h, &psi0, &grid).unwrap();
        let exact = herm_propagator(&h0, t_end).unwrap();
        let psi_exact = exact.matrix().dot(psi0.amplitudes().unwrap());
        let overlap: C64 = psi_exact
            .iter()
            .zip(rk4.last().unwrap().amplitudes().unwrap().iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(overlap.norm() > 1.0 - 1e-8, "overlap {}", overlap.norm());
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        let space = make_space(2, 2).unwrap();
        let spec = crate::models::ModelSpec {
            kind: crate::models::ModelKind::Dicke,
            n_qubits: 2,
            omega: TWO_PI * 1300.0,
            omega_q: TWO_PI * 1400.0,
            g: TWO_PI * 1250.0,
            h: 0.0,
            s: 1.0,
        };
        let h = crate::models::build_model(&spec, space, crate::models::Picture::Static).unwrap();
        let h0 = Operator::new(space, h.evaluate(0.0)).unwrap();
        let psi0 = QuantumState::basis(space, 1, 0).unwrap();
        let t_end = 0.5e-3;
        let exact = herm_propagator(&h0, t_end).unwrap();
        let psi_exact = exact.matrix().dot(psi0.amplitudes().unwrap());

        let err = |dt: f64| -> f64 {
            let grid = TimeGrid::new(t_end, dt, 1).unwrap();
            let out = evolve_unitary(&h, &psi0, &grid).unwrap();
            out.last()
                .unwrap()
                .amplitudes()
                .unwrap()
                .iter()
                .zip(psi_exact.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        };
        let coarse = err(t_end / 200.0);
        let fine = err(t_end / 400.0);
        assert!(coarse / fine >= 8.0, "convergence factor {}", coarse / fine);
    }

    #[test]
    fn lindblad_gamma_zero_matches_unitary() {
        let space = make_space(2, 3).unwrap();
        let spec = crate::models::ModelSpec {
            kind: crate::models::ModelKind::Dicke,
            n_qubits: 2,
            omega: TWO_PI * 1300.0,
            omega_q: TWO_PI * 1400.0,
            g: TWO_PI * 1250.0,
            h: 0.0,
            s: 1.0,
        };
        let h =
            crate::models::build_model(&spec, space, crate::models::Picture::Interaction).unwrap();
        let psi0 = QuantumState::basis(space, 1, 0).unwrap();
        let t_end = 2.0e-3;
        // finer than the envelope rule: RK4 on ρ leaks positivity at the
        // coupling scale, not the envelope scale
        let grid = TimeGrid::new(t_end, 0.4e-6, 50).unwrap();
        let uni = evolve_unitary(&h, &psi0, &grid).unwrap();
        let lind =
            evolve_lindblad(&h, &NoiseSpec { dephasing_rate: 0.0 }, &psi0, &grid).unwrap();
        for (u, l) in uni.iter().zip(lind.iter()) {
            let f = crate::observables::fidelity(u, l).unwrap();
            assert!(f > 1.0 - 1e-8, "fidelity {f}");
        }
    }

    #[test]
    fn dephasing_decays_coherence_exponentially() {
        let space = make_space(1, 0).unwrap();
        let h = free_hamiltonian(space);
        let gamma = TWO_PI * 25.0;
        let plus = QuantumState::pure(
            space,
            ndarray::arr1(&[C64::new(1.0 / 2f64.sqrt(), 0.0), C64::new(1.0 / 2f64.sqrt(), 0.0)]),
        )
        .unwrap();
        let t_end = 40.0e-3;
        let grid = TimeGrid::new(t_end, recommended_dt(0.0, t_end), 100).unwrap();
        let out = evolve_lindblad(&h, &NoiseSpec { dephasing_rate: gamma }, &plus, &grid).unwrap();
        for (k, st) in out.iter().enumerate() {
            let t = grid.sample_times()[k];
            let rho = st.to_density();
            let coherence = rho[(0, 1)].norm();
            let expected = 0.5 * (-2.0 * gamma * t).exp();
            assert!(
                (coherence - expected).abs() <= 1e-6 * expected.max(1e-300),
                "t={t}: {coherence} vs {expected}"
            );
        }
    }

    #[test]
    fn dephasing_fixes_diagonal_states() {
        let space = make_space(1, 1).unwrap();
        let h = free_hamiltonian(space);
        let mut rho0 = Array2::<C64>::zeros((space.dim(), space.dim()));
        rho0[(0, 0)] = C64::new(0.25, 0.0);
        rho0[(1, 1)] = C64::new(0.25, 0.0);
        rho0[(2, 2)] = C64::new(0.5, 0.0);
        let rho0 = QuantumState::mixed(space, rho0).unwrap();
        let grid = TimeGrid::new(10.0e-3, 1.0e-4, 20).unwrap();
        let out =
            evolve_lindblad(&h, &NoiseSpec { dephasing_rate: TWO_PI * 25.0 }, &rho0, &grid)
                .unwrap();
        let last = out.last().unwrap().to_density();
        let diff = crate::algebra::max_abs(&(&last - &rho0.to_density()));
        assert!(diff < 1e-12, "diagonal state drifted by {diff:.3e}");
    }

    #[test]
    fn purity_monotone_under_pure_dephasing() {
        // H commutes with every σ_m^z: only coherences decay.
        let space = make_space(2, 1).unwrap();
        let sz = spin(space, SpinKind::SigmaZ, SpinTarget::Collective).unwrap();
        let mut h = TimeDependentHamiltonian::new(space);
        h.push_term(C64::new(TWO_PI * 1.0e3 / 4.0, 0.0), 0.0, sz.matrix().clone());
        let amp = C64::new(0.5, 0.0);
        let psi0 = QuantumState::pure(
            space,
            Array1::from_shape_fn(space.dim(), |i| if i < 4 { amp } else { C64::new(0.0, 0.0) }),
        )
        .unwrap();
        let grid = TimeGrid::new(20.0e-3, 5.0e-6, 40).unwrap();
        let out =
            evolve_lindblad(&h, &NoiseSpec { dephasing_rate: TWO_PI * 25.0 }, &psi0, &grid)
                .unwrap();
        let mut prev = f64::INFINITY;
        for st in &out {
            let p = st.purity();
            assert!(p <= prev + 1e-7, "purity rose from {prev} to {p}");
            prev = p;
        }
    }

    #[test]
    fn too_coarse_step_fails() {
        let space = make_space(1, 0).unwrap();
        let omega = TWO_PI * 50.0e3;
        let sx = spin(space, SpinKind::SigmaX, SpinTarget::Qubit(1)).unwrap();
        let mut h = TimeDependentHamiltonian::new(space);
        h.push_term(C64::new(omega / 4.0, 0.0), 0.0, sx.matrix().clone());
        let psi0 = QuantumState::basis(space, 0, 0).unwrap();
        let t_end = 50.0 * TWO_PI / omega;
        let grid = TimeGrid::new(t_end, TWO_PI / omega / 2.0, 10).unwrap();
        assert!(evolve_unitary(&h, &psi0, &grid).is_err());
    }
}
