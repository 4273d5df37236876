//! Operator algebra on a truncated Fock space tensored with a register of
//! qubits.
//!
//! Basis ordering is boson-major: index `i = n * 2^N + q`, where `n` is the
//! Fock level and bit `N - m` of `q` holds the state of qubit `m` (1 = up).
//! All operators are dense complex matrices; construction is exact (no
//! floating-point rounding beyond the matrix entries themselves).

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default cap on the total Hilbert-space dimension.
pub const DEFAULT_DIM_GUARD: usize = 4096;

/// Tolerance below which negative eigenvalues are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-7;

const HERM_TOL: f64 = 1e-9;

/// Composite space descriptor: one truncated boson mode and `n_qubits` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    n_qubits: usize,
    fock_cutoff: usize,
}

impl HilbertSpace {
    /// Build a space with the default dimension guard.
    pub fn new(n_qubits: usize, fock_cutoff: usize) -> Result<Self> {
        Self::with_guard(n_qubits, fock_cutoff, DEFAULT_DIM_GUARD)
    }

    pub fn with_guard(n_qubits: usize, fock_cutoff: usize, max_dim: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Config("n_qubits must be at least 1".into()));
        }
        let dim = (fock_cutoff + 1) << n_qubits;
        if dim > max_dim {
            return Err(Error::MemoryGuard { dim, max: max_dim });
        }
        Ok(Self { n_qubits, fock_cutoff })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Highest retained Fock level; boson dimension is `fock_cutoff + 1`.
    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    pub fn boson_dim(&self) -> usize {
        self.fock_cutoff + 1
    }

    pub fn qubit_dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.boson_dim() * self.qubit_dim()
    }

    /// Basis index of `|n⟩ ⊗ |q⟩`.
    pub fn index(&self, fock: usize, qubits: usize) -> usize {
        debug_assert!(fock <= self.fock_cutoff);
        debug_assert!(qubits < self.qubit_dim());
        fock * self.qubit_dim() + qubits
    }

    /// Inverse of [`Self::index`]: `(fock, qubits)`.
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.qubit_dim(), index % self.qubit_dim())
    }

    /// Bit mask selecting qubit `m` (1-based) within the qubit part.
    pub fn qubit_bit(&self, m: usize) -> usize {
        debug_assert!(m >= 1 && m <= self.n_qubits);
        1 << (self.n_qubits - m)
    }
}

/// Convenience wrapper for [`HilbertSpace::new`].
pub fn make_space(n_qubits: usize, fock_cutoff: usize) -> Result<HilbertSpace> {
    HilbertSpace::new(n_qubits, fock_cutoff)
}

/// Dense operator bound to a space.
#[derive(Debug, Clone)]
pub struct Operator {
    space: HilbertSpace,
    matrix: Array2<C64>,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::Config(format!(
                "operator shape {:?} does not match space dim {}",
                matrix.dim(),
                space.dim()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        Self { space, matrix: Array2::zeros((space.dim(), space.dim())) }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let mut m = Array2::zeros((space.dim(), space.dim()));
        for i in 0..space.dim() {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        Self { space, matrix: m }
    }

    pub fn from_diagonal(space: HilbertSpace, diag: impl Fn(usize) -> f64) -> Self {
        let mut m = Array2::zeros((space.dim(), space.dim()));
        for i in 0..space.dim() {
            m[(i, i)] = C64::new(diag(i), 0.0);
        }
        Self { space, matrix: m }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self { space: self.space, matrix: dagger(&self.matrix) }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { space: self.space, matrix: self.matrix.mapv(|v| c * v) }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        Self { space: self.space, matrix: self.matrix.dot(&other.matrix) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { space: self.space, matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { space: self.space, matrix: &self.matrix - &other.matrix }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        let ab = self.matrix.dot(&other.matrix);
        let ba = other.matrix.dot(&self.matrix);
        Self { space: self.space, matrix: ab - ba }
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// Max-abs-entry distance from the adjoint.
    pub fn herm_defect(&self) -> f64 {
        herm_defect(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.herm_defect() <= tol
    }
}

pub fn dagger(m: &Array2<C64>) -> Array2<C64> {
    let (r, c) = m.dim();
    Array2::from_shape_fn((c, r), |(i, j)| m[(j, i)].conj())
}

pub fn max_abs(m: &Array2<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn herm_defect(m: &Array2<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Annihilation and creation operators of the boson mode, embedded on the
/// composite space: `a|n⟩ = √n |n−1⟩` on the truncated ladder.
pub fn ladder(space: HilbertSpace) -> (Operator, Operator) {
    let mut a = Operator::zeros(space);
    for n in 1..=space.fock_cutoff() {
        let amp = C64::new((n as f64).sqrt(), 0.0);
        for q in 0..space.qubit_dim() {
            a.matrix[(space.index(n - 1, q), space.index(n, q))] = amp;
        }
    }
    let adag = a.dagger();
    (a, adag)
}

/// Phonon number operator `a†a` (diagonal, exact).
pub fn number(space: HilbertSpace) -> Operator {
    Operator::from_diagonal(space, |i| space.split(i).0 as f64)
}

/// Total excitation number `n̂ = a†a + Σ_m |↑_m⟩⟨↑_m|` (diagonal, exact).
pub fn excitation_number(space: HilbertSpace) -> Operator {
    Operator::from_diagonal(space, |i| {
        let (n, q) = space.split(i);
        (n + q.count_ones() as usize) as f64
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinKind {
    SigmaZ,
    SigmaX,
    SigmaPlus,
    SigmaMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinTarget {
    /// Single qubit, 1-based index.
    Qubit(usize),
    /// Sum over all qubits.
    Collective,
}

/// Pauli / ladder operator on one qubit or the collective sum `Σ = Σ_m σ_m`.
pub fn spin(space: HilbertSpace, kind: SpinKind, target: SpinTarget) -> Result<Operator> {
    match target {
        SpinTarget::Qubit(m) => {
            if m < 1 || m > space.n_qubits() {
                return Err(Error::QubitIndex { index: m, n_qubits: space.n_qubits() });
            }
            Ok(single_spin(space, kind, m))
        }
        SpinTarget::Collective => {
            let mut total = Operator::zeros(space);
            for m in 1..=space.n_qubits() {
                total = total.add(&single_spin(space, kind, m));
            }
            Ok(total)
        }
    }
}

fn single_spin(space: HilbertSpace, kind: SpinKind, m: usize) -> Operator {
    let bit = space.qubit_bit(m);
    let mut op = Operator::zeros(space);
    let one = C64::new(1.0, 0.0);
    for i in 0..space.dim() {
        let (_, q) = space.split(i);
        let up = q & bit != 0;
        match kind {
            SpinKind::SigmaZ => {
                op.matrix[(i, i)] = if up { one } else { -one };
            }
            SpinKind::SigmaX => {
                op.matrix[(i ^ bit, i)] = one;
            }
            SpinKind::SigmaPlus => {
                if !up {
                    op.matrix[(i | bit, i)] = one;
                }
            }
            SpinKind::SigmaMinus => {
                if up {
                    op.matrix[(i & !bit, i)] = one;
                }
            }
        }
    }
    op
}

/// Quantum state: pure amplitude vector or density matrix.
#[derive(Debug, Clone)]
pub enum StateRep {
    Pure(Array1<C64>),
    Mixed(Array2<C64>),
}

#[derive(Debug, Clone)]
pub struct QuantumState {
    space: HilbertSpace,
    rep: StateRep,
}

impl QuantumState {
    pub fn pure(space: HilbertSpace, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::InvalidState(format!(
                "amplitude length {} does not match dim {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!("pure state norm {norm} deviates from 1")));
        }
        Ok(Self { space, rep: StateRep::Pure(amplitudes) })
    }

    pub fn mixed(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::InvalidState("density matrix shape mismatch".into()));
        }
        let trace: C64 = (0..space.dim()).map(|i| matrix[(i, i)]).sum();
        if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-9 {
            return Err(Error::InvalidState(format!("density matrix trace {trace} deviates from 1")));
        }
        let defect = herm_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::InvalidState(format!(
                "density matrix Hermiticity defect {defect:.3e}"
            )));
        }
        Ok(Self { space, rep: StateRep::Mixed(matrix) })
    }

    /// Computational basis state `|fock⟩ ⊗ |qubits⟩` (qubit bits as in
    /// [`HilbertSpace::index`]).
    pub fn basis(space: HilbertSpace, fock: usize, qubits: usize) -> Result<Self> {
        if fock > space.fock_cutoff() || qubits >= space.qubit_dim() {
            return Err(Error::InvalidState("basis labels out of range".into()));
        }
        let mut amps = Array1::zeros(space.dim());
        amps[space.index(fock, qubits)] = C64::new(1.0, 0.0);
        Ok(Self { space, rep: StateRep::Pure(amps) })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn rep(&self) -> &StateRep {
        &self.rep
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.rep, StateRep::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&Array1<C64>> {
        match &self.rep {
            StateRep::Pure(v) => Some(v),
            StateRep::Mixed(_) => None,
        }
    }

    /// Density-matrix form, promoting pure states via the outer product.
    pub fn to_density(&self) -> Array2<C64> {
        match &self.rep {
            StateRep::Pure(v) => {
                let n = v.len();
                Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj())
            }
            StateRep::Mixed(m) => m.clone(),
        }
    }

    /// Smallest eigenvalue of the density-matrix form.
    pub fn min_eigenvalue(&self) -> f64 {
        match &self.rep {
            StateRep::Pure(_) => 0.0,
            StateRep::Mixed(m) => herm_eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn purity(&self) -> f64 {
        match &self.rep {
            StateRep::Pure(_) => 1.0,
            StateRep::Mixed(m) => {
                let n = m.nrows();
                let mut p = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        p += (m[(i, j)] * m[(j, i)]).re;
                    }
                }
                p
            }
        }
    }
}

fn to_dmatrix(m: &Array2<C64>) -> nalgebra::DMatrix<C64> {
    nalgebra::DMatrix::from_row_iterator(m.nrows(), m.ncols(), m.iter().cloned())
}

/// Eigendecomposition of a Hermitian matrix: ascending-unordered eigenvalues
/// with matching eigenvector columns.
fn herm_eigen(m: &Array2<C64>) -> (Vec<f64>, nalgebra::DMatrix<C64>) {
    let se = to_dmatrix(m).symmetric_eigen();
    (se.eigenvalues.iter().cloned().collect(), se.eigenvectors)
}

/// Eigenvalues only (faster than [`herm_eigen`]).
pub fn herm_eigenvalues(m: &Array2<C64>) -> Vec<f64> {
    to_dmatrix(m).symmetric_eigenvalues().iter().cloned().collect()
}

/// Rebuild `V f(Λ) V†` as an ndarray matrix.
fn herm_function(m: &Array2<C64>, f: impl Fn(f64) -> C64) -> Array2<C64> {
    let (vals, vecs) = herm_eigen(m);
    let n = m.nrows();
    let fd = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        vals.iter().map(|&l| f(l)),
    ));
    let out = &vecs * fd * vecs.adjoint();
    Array2::from_shape_fn((n, n), |(i, j)| out[(i, j)])
}

fn require_hermitian(m: &Array2<C64>, tol: f64) -> Result<()> {
    let defect = herm_defect(m);
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    Ok(())
}

/// Unique positive-semidefinite square root of a Hermitian PSD matrix.
///
/// Eigenvalues within `-PSD_CLAMP` of zero are clamped to zero; anything more
/// negative is an error.
pub fn herm_sqrt(m: &Operator) -> Result<Operator> {
    require_hermitian(&m.matrix, HERM_TOL)?;
    let vals = herm_eigenvalues(&m.matrix);
    let min = vals.into_iter().fold(f64::INFINITY, f64::min);
    if min < -PSD_CLAMP {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let matrix = herm_function(&m.matrix, |l| C64::new(l.max(0.0).sqrt(), 0.0));
    Ok(Operator { space: m.space, matrix })
}

/// `exp(−i·h·dt)` for Hermitian `h`, via eigendecomposition. Exact oracle for
/// time-independent evolution.
pub fn herm_propagator(h: &Operator, dt: f64) -> Result<Operator> {
    require_hermitian(&h.matrix, HERM_TOL)?;
    let matrix = herm_function(&h.matrix, |l| (C64::new(0.0, -l * dt)).exp());
    Ok(Operator { space: h.space, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn space_dimensions() {
        assert_eq!(make_space(3, 15).unwrap().dim(), 128);
        assert_eq!(make_space(1, 0).unwrap().dim(), 2);
        assert_eq!(make_space(2, 10).unwrap().dim(), 44);
    }

    #[test]
    fn space_rejects_zero_qubits_and_guard() {
        assert!(make_space(0, 4).is_err());
        let err = HilbertSpace::with_guard(3, 1000, 4096).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn ladder_annihilates_single_phonon() {
        let space = make_space(2, 5).unwrap();
        let (a, _) = ladder(space);
        let psi = QuantumState::basis(space, 1, 0).unwrap();
        let out = a.matrix().dot(psi.amplitudes().unwrap());
        let mut expected = Array1::<C64>::zeros(space.dim());
        expected[space.index(0, 0)] = c(1.0, 0.0);
        for (x, y) in out.iter().zip(expected.iter()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn number_operator_eigenvalue() {
        let space = make_space(1, 8).unwrap();
        let n = number(space);
        let psi = QuantumState::basis(space, 5, 0).unwrap();
        let v = psi.amplitudes().unwrap();
        let nv = n.matrix().dot(v);
        let val: C64 = v.iter().zip(nv.iter()).map(|(a, b)| a.conj() * b).sum();
        assert!((val.re - 5.0).abs() < 1e-14);
    }

    #[test]
    fn ladder_commutator_is_identity_up_to_cutoff() {
        let space = make_space(1, 5).unwrap();
        let (a, adag) = ladder(space);
        let comm = a.commutator(&adag);
        for i in 0..space.dim() {
            for j in 0..space.dim() {
                let (n, _) = space.split(i);
                let expected = if i != j {
                    0.0
                } else if n == space.fock_cutoff() {
                    -(space.fock_cutoff() as f64)
                } else {
                    1.0
                };
                assert!(
                    (comm.matrix()[(i, j)] - c(expected, 0.0)).norm() < 1e-12,
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn collective_sigma_plus_flips_each_qubit_once() {
        let space = make_space(3, 1).unwrap();
        let sp = spin(space, SpinKind::SigmaPlus, SpinTarget::Collective).unwrap();
        let down = QuantumState::basis(space, 0, 0).unwrap();
        let out = sp.matrix().dot(down.amplitudes().unwrap());
        let mut hits = 0;
        for m in 1..=3 {
            let idx = space.index(0, space.qubit_bit(m));
            assert!((out[idx] - c(1.0, 0.0)).norm() < 1e-15);
            hits += 1;
        }
        assert_eq!(hits, 3);
        assert!((out.iter().map(|v| v.norm_sqr()).sum::<f64>() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn distinct_qubit_operators_commute_exactly() {
        let space = make_space(2, 2).unwrap();
        let x1 = spin(space, SpinKind::SigmaX, SpinTarget::Qubit(1)).unwrap();
        let z2 = spin(space, SpinKind::SigmaZ, SpinTarget::Qubit(2)).unwrap();
        assert_eq!(x1.commutator(&z2).max_abs(), 0.0);
    }

    #[test]
    fn collective_ladder_adjoint_pair() {
        let space = make_space(2, 3).unwrap();
        let sp = spin(space, SpinKind::SigmaPlus, SpinTarget::Collective).unwrap();
        let sm = spin(space, SpinKind::SigmaMinus, SpinTarget::Collective).unwrap();
        assert_eq!(sp.dagger().sub(&sm).max_abs(), 0.0);
    }

    #[test]
    fn spin_rejects_bad_index() {
        let space = make_space(2, 1).unwrap();
        assert!(spin(space, SpinKind::SigmaX, SpinTarget::Qubit(3)).is_err());
        assert!(spin(space, SpinKind::SigmaX, SpinTarget::Qubit(0)).is_err());
    }

    #[test]
    fn collective_sigma_z_spectrum() {
        let space = make_space(3, 0).unwrap();
        let sz = spin(space, SpinKind::SigmaZ, SpinTarget::Collective).unwrap();
        let mut halves: Vec<i64> = (0..space.dim())
            .map(|i| (sz.matrix()[(i, i)].re / 2.0 * 2.0) as i64)
            .collect();
        halves.sort_unstable();
        halves.dedup();
        assert_eq!(halves, vec![-3, -1, 1, 3]); // Σ^z/2 runs −3/2..3/2 in integer steps
    }

    #[test]
    fn number_spectrum_degeneracy() {
        let space = make_space(2, 4).unwrap();
        let n = number(space);
        let mut counts = std::collections::HashMap::new();
        for i in 0..space.dim() {
            *counts.entry(n.matrix()[(i, i)].re as usize).or_insert(0usize) += 1;
        }
        for lvl in 0..=4 {
            assert_eq!(counts[&lvl], 4);
        }
    }

    #[test]
    fn herm_sqrt_identity_and_diagonal() {
        let space = make_space(1, 0).unwrap();
        let id = Operator::identity(space);
        let root = herm_sqrt(&id).unwrap();
        assert!(root.sub(&id).max_abs() < 1e-12);

        let d = Operator::from_diagonal(space, |i| if i == 0 { 4.0 } else { 9.0 });
        let root = herm_sqrt(&d).unwrap();
        assert!((root.matrix()[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((root.matrix()[(1, 1)].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn herm_sqrt_rejects_negative() {
        let space = make_space(1, 0).unwrap();
        let d = Operator::from_diagonal(space, |i| if i == 0 { 1.0 } else { -1e-3 });
        assert!(matches!(herm_sqrt(&d), Err(Error::NotPositive { .. })));
    }

    fn random_hermitian(rng: &mut impl Rng, space: HilbertSpace) -> Operator {
        let n = space.dim();
        let m = Array2::from_shape_fn((n, n), |_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let h = (&m + &dagger(&m)).mapv(|v| v * 0.5);
        Operator::new(space, h).unwrap()
    }

    #[test]
    fn herm_sqrt_random_psd_roundtrip() {
        let space = make_space(3, 0).unwrap(); // 8x8
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let h = random_hermitian(&mut rng, space);
            let psd = Operator::new(space, h.matrix().dot(h.matrix())).unwrap();
            let root = herm_sqrt(&psd).unwrap();
            let err = root.mul(&root).sub(&psd).max_abs();
            assert!(err < 1e-10, "roundtrip err {err:.3e}");
        }
    }

    #[test]
    fn propagator_of_zero_is_identity() {
        let space = make_space(1, 1).unwrap();
        let u = herm_propagator(&Operator::zeros(space), 1.0).unwrap();
        assert!(u.sub(&Operator::identity(space)).max_abs() < 1e-12);
    }

    #[test]
    fn propagator_full_rabi_cycle_returns_minus_identity() {
        let space = make_space(1, 0).unwrap();
        let omega = 2.0 * std::f64::consts::PI * 1.0e3;
        let sx = spin(space, SpinKind::SigmaX, SpinTarget::Qubit(1)).unwrap();
        let h = sx.scale(c(omega / 2.0, 0.0));
        let u = herm_propagator(&h, 2.0 * std::f64::consts::PI / omega).unwrap();
        let minus_id = Operator::identity(space).scale(c(-1.0, 0.0));
        assert!(u.sub(&minus_id).max_abs() < 1e-9);
    }

    #[test]
    fn propagator_unitary_on_random_hermitian() {
        let space = make_space(4, 0).unwrap(); // 16x16
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, space);
            let u = herm_propagator(&h, 0.37).unwrap();
            let defect = u.dagger().mul(&u).sub(&Operator::identity(space)).max_abs();
            assert!(defect < 1e-9, "unitarity defect {defect:.3e}");
        }
    }

    proptest! {
        #[test]
        fn propagator_preserves_norm(seed in 0u64..200) {
            let space = make_space(2, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, space);
            let u = herm_propagator(&h, 1.3).unwrap();
            let mut v = Array1::from_shape_fn(space.dim(), |_| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            v.mapv_inplace(|x| x / norm);
            let uv = u.matrix().dot(&v);
            let out_norm = uv.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((out_norm - 1.0).abs() < 1e-9);
        }
    }
}
