//! Trapped-ion analog simulation of Dicke-family models: operator algebra on
//! a boson⊗qubits space, model and ion-drive Hamiltonians, unitary and
//! dephasing-Lindblad RK4 evolution, trajectory observables, and the parameter
//! mapping between the ion frame and the model frame.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod ionsim;
pub mod mapping;
pub mod models;
pub mod observables;
pub mod presets;
pub mod scenario;

pub use error::{Error, Result};
