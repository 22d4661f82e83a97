//! Classical emulation of Schrödingerised linear iterations.
//!
//! A stationary iteration y ↦ Gy + g is augmented to x ↦ Cx, relaxed to the
//! ODE dx/dt = (C − I)x and simulated as a family of Schrödinger equations in
//! an auxiliary Fourier variable. On top of that engine sit the quantum Jacobi
//! linear solver and the quantum power method, with dense classical oracles
//! for verification.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod schrodingerization;
pub mod solvers;

pub use error::{Result, SchroError};
pub use linalg::{ComplexMatrix, ComplexVector};
