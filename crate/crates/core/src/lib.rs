//! Deterministic preparation circuits for qudit Dicke states.
//!
//! The crate synthesizes the `U_n^{(d)}` Dicke operator as an ordered list of
//! multi-controlled subspace NOT / `R^y` gates, simulates it on a dense qudit
//! statevector, and checks the result against a brute-force reference state.
//!
//! Numerical code is generic over the amplitude scalar ([`Real`], implemented
//! for `f32` and `f64`); the aliases below fix the scalar to `f64`, which is
//! what the verification tolerances assume.
//!
//! Wire convention: wire 0 is the least-significant base-`d` digit of a basis
//! index, i.e. the rightmost tensor factor.

pub mod basis;
pub mod circuit;
pub mod error;
pub mod gate;
pub mod matrix;
pub mod pruning;
pub mod reference;
pub mod scalar;
pub mod simulator;
pub mod state;
pub mod synthesis;

pub use basis::{BasisIndex, CompositionVector, Register};
pub use circuit::{Circuit, Family, MacroTag};
pub use error::{Error, Result};
pub use gate::{Control, ControlledGate, GatePrimitive};
pub use matrix::Matrix;
pub use pruning::{PrunedSpec, QutritRule};
pub use scalar::Real;
pub use simulator::{Mode, Simulator, VerifyOptions, VerifyReport};
pub use state::QuditState;
pub use synthesis::{AngleSet, VOperatorSpec};

/// Double-precision statevector.
pub type State = QuditState<f64>;
/// Single-precision statevector.
pub type State32 = QuditState<f32>;
/// Double-precision dense complex matrix.
pub type CMatrix = Matrix<f64>;
/// Single-precision dense complex matrix.
pub type CMatrix32 = Matrix<f32>;
/// Double-precision complex amplitude.
pub type Amplitude = num_complex::Complex<f64>;
