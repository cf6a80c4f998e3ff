//! Exact structural analysis of mass-action reaction networks, and recovery
//! of the unique weakly reversible deficiency-zero realization of a
//! polynomial dynamical system when one exists.
//!
//! Structural code runs on exact rationals ([`Rational`]); only the
//! simulator uses floating point. The linear algebra is generic over any
//! exact [`scalar::Field`] and the simulator over any [`num_traits::Float`];
//! the aliases below fix the types used throughout the rest of the crate.

pub mod dynamics;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod linalg;
pub mod network;
pub mod partition;
pub mod realization;
pub mod scalar;
pub mod simulate;

pub use dynamics::{NetReactionMap, PolynomialMap};
pub use network::{Complex, MassActionSystem, NetworkReport, Reaction, ReactionNetwork};
pub use realization::{OdeSystem, RealizationResult, UniquenessCertificate};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
pub type RatVector = linalg::Vector<Rational>;
pub type RatMatrix = linalg::Matrix<Rational>;
/// Double-precision trajectory, the simulator's default.
pub type Trajectory = simulate::Trajectory<f64>;
