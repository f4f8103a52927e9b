//! First-order variational perturbation theory for a hydrogen atom in a
//! uniform magnetic field.
//!
//! The crate computes the temperature-dependent effective classical
//! potential `W1(x0)` from an anisotropic harmonic trial system, its
//! zero-temperature limit (ground-state and binding energies), and the
//! weak- and strong-field expansions of the binding energy.
//!
//! All quantities are in natural atomic units (`hbar = e^2 = k_B = c = M = 1`)
//! with the cyclotron frequency equal to the field strength.  See [`units`]
//! for conversions.
//!
//! Numerical kernels are generic over the scalar type through [`Real`]; the
//! aliases below fix them to `f64` for everyday use.

pub mod effective_potential;
pub mod error;
pub mod ground_state;
pub mod minimize;
pub mod optimizer;
pub mod quadrature;
pub mod real;
pub mod smearing;
pub mod strong_field;
pub mod trial_oscillator;
pub mod units;
pub mod weak_field;

pub use error::{Error, Result};
pub use real::Real;

pub type Frequencies = trial_oscillator::FrequencyTriple<f64>;
pub type Widths = trial_oscillator::FluctuationWidths<f64>;
pub type Point = effective_potential::ThermoPoint<f64>;
pub type Evaluation = effective_potential::PotentialEvaluation<f64>;
pub type Optimization = optimizer::OptimizationResult<f64>;
pub type GroundState = ground_state::GroundStateResult<f64>;
pub type Breakdown = strong_field::AsymptoticBreakdown<f64>;
pub type Smearing = smearing::SmearingInput<f64>;
