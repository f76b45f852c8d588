//! Klein-Gordon oscillator in a Lorentz-violating background.
//!
//! Closed-form energy spectra, normalized radial eigenfunctions and the
//! conserved four-current for a timelike, spacelike or mixed background
//! vector, together with independent numerical oracles: a finite-difference
//! radial eigensolver and Gauss-Laguerre quadrature.

pub mod analytic;
pub mod error;
pub mod model;
pub mod solver;
pub mod specfun;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    dispersion_coefficients, energy_levels, lambda_required, BackgroundConfig, Branch,
    DispersionCoefficients, EnergyLevels, ModelParams, Prescription, QuantumNumbers,
};
pub use analytic::{
    charge_density_factor, four_current, normalization_constant, radial_wavefunction, CurrentSample,
    ModeState, RadialSolution, SpacetimePoint, Superposition,
};
pub use solver::{energies_from_lambda, richardson_lambda, solve_radial, GridSpec, LambdaSpectrum};
