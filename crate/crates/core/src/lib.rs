//! Quasi-energy band structure of the quantum kicked rotor at resonance.
//!
//! The propagator e^{-iτ(-i d/dθ + β)²/2} e^{-iμ cos θ} commutes with a
//! momentum translation exactly at the resonances τ = 2πP/Q,
//! β ≡ ν/P + Q/2 (mod 1). There it decomposes over the conserved Bloch angle
//! into Q×Q unitary blocks whose eigenphases sweep bands. This crate builds
//! those blocks, tracks the bands, measures their widths against the no-flat-
//! band criterion, evaluates the perturbative bandwidth coefficients of
//! prime-order resonances by exact residue sums, and checks the Gauss-sum
//! machinery that controls their decay.
//!
//! Organization:
//! - [`params`]: resonance validation and the unperturbed spectrum;
//! - [`floquet`]: the block matrices G, S(ϑ,μ), V(θ), X(θ,μ) and the
//!   split-step decomposition oracle;
//! - [`bands`]: eigenphase extraction, band tracking, widths, flatness, and
//!   the leading-block determinant;
//! - [`perturb`]: path/composition residue sums for s_j, α_j, and the
//!   extended-precision finite-difference oracle;
//! - [`gauss`]: partial Gauss sums, log-diagonal estimates, the γ
//!   optimization, and the decay fit;
//! - [`verify`]: the acceptance checklist as runnable criteria.

pub mod bands;
pub mod error;
pub mod floquet;
pub mod gauss;
pub mod linalg;
pub mod num;
pub mod params;
pub mod perturb;
pub mod verify;

pub use bands::{
    band_widths, eigenphases, flatness_test, gd_determinant, sweep_bands, BandStructure,
    EigenSolution, DEFAULT_FLATNESS_THRESHOLD, DEFAULT_GRID,
};
pub use error::{Result, RotorError};
pub use floquet::{
    build_g, build_s, build_x, verify_direct_integral, BlochAngle, UnitaryMatrix,
};
pub use gauss::{
    decay_fit, fourier_log_coeff, gamma_bound, gauss_partial_sum, is_prime, log_diagonal_product,
    GammaBoundResult, GaussCase, GaussSumReport,
};
pub use params::{
    admissible_nu, unperturbed_eigenvalues, validate_resonance, ResonanceParams,
    UnperturbedSpectrum,
};
pub use perturb::{
    alpha_exponent, canonical_path, numerical_band_derivative, path_operator_element,
    path_sum_coefficient, scaling_fit, Composition, LatticePath, PathSumCoefficient,
};
