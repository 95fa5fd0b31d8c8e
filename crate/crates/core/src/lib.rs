//! Thermodynamic formalism for hyperbolic automorphisms of the 2-torus.
//!
//! The crate builds the full numerical pipeline: exact arithmetic on the
//! torus, trigonometric-polynomial potentials, a Markov partition and its
//! subshift, equilibrium states via the transfer operator, pressure curves,
//! unmarked orbit spectra, and the measure-theoretic chart comparison that
//! distinguishes potentials sharing a pressure function.

pub mod coding;
pub mod counterexample;
mod error;
pub mod gibbs;
pub mod potential;
pub mod pressure;
pub mod realization;
pub mod spectrum;
pub mod torus;
pub mod util;

pub use coding::{build_partition, MarkovCoding, Rectangle, Sft, Word};
pub use counterexample::{
    period3_condition, run_counterexample, CounterexampleConfig, CounterexampleReport,
    SpectrumWitness, Verdict, DEFAULT_CURVE_TOL, DEFAULT_SPEC_TOL,
};
pub use error::{Error, Result};
pub use gibbs::{
    bowen_constant, bowen_constant_exact, cylinder_potential, equilibrium, g_function,
    product_density, GFunction, GibbsApproximation,
};
pub use potential::{birkhoff_sum, rn_cocycle, HolderData, Potential, PotentialTerm};
pub use realization::{
    cohomology_residual, livsic_bound_report, unstable_derivative_new_charts, xi, ChartImage,
    CohomologyReport, LivsicReport, XiChart,
};
pub use pressure::{
    lyapunov_from_pressure, normalize_to_zero_pressure, pressure_curve, pressure_curve_on,
    pressure_orbit_ratio, pressure_orbit_sum, pressure_transfer, uniform_grid, PressureCurve,
    PressureMethod,
};
pub use spectrum::{
    compare_spectra, unmarked_spectrum, OrbitSpectrum, SpectrumComparison, SPECTRUM_TOL,
};
pub use torus::{
    bracket_decompose, eigen_data, homoclinic_from_index, homoclinic_points, mul_k,
    periodic_points, FloatPoint, HomoclinicVector, RatPoint, Rational, ToralAutomorphism,
    TorusPoint,
};
