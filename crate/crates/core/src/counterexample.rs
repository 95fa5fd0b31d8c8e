//! End-to-end pipeline for the pressure-rigidity counterexample: a
//! zero-pressure potential φ and its exact composition φ∘M_k share the
//! pressure function t ↦ P(tφ) while their unmarked periodic-orbit spectra
//! differ, so no smooth conjugacy intertwines the two pairs even though
//! every pressure-based invariant agrees.

use crate::coding::build_partition;
use crate::error::{Error, Result};
use crate::potential::{birkhoff_sum, Potential};
use crate::pressure::{
    pressure_curve_on, pressure_transfer, uniform_grid, PressureCurve, PressureMethod,
};
use crate::spectrum::{compare_spectra, unmarked_spectrum, SpectrumComparison};
use crate::torus::{eigen_data, periodic_points, RatPoint, TorusPoint};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Combined allowance for the two pressure methods at the default orders.
pub const DEFAULT_CURVE_TOL: f64 = 5e-3;
/// Below this, two spectrum values count as equal.
pub const DEFAULT_SPEC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    pub matrix: [[i64; 2]; 2],
    /// Base potential ψ before zero-pressure normalization.
    pub base: Potential,
    /// The composition factor: the counterexample pairs φ with φ∘M_k.
    pub k: u32,
    /// Spectra are compared for all periods up to this.
    pub max_period: usize,
    /// Cylinder depth for the transfer-operator method and normalization.
    pub depth: usize,
    /// Truncation order for the spectral-determinant method.
    pub ratio_order: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub curve_tol: f64,
    pub spec_tol: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        CounterexampleConfig {
            matrix: [[1, 1], [1, 0]],
            base: Potential::cosine([1, 0], 0.3),
            k: 2,
            max_period: 6,
            depth: 10,
            ratio_order: 18,
            t_min: -2.0,
            t_max: 2.0,
            t_step: 0.05,
            curve_tol: DEFAULT_CURVE_TOL,
            spec_tol: DEFAULT_SPEC_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    Reproduced,
    Failed { reason: String },
}

/// Smallest period at which the two unmarked spectra separate, with both
/// value multisets and their largest pointwise gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumWitness {
    pub period: usize,
    pub phi_values: Vec<f64>,
    pub phi_k_values: Vec<f64>,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub config: CounterexampleConfig,
    /// Normalized potential, for display.
    pub potential: String,
    /// Pressure subtracted from the base potential.
    pub normalization: f64,
    /// ψ at the fixed point minus its average over the period-3 orbit. The
    /// spectra can only separate at period 3 when this is nonzero.
    pub condition_check: f64,
    pub pressure_curve_phi: PressureCurve,
    pub pressure_curve_phi2: PressureCurve,
    pub transfer_curve_phi: PressureCurve,
    pub transfer_curve_phi2: PressureCurve,
    /// Largest |P(tφ) − P(tφ∘M_k)| over the grid, per method.
    pub ratio_curve_gap: f64,
    pub transfer_curve_gap: f64,
    /// Max of the two per-method gaps.
    pub max_curve_gap: f64,
    pub comparison: SpectrumComparison,
    pub spectrum_witness: Option<SpectrumWitness>,
    pub verdict: Verdict,
}

/// ψ(fixed point) − mean of ψ over the non-fixed period-3 points. For the
/// cat map these are the three half-integer points forming the unique
/// period-3 orbit.
pub fn period3_condition(psi: &Potential, matrix: [[i64; 2]; 2]) -> Result<f64> {
    let aut = eigen_data(matrix)?;
    let fixed: BTreeSet<RatPoint> = periodic_points(&aut, 1)?.into_iter().collect();
    let orbit: Vec<RatPoint> = periodic_points(&aut, 3)?
        .into_iter()
        .filter(|p| !fixed.contains(p))
        .collect();
    if orbit.is_empty() || fixed.is_empty() {
        return Err(Error::ConstructionFailed(
            "no period-3 orbit to separate".into(),
        ));
    }
    let at_fixed = psi.eval_f(fixed.iter().next().unwrap().to_float());
    let mean = orbit
        .iter()
        .map(|p| psi.eval_f(p.to_float()))
        .sum::<f64>()
        / orbit.len() as f64;
    Ok(at_fixed - mean)
}

pub fn run_counterexample(config: &CounterexampleConfig) -> Result<CounterexampleReport> {
    let aut = eigen_data(config.matrix)?;
    let coding = build_partition(&aut)?;

    let condition_check = period3_condition(&config.base, config.matrix)?;
    if condition_check.abs() < 1e-9 {
        return Err(Error::ConditionDegenerate(condition_check.abs()));
    }

    // Normalize first, then compose: M_k preserves the constant term, so
    // both potentials carry the same shift and the spectra stay directly
    // comparable. Normalizing each by its own computed pressure would
    // smear the finite-depth pressure error across every period.
    let normalization = pressure_transfer(&config.base, &coding, config.depth)?;
    let phi = config.base.shifted(-normalization);
    let phi_k = phi.compose_mul_k(config.k);

    let grid = uniform_grid(config.t_min, config.t_max, config.t_step)?;
    let ratio_cross = Some((PressureMethod::TransferOperator, config.depth));
    let transfer_cross = Some((PressureMethod::OrbitRatio, config.ratio_order));
    let pressure_curve_phi = pressure_curve_on(
        &coding,
        &phi,
        &grid,
        PressureMethod::OrbitRatio,
        config.ratio_order,
        ratio_cross,
    )?;
    let pressure_curve_phi2 = pressure_curve_on(
        &coding,
        &phi_k,
        &grid,
        PressureMethod::OrbitRatio,
        config.ratio_order,
        ratio_cross,
    )?;
    let transfer_curve_phi = pressure_curve_on(
        &coding,
        &phi,
        &grid,
        PressureMethod::TransferOperator,
        config.depth,
        transfer_cross,
    )?;
    let transfer_curve_phi2 = pressure_curve_on(
        &coding,
        &phi_k,
        &grid,
        PressureMethod::TransferOperator,
        config.depth,
        transfer_cross,
    )?;

    let ratio_curve_gap = max_gap(&pressure_curve_phi, &pressure_curve_phi2);
    let transfer_curve_gap = max_gap(&transfer_curve_phi, &transfer_curve_phi2);
    let max_curve_gap = ratio_curve_gap.max(transfer_curve_gap);

    let s_phi = unmarked_spectrum(&phi, &aut, config.max_period)?;
    let s_phi_k = unmarked_spectrum(&phi_k, &aut, config.max_period)?;
    let comparison = compare_spectra(&s_phi, &s_phi_k, config.spec_tol)?;
    let spectrum_witness = match &comparison {
        SpectrumComparison::Equal => None,
        SpectrumComparison::Differ {
            period,
            left,
            right,
        } => Some(SpectrumWitness {
            period: *period,
            phi_values: left.clone(),
            phi_k_values: right.clone(),
            gap: comparison.witness_gap(),
        }),
    };

    let verdict = decide(
        max_curve_gap,
        config.curve_tol,
        spectrum_witness.as_ref(),
        config.spec_tol,
        condition_check,
    );

    Ok(CounterexampleReport {
        config: config.clone(),
        potential: phi.to_string(),
        normalization,
        condition_check,
        pressure_curve_phi,
        pressure_curve_phi2,
        transfer_curve_phi,
        transfer_curve_phi2,
        ratio_curve_gap,
        transfer_curve_gap,
        max_curve_gap,
        comparison,
        spectrum_witness,
        verdict,
    })
}

fn max_gap(a: &PressureCurve, b: &PressureCurve) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn decide(
    max_curve_gap: f64,
    curve_tol: f64,
    witness: Option<&SpectrumWitness>,
    spec_tol: f64,
    condition: f64,
) -> Verdict {
    if max_curve_gap > curve_tol {
        return Verdict::Failed {
            reason: format!("pressure curves separate: max gap {max_curve_gap:.3e} > {curve_tol:.1e}"),
        };
    }
    let Some(w) = witness else {
        return Verdict::Failed {
            reason: "unmarked spectra agree at every compared period".into(),
        };
    };
    if w.gap < spec_tol {
        return Verdict::Failed {
            reason: format!("spectrum witness gap {:.3e} below {spec_tol:.1e}", w.gap),
        };
    }
    if condition.abs() < spec_tol / 4.0 {
        return Verdict::Failed {
            reason: format!("period-3 separation margin {:.3e} too small", condition.abs()),
        };
    }
    Verdict::Reproduced
}

/// S_nφ over an exact periodic point, exposed for spot checks of reports.
pub fn orbit_sum_at(phi: &Potential, matrix: [[i64; 2]; 2], p: RatPoint, n: usize) -> Result<f64> {
    let aut = eigen_data(matrix)?;
    Ok(birkhoff_sum(phi, &aut, TorusPoint::Exact(p), n))
}
