//! Output shapes for the subcommands that do not emit a core type directly,
//! plus the CSV renderings.

use anosov_core::{
    CounterexampleReport, LivsicReport, OrbitSpectrum, PressureCurve, PressureMethod, Rectangle,
};
use serde::Serialize;
use std::fmt::Write;

#[derive(Serialize)]
pub struct PressureReport {
    pub matrix: [[i64; 2]; 2],
    pub potential: String,
    pub method: PressureMethod,
    pub order: usize,
    pub value: f64,
    pub cross_method: PressureMethod,
    pub cross_order: usize,
    pub cross_value: f64,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct CodingReport {
    pub matrix: [[i64; 2]; 2],
    pub alphabet_size: usize,
    pub zero_symbol: usize,
    pub mixing_power: usize,
    pub max_diameter: f64,
    pub rectangles: Vec<Rectangle>,
    pub transition: Vec<Vec<u8>>,
}

#[derive(Serialize)]
pub struct CohomologyByDepth {
    pub depth: usize,
    pub residual: f64,
    pub points_checked: usize,
    pub skipped_boundary_points: usize,
}

/// Calibration of the measure coordinates against the Lebesgue model, where
/// every number has a closed form.
#[derive(Serialize)]
pub struct LebesgueCalibration {
    pub livsic_bound: f64,
    pub xi_affine_max_dev: f64,
    pub xi_max_error_radius: f64,
    pub inverse_g_cycle_max_dev: f64,
}

#[derive(Serialize)]
pub struct ThetaSample {
    pub samples: usize,
    pub seed: u64,
    pub short_truncation: usize,
    pub long_truncation: usize,
    /// Largest observed |Δlog θ| / (sum of advertised tails); certified
    /// truncation keeps this at or below one.
    pub worst_tail_utilization: f64,
}

#[derive(Serialize)]
pub struct RealizeReport {
    pub matrix: [[i64; 2]; 2],
    /// Zero-pressure representative the diagnostics ran on.
    pub potential: String,
    pub depth: usize,
    /// Pressure subtracted from the requested potential.
    pub normalization: f64,
    pub livsic: LivsicReport,
    pub cohomology: Vec<CohomologyByDepth>,
    pub lebesgue: LebesgueCalibration,
    pub theta: ThetaSample,
}

pub fn curve_csv(c: &PressureCurve) -> String {
    let mut out = String::from("t,P,method,order,residual\n");
    for i in 0..c.t_grid.len() {
        writeln!(
            out,
            "{},{},{},{},{}",
            c.t_grid[i],
            c.values[i],
            c.method.name(),
            c.order,
            c.residuals[i]
        )
        .unwrap();
    }
    out
}

pub fn pressure_csv(r: &PressureReport) -> String {
    format!(
        "t,P,method,order,residual\n1,{},{},{},{}\n",
        r.value,
        r.method.name(),
        r.order,
        r.residual
    )
}

/// One row per grid point over the transfer-operator curves of the pair.
pub fn counterexample_csv(r: &CounterexampleReport) -> String {
    let a = &r.transfer_curve_phi;
    let b = &r.transfer_curve_phi2;
    let mut out = String::from("t,P_phi,P_phi2,gap\n");
    for i in 0..a.t_grid.len() {
        writeln!(
            out,
            "{},{},{},{}",
            a.t_grid[i],
            a.values[i],
            b.values[i],
            (a.values[i] - b.values[i]).abs()
        )
        .unwrap();
    }
    out
}

pub fn spectrum_csv(s: &OrbitSpectrum) -> String {
    let mut out = String::from("period,value\n");
    for (period, values) in &s.entries {
        for v in values {
            writeln!(out, "{period},{v}").unwrap();
        }
    }
    out
}
