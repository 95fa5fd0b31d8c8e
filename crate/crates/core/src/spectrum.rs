//! Unmarked orbit spectra: the multiset {(S_nφ(x), n) : Lⁿx = x, n ≤ N}
//! and its comparison. This is the conjugacy invariant that separates maps
//! whose pressure functions agree.

use crate::error::{Error, Result};
use crate::potential::{birkhoff_sum, Potential};
use crate::torus::{periodic_points, ToralAutomorphism, TorusPoint};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Comparison tolerance for spectrum values: entries are exact-rational
/// evaluations of trig polynomials, so only float noise remains.
pub const SPECTRUM_TOL: f64 = 1e-9;

/// Count safety: |Fix(Lⁿ)| grows like λⁿ.
const MAX_PERIOD_CAP: usize = 20;

/// Birkhoff values per period, one entry per fixed point of Lⁿ (not per
/// orbit: each cyclic marking counts), sorted within each period.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitSpectrum {
    pub max_period: usize,
    pub entries: BTreeMap<usize, Vec<f64>>,
}

impl OrbitSpectrum {
    pub fn period(&self, n: usize) -> &[f64] {
        self.entries.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Outcome of a multiset comparison: on difference, the smallest witnessing
/// period together with both sorted value multisets at that period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum SpectrumComparison {
    Equal,
    Differ {
        period: usize,
        left: Vec<f64>,
        right: Vec<f64>,
    },
}

impl SpectrumComparison {
    /// Largest pointwise gap between the witnessing sorted multisets;
    /// zero when equal.
    pub fn witness_gap(&self) -> f64 {
        match self {
            SpectrumComparison::Equal => 0.0,
            SpectrumComparison::Differ { left, right, .. } => {
                if left.len() != right.len() {
                    return f64::INFINITY;
                }
                left.iter()
                    .zip(right)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            }
        }
    }

    pub fn witness_period(&self) -> Option<usize> {
        match self {
            SpectrumComparison::Equal => None,
            SpectrumComparison::Differ { period, .. } => Some(*period),
        }
    }
}

/// Exact-rational enumeration of all periodic points up to max_period, with
/// S_nφ evaluated along each rational orbit. Entry count at period n is
/// |Fix(Lⁿ)| by construction.
pub fn unmarked_spectrum(
    phi: &Potential,
    aut: &ToralAutomorphism,
    max_period: usize,
) -> Result<OrbitSpectrum> {
    if max_period == 0 || max_period > MAX_PERIOD_CAP {
        return Err(Error::InvalidInput(format!(
            "max_period must be in 1..={MAX_PERIOD_CAP}"
        )));
    }
    let mut entries = BTreeMap::new();
    for n in 1..=max_period {
        let mut values: Vec<f64> = periodic_points(aut, n)?
            .into_iter()
            .map(|p| birkhoff_sum(phi, aut, TorusPoint::Exact(p), n))
            .collect();
        values.sort_by(f64::total_cmp);
        entries.insert(n, values);
    }
    Ok(OrbitSpectrum {
        max_period,
        entries,
    })
}

/// Multiset comparison per period: equal when every period's sorted values
/// match pairwise within tol; otherwise reports the smallest period that
/// differs.
pub fn compare_spectra(
    s1: &OrbitSpectrum,
    s2: &OrbitSpectrum,
    tol: f64,
) -> Result<SpectrumComparison> {
    if s1.max_period != s2.max_period {
        return Err(Error::InvalidInput(format!(
            "spectra cover different ranges: {} vs {}",
            s1.max_period, s2.max_period
        )));
    }
    for n in 1..=s1.max_period {
        let (a, b) = (s1.period(n), s2.period(n));
        let same = a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol);
        if !same {
            return Ok(SpectrumComparison::Differ {
                period: n,
                left: a.to_vec(),
                right: b.to_vec(),
            });
        }
    }
    Ok(SpectrumComparison::Equal)
}
