//! The measure-coordinate construction: ξ-charts from cumulative cylinder
//! masses on the base rectangle, the unstable derivative in the new charts
//! through the g-function, the Livšic boundedness certificate, and the
//! periodic-orbit cohomology residual tying -log|D_u| to the potential.

use crate::coding::{MarkovCoding, Word};
use crate::error::{Error, Result};
use crate::gibbs::{GFunction, GibbsApproximation};
use crate::potential::{birkhoff_sum, Potential};
use crate::torus::{periodic_points, TorusPoint};
use serde::{Deserialize, Serialize};

/// ξ-image of a point of a marked rectangle (the base rectangle A₀ by
/// default): ξ₁ is the measure of the part of the rectangle strictly left
/// of the point's stable fiber, accumulated from future-cylinder strips;
/// ξ₂ the same below the unstable fiber from past strips. The strips
/// straddling the point are unresolved at this depth and contribute their
/// weight to error_radius instead.
#[derive(Debug, Clone)]
pub struct ChartImage {
    pub xi1: f64,
    pub xi2: f64,
    pub source_point: TorusPoint,
    pub depth: usize,
    pub error_radius: f64,
}

/// Cumulative-mass tables over one rectangle: one strip per depth-m future
/// word starting at that symbol (u direction) and per past word ending
/// there (s direction). Building the tables scans the stored words once;
/// evaluation is then cheap enough for dense sampling. Charts on the other
/// rectangles compose with the base chart exactly as the atlas does, which
/// is how the derivative quotient is measured across a map step.
#[derive(Debug, Clone)]
pub struct XiChart {
    symbol: usize,
    depth: usize,
    u_strips: Vec<(f64, f64, f64)>,
    s_strips: Vec<(f64, f64, f64)>,
}

impl XiChart {
    /// Chart on the base rectangle A₀.
    pub fn new(g: &GibbsApproximation, coding: &MarkovCoding) -> Result<XiChart> {
        XiChart::for_symbol(g, coding, coding.zero_symbol)
    }

    /// Chart on the rectangle of `symbol`.
    pub fn for_symbol(
        g: &GibbsApproximation,
        coding: &MarkovCoding,
        symbol: usize,
    ) -> Result<XiChart> {
        if symbol >= coding.alphabet_size() {
            return Err(Error::InvalidInput(format!("no rectangle {symbol}")));
        }
        let sym = symbol as u16;
        let mut u_strips = Vec::new();
        let mut s_strips = Vec::new();
        for (w, &wt) in g.words.iter().zip(g.weights.iter()) {
            if w[0] == sym {
                let b = coding.decode_box(&Word::future(w.clone()))?;
                u_strips.push((b.u0, b.u1(), wt));
            }
            if *w.last().unwrap() == sym {
                let b = coding.decode_box(&Word {
                    symbols: w.clone(),
                    offset: w.len() - 1,
                })?;
                s_strips.push((b.s0, b.s1(), wt));
            }
        }
        if u_strips.is_empty() || s_strips.is_empty() {
            return Err(Error::ConstructionFailed(
                "no cylinders meet the rectangle".into(),
            ));
        }
        u_strips.sort_by(|a, b| a.0.total_cmp(&b.0));
        s_strips.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(XiChart {
            symbol,
            depth: g.depth,
            u_strips,
            s_strips,
        })
    }

    pub fn eval(&self, coding: &MarkovCoding, x: TorusPoint) -> Result<ChartImage> {
        let xf = x.to_float();
        let uv = coding
            .locate_in_box(xf, self.symbol, 1e-9)
            .ok_or(Error::OutsideA0)?;
        let (xi1, err_u) = cumulate(&self.u_strips, uv[0]);
        let (xi2, err_s) = cumulate(&self.s_strips, uv[1]);
        Ok(ChartImage {
            xi1,
            xi2,
            source_point: x,
            depth: self.depth,
            error_radius: err_u + err_s,
        })
    }

    /// Total mass of the u-strip table: the measure of the chart rectangle.
    pub fn total_mass(&self) -> f64 {
        self.u_strips.iter().map(|s| s.2).sum()
    }
}

fn cumulate(strips: &[(f64, f64, f64)], coord: f64) -> (f64, f64) {
    let mut cum = 0.0;
    let mut straddle = 0.0;
    for &(lo, hi, m) in strips {
        if hi <= coord {
            cum += m;
        } else if lo < coord {
            straddle += m;
        }
    }
    (cum, straddle)
}

/// One-shot ξ evaluation; builds the chart tables for a single point. Use
/// [`XiChart`] directly when evaluating many points.
pub fn xi(g: &GibbsApproximation, coding: &MarkovCoding, x: TorusPoint) -> Result<ChartImage> {
    XiChart::new(g, coding)?.eval(coding, x)
}

/// Unstable derivative of the map in the measure coordinates: 1/g at the
/// point's future word. Exact at cylinder resolution, which is why the
/// derivative is defined through g and not by differentiating ξ. The value
/// carries the chart normalization of the source and image rectangles, a
/// multiplicative coboundary: products around periodic codes and over
/// return words to one rectangle are chart-free, and their geometric means
/// recover the expansion factor.
pub fn unstable_derivative_new_charts(
    coding: &MarkovCoding,
    gf: &GFunction,
    x: TorusPoint,
) -> Result<f64> {
    let words = coding.encode_window(x, 0, gf.depth - 1);
    if words.len() != 1 {
        return Err(Error::BoundaryCode);
    }
    let v = gf
        .eval(&words[0].symbols)
        .ok_or_else(|| Error::ConstructionFailed("encoded word missing from g-function".into()))?;
    Ok(1.0 / v)
}

/// Livšic boundedness certificate per excursion length, and the overall
/// bound M: |D_uLⁿ|·e^{S_nφ} must stay in [1/M, M] over all words that
/// start and end at the zero symbol.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LivsicReport {
    /// (n, M_n): worst two-sided bound over words [0 a₁ … a_{n-1} 0].
    pub per_order: Vec<(usize, f64)>,
    pub bound: f64,
}

/// Scans all admissible words [0 a₁ … a_{n-1} 0] with n ≤ n_max. The n-step
/// derivative in the new charts telescopes to ν(C₀)/ν(C_w), and the
/// Birkhoff sum follows the true orbit of the cylinder's center point. For
/// a Gibbs-tuned pair (the geometric potential, or any zero-pressure
/// potential cohomologous to -log of the derivative) the product cancels
/// to 1; the certificate reports how far it drifts.
pub fn livsic_bound_report(
    g: &GibbsApproximation,
    coding: &MarkovCoding,
    phi: &Potential,
    n_max: usize,
) -> Result<LivsicReport> {
    if n_max < 1 || n_max + 2 > g.depth {
        return Err(Error::InvalidInput(format!(
            "n_max must be in 1..={}",
            g.depth.saturating_sub(2)
        )));
    }
    let zero = coding.zero_symbol as u16;
    let base = g.cylinder_measure(&[zero]);
    if !(base > 0.0) {
        return Err(Error::ZeroMassCylinder);
    }
    let aut = coding.automorphism();
    let mut per_order = Vec::with_capacity(n_max);
    let mut bound = 1.0f64;
    for n in 1..=n_max {
        let mut m_n = 1.0f64;
        for w in coding.sft.admissible_words(n + 1) {
            if w[0] != zero || w[n] != zero {
                continue;
            }
            let mass = g.cylinder_measure(&w);
            if !(mass > 0.0) {
                return Err(Error::ZeroMassCylinder);
            }
            let x = coding.decode(&Word::future(w))?.center;
            let s = birkhoff_sum(phi, aut, x.into(), n);
            let log_prod = base.ln() - mass.ln() + s;
            m_n = m_n.max(log_prod.abs().exp());
        }
        bound = bound.max(m_n);
        per_order.push((n, m_n));
    }
    Ok(LivsicReport { per_order, bound })
}

/// Periodic-orbit obstruction audit for the cohomology between φ and
/// -log g: per-period and overall maxima of |Σ_orbit log(1/g) + S_nφ(x)|,
/// with boundary-coded points skipped and counted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub residual: f64,
    /// (period, max residual) over the points of that period that carried a
    /// unique code.
    pub per_period: Vec<(usize, f64)>,
    pub points_checked: usize,
    pub skipped_boundary_points: usize,
}

/// Livšic's periodic-orbit criterion, evaluated numerically: for
/// zero-pressure φ the sums Σ log(1/g) + S_nφ vanish over every periodic
/// orbit in the limit of infinite g-depth, and the residual must shrink as
/// the depth grows. Points on partition boundaries have ambiguous codes and
/// are skipped with an audit count.
pub fn cohomology_residual(
    coding: &MarkovCoding,
    gf: &GFunction,
    phi: &Potential,
    max_period: usize,
) -> Result<CohomologyReport> {
    if max_period < 1 || max_period > 12 {
        return Err(Error::InvalidInput("max_period must be in 1..=12".into()));
    }
    let aut = coding.automorphism();
    let m = gf.depth;
    let mut report = CohomologyReport {
        residual: 0.0,
        per_period: Vec::new(),
        points_checked: 0,
        skipped_boundary_points: 0,
    };
    for n in 1..=max_period {
        let mut worst: Option<f64> = None;
        for p in periodic_points(aut, n)? {
            let x = TorusPoint::Exact(p);
            let words = coding.encode_window(x, 0, n + m - 2);
            if words.len() != 1 {
                report.skipped_boundary_points += 1;
                continue;
            }
            let syms = &words[0].symbols;
            let mut log_g = 0.0;
            for j in 0..n {
                let v = gf
                    .eval(&syms[j..j + m])
                    .ok_or_else(|| Error::ConstructionFailed("window not in g-function".into()))?;
                log_g += v.ln();
            }
            let r = (birkhoff_sum(phi, aut, x, n) - log_g).abs();
            worst = Some(worst.map_or(r, |w: f64| w.max(r)));
            report.points_checked += 1;
        }
        if let Some(w) = worst {
            report.residual = report.residual.max(w);
            report.per_period.push((n, w));
        }
    }
    Ok(report)
}
