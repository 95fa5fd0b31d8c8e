//! Potentials on T² as trigonometric polynomials: evaluation, Birkhoff sums,
//! exact pullback under the multiplication maps, and the homoclinic
//! Radon-Nikodym cocycle with a certified truncation tail.

use crate::torus::{FloatPoint, HomoclinicVector, ToralAutomorphism, TorusPoint};
use crate::util::CompensatedSum;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// One frequency: cos_coeff·cos(2π m·x) + sin_coeff·sin(2π m·x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialTerm {
    pub m: [i64; 2],
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// Real-valued trigonometric polynomial on the torus. Lipschitz with
/// constant `lipschitz_bound`, hence Hölder with exponent 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Potential {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub terms: Vec<PotentialTerm>,
}

impl Potential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            terms: Vec::new(),
        }
    }

    /// amplitude·cos(2π m·x)
    pub fn cosine(m: [i64; 2], amplitude: f64) -> Self {
        Self {
            constant: 0.0,
            terms: vec![PotentialTerm {
                m,
                cos: amplitude,
                sin: 0.0,
            }],
        }
    }

    pub fn eval_f(&self, x: FloatPoint) -> f64 {
        let mut acc = self.constant;
        for t in &self.terms {
            let phase = TAU * (t.m[0] as f64 * x[0] + t.m[1] as f64 * x[1]);
            acc += t.cos * phase.cos() + t.sin * phase.sin();
        }
        acc
    }

    pub fn eval(&self, x: TorusPoint) -> f64 {
        self.eval_f(x.to_float())
    }

    /// Σ 2π‖m‖₂(|cos| + |sin|); bounds the gradient norm, so it is a
    /// Lipschitz constant for the quotient Euclidean metric.
    pub fn lipschitz_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let norm = ((t.m[0] * t.m[0] + t.m[1] * t.m[1]) as f64).sqrt();
                TAU * norm * (t.cos.abs() + t.sin.abs())
            })
            .sum()
    }

    /// Pullback under M_k: frequencies scale exactly, so
    /// eval(compose_mul_k(φ,k), x) = eval(φ, kx mod 1) identically.
    pub fn compose_mul_k(&self, k: u32) -> Potential {
        Potential {
            constant: self.constant,
            terms: self
                .terms
                .iter()
                .map(|t| PotentialTerm {
                    m: [t.m[0] * k as i64, t.m[1] * k as i64],
                    cos: t.cos,
                    sin: t.sin,
                })
                .collect(),
        }
    }

    /// Add a constant in place; used to shift potentials to zero pressure.
    pub fn shifted(&self, c: f64) -> Potential {
        Potential {
            constant: self.constant + c,
            terms: self.terms.clone(),
        }
    }

    pub fn scaled(&self, t: f64) -> Potential {
        Potential {
            constant: t * self.constant,
            terms: self
                .terms
                .iter()
                .map(|term| PotentialTerm {
                    m: term.m,
                    cos: t * term.cos,
                    sin: t * term.sin,
                })
                .collect(),
        }
    }
}

impl std::fmt::Display for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.constant)?;
        for t in &self.terms {
            if t.cos != 0.0 {
                write!(f, " + {}*cos(2pi<{},{}>)", t.cos, t.m[0], t.m[1])?;
            }
            if t.sin != 0.0 {
                write!(f, " + {}*sin(2pi<{},{}>)", t.sin, t.m[0], t.m[1])?;
            }
        }
        Ok(())
    }
}

/// Hölder/expansion constants attached to one homoclinic vector: c3 and
/// alpha describe the potential, c1 the vector's decay, c2 the distortion of
/// the eigenframe (1 when the frame is orthogonal).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HolderData {
    pub c3: f64,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
}

impl HolderData {
    pub fn new(phi: &Potential, aut: &ToralAutomorphism, v: &HomoclinicVector) -> Self {
        let g = aut.e_u[0] * aut.e_s[0] + aut.e_u[1] * aut.e_s[1];
        let c2 = ((1.0 + g.abs()) / (1.0 - g.abs())).sqrt();
        HolderData {
            c3: phi.lipschitz_bound(),
            alpha: 1.0,
            c1: v.decay_constant,
            c2,
        }
    }
}

/// S_nφ(x) = Σ_{k<n} φ(Lᵏx). Exact points iterate in rational arithmetic so
/// long orbits do not drift.
pub fn birkhoff_sum(phi: &Potential, aut: &ToralAutomorphism, x: TorusPoint, n: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    match x {
        TorusPoint::Exact(p) => {
            let mut q = p;
            for _ in 0..n {
                acc.add(phi.eval_f(q.to_float()));
                q = aut.apply_rat(q);
            }
        }
        TorusPoint::Float(p) => {
            let mut q = [crate::util::mod1(p[0]), crate::util::mod1(p[1])];
            for _ in 0..n {
                acc.add(phi.eval_f(q));
                q = aut.apply_f(q);
            }
        }
    }
    acc.value()
}

/// Truncated Radon-Nikodym cocycle
/// θ_v(x) = exp Σ_{|k| ≤ N} [φ(Lᵏ(x+v)) − φ(Lᵏx)],
/// returned with the geometric tail bound 2·C₃·C₁^α·λ^{−Nα}/(1−λ^{−α}) on
/// the omitted log-terms.
///
/// The displacement Lᵏ(x+v) − Lᵏx is evaluated in closed form through the
/// eigen-coordinates of v: the stable lift for k ≥ 0 and the unstable lift
/// for k < 0, both of which contract. Differencing two evaluations at the
/// same base point keeps the summands accurate even where the orbit itself
/// carries rounding noise.
pub fn rn_cocycle(
    phi: &Potential,
    aut: &ToralAutomorphism,
    v: &HomoclinicVector,
    x: FloatPoint,
    truncation: usize,
) -> (f64, f64) {
    let n = truncation.max(1) as i32;
    let mut log_sum = CompensatedSum::new();

    // k = 0, 1, ..., N with stable displacement coeff_s·eig_sᵏ·e_s.
    let mut y = [crate::util::mod1(x[0]), crate::util::mod1(x[1])];
    let mut ds = v.coeff_s;
    for _ in 0..=n {
        let shifted = [y[0] + ds * aut.e_s[0], y[1] + ds * aut.e_s[1]];
        log_sum.add(phi.eval_f(shifted) - phi.eval_f(y));
        y = aut.apply_f(y);
        ds *= aut.eig_s;
    }

    // k = -1, -2, ..., -N with unstable displacement coeff_u·eig_uᵏ·e_u.
    let mut y = [crate::util::mod1(x[0]), crate::util::mod1(x[1])];
    let mut du = v.coeff_u;
    for _ in 1..=n {
        y = aut.apply_inv_f(y);
        du /= aut.eig_u;
        let shifted = [y[0] + du * aut.e_u[0], y[1] + du * aut.e_u[1]];
        log_sum.add(phi.eval_f(shifted) - phi.eval_f(y));
    }

    let c3 = phi.lipschitz_bound();
    let c1 = v.decay_constant;
    let lam = aut.lambda;
    let tail = 2.0 * c3 * c1 * lam.powi(-n) / (1.0 - 1.0 / lam);
    (log_sum.value().exp(), tail)
}
