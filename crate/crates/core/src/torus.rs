//! Arithmetic on the 2-torus: hyperbolic automorphisms, their eigen-data,
//! periodic points, homoclinic points, the multiplication maps M_k, and the
//! bracket decomposition along stable/unstable directions.

use crate::error::{Error, Result};
use crate::util::{dist_to_integer, mod1};
use num::rational::Ratio;
use num::Zero;

pub type Rational = Ratio<i128>;

/// Point with floating coordinates; always kept in `[0,1)` on the torus.
pub type FloatPoint = [f64; 2];

/// Exact rational point with both coordinates reduced mod 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RatPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self {
            x: rat_mod1(x),
            y: rat_mod1(y),
        }
    }

    pub fn zero() -> Self {
        Self {
            x: Rational::zero(),
            y: Rational::zero(),
        }
    }

    pub fn from_ints(xn: i128, xd: i128, yn: i128, yd: i128) -> Self {
        Self::new(Rational::new(xn, xd), Rational::new(yn, yd))
    }

    pub fn to_float(self) -> FloatPoint {
        [rat_to_f64(self.x), rat_to_f64(self.y)]
    }
}

fn rat_mod1(r: Rational) -> Rational {
    let f = r.floor();
    r - f
}

fn rat_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A point given either exactly or in floating coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorusPoint {
    Exact(RatPoint),
    Float(FloatPoint),
}

impl TorusPoint {
    pub fn to_float(self) -> FloatPoint {
        match self {
            TorusPoint::Exact(p) => p.to_float(),
            TorusPoint::Float(p) => [mod1(p[0]), mod1(p[1])],
        }
    }

    pub fn as_exact(self) -> Option<RatPoint> {
        match self {
            TorusPoint::Exact(p) => Some(p),
            TorusPoint::Float(_) => None,
        }
    }
}

impl From<RatPoint> for TorusPoint {
    fn from(p: RatPoint) -> Self {
        TorusPoint::Exact(p)
    }
}

impl From<FloatPoint> for TorusPoint {
    fn from(p: FloatPoint) -> Self {
        TorusPoint::Float([mod1(p[0]), mod1(p[1])])
    }
}

/// Distance on the torus: Euclidean metric on the quotient. Coordinates wrap
/// independently, so the nearest lattice translate is found per coordinate.
pub fn torus_dist(a: FloatPoint, b: FloatPoint) -> f64 {
    let dx = dist_to_integer(a[0] - b[0]);
    let dy = dist_to_integer(a[1] - b[1]);
    dx.hypot(dy)
}

/// Hyperbolic automorphism of T² with cached eigen-data.
///
/// `lambda` is the modulus of the expanding eigenvalue; `eig_u` and `eig_s`
/// carry the signs (for the matrix [[1,1],[1,0]] the contracting eigenvalue
/// is negative). The frame (e_u, e_s) is unit-normalized and positively
/// oriented: det[e_u e_s] > 0.
#[derive(Debug, Clone, Copy)]
pub struct ToralAutomorphism {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub lambda: f64,
    pub eig_u: f64,
    pub eig_s: f64,
    pub e_u: [f64; 2],
    pub e_s: [f64; 2],
    pub det_sign: i64,
}

impl ToralAutomorphism {
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// Inverse matrix; integral because |det| = 1.
    pub fn inv_matrix(&self) -> [[i64; 2]; 2] {
        let s = self.det_sign;
        [[s * self.d, -s * self.b], [-s * self.c, s * self.a]]
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn apply_f(&self, p: FloatPoint) -> FloatPoint {
        [
            mod1(self.a as f64 * p[0] + self.b as f64 * p[1]),
            mod1(self.c as f64 * p[0] + self.d as f64 * p[1]),
        ]
    }

    pub fn apply_inv_f(&self, p: FloatPoint) -> FloatPoint {
        let m = self.inv_matrix();
        [
            mod1(m[0][0] as f64 * p[0] + m[0][1] as f64 * p[1]),
            mod1(m[1][0] as f64 * p[0] + m[1][1] as f64 * p[1]),
        ]
    }

    /// Apply the matrix to a lift in the plane (no reduction mod 1).
    pub fn apply_lift(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.a as f64 * p[0] + self.b as f64 * p[1],
            self.c as f64 * p[0] + self.d as f64 * p[1],
        ]
    }

    pub fn apply_rat(&self, p: RatPoint) -> RatPoint {
        RatPoint::new(
            p.x * Rational::from_integer(self.a as i128)
                + p.y * Rational::from_integer(self.b as i128),
            p.x * Rational::from_integer(self.c as i128)
                + p.y * Rational::from_integer(self.d as i128),
        )
    }

    pub fn apply_inv_rat(&self, p: RatPoint) -> RatPoint {
        let m = self.inv_matrix();
        RatPoint::new(
            p.x * Rational::from_integer(m[0][0] as i128)
                + p.y * Rational::from_integer(m[0][1] as i128),
            p.x * Rational::from_integer(m[1][0] as i128)
                + p.y * Rational::from_integer(m[1][1] as i128),
        )
    }

    /// Integer power Aⁿ in i128 arithmetic. Errors if entries overflow.
    pub fn pow_matrix(&self, n: usize) -> Result<[[i128; 2]; 2]> {
        let mut acc = [[1i128, 0], [0, 1]];
        let base = [
            [self.a as i128, self.b as i128],
            [self.c as i128, self.d as i128],
        ];
        for _ in 0..n {
            acc = mat_mul_checked(acc, base)
                .ok_or_else(|| Error::InvalidInput(format!("matrix power {n} overflows")))?;
        }
        Ok(acc)
    }

    /// Trace of Aⁿ; with |det| = 1 this drives the exact fixed-point counts.
    pub fn trace_pow(&self, n: usize) -> Result<i128> {
        let m = self.pow_matrix(n)?;
        Ok(m[0][0] + m[1][1])
    }
}

fn mat_mul_checked(a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> Option<[[i128; 2]; 2]> {
    let mut out = [[0i128; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let p1 = a[i][0].checked_mul(b[0][j])?;
            let p2 = a[i][1].checked_mul(b[1][j])?;
            out[i][j] = p1.checked_add(p2)?;
        }
    }
    Some(out)
}

/// Build the eigen-data for an integer matrix, rejecting non-unimodular and
/// non-hyperbolic input. Hyperbolicity is decided exactly on the integers:
/// an eigenvalue of modulus one exists iff det = 1 and |trace| <= 2, or
/// det = -1 and trace = 0.
pub fn eigen_data(m: [[i64; 2]; 2]) -> Result<ToralAutomorphism> {
    let [[a, b], [c, d]] = m;
    let det = a * d - b * c;
    if det.abs() != 1 {
        return Err(Error::NonUnimodular(det));
    }
    let tr = a + d;
    if (det == 1 && tr.abs() <= 2) || (det == -1 && tr == 0) {
        return Err(Error::NonHyperbolic);
    }

    let trf = tr as f64;
    let detf = det as f64;
    let disc = (trf * trf - 4.0 * detf).sqrt();
    // Root of larger modulus: add the square root on the side of the trace.
    let mut eig_u = if trf >= 0.0 {
        (trf + disc) / 2.0
    } else {
        (trf - disc) / 2.0
    };
    // One Newton polish on the characteristic polynomial tightens the root to
    // full double precision.
    for _ in 0..2 {
        let p = eig_u * eig_u - trf * eig_u + detf;
        let dp = 2.0 * eig_u - trf;
        eig_u -= p / dp;
    }
    let eig_s = detf / eig_u;
    let lambda = eig_u.abs();

    let e_u = eigenvector(a as f64, b as f64, c as f64, d as f64, eig_u);
    let mut e_s = eigenvector(a as f64, b as f64, c as f64, d as f64, eig_s);
    if e_u[0] * e_s[1] - e_u[1] * e_s[0] < 0.0 {
        e_s = [-e_s[0], -e_s[1]];
    }

    let aut = ToralAutomorphism {
        a,
        b,
        c,
        d,
        lambda,
        eig_u,
        eig_s,
        e_u,
        e_s,
        det_sign: det,
    };
    for (v, eig) in [(e_u, eig_u), (e_s, eig_s)] {
        let w = aut.apply_lift(v);
        let res = ((w[0] - eig * v[0]).powi(2) + (w[1] - eig * v[1]).powi(2)).sqrt();
        if res > 1e-12 {
            return Err(Error::ConstructionFailed(format!(
                "eigenvector residual {res:.3e} exceeds 1e-12"
            )));
        }
    }
    Ok(aut)
}

/// Unit eigenvector for eigenvalue `eig`, sign-fixed so the first coordinate
/// is positive (or the second, when the first vanishes).
fn eigenvector(a: f64, b: f64, c: f64, d: f64, eig: f64) -> [f64; 2] {
    // (A - eig I) v = 0. Use the row with the larger off-diagonal entry.
    let mut v = if b.abs() >= c.abs() && b != 0.0 {
        [b, eig - a]
    } else {
        [eig - d, c]
    };
    let norm = v[0].hypot(v[1]);
    v = [v[0] / norm, v[1] / norm];
    if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) {
        v = [-v[0], -v[1]];
    }
    v
}

/// All exact solutions of (Aⁿ - I)x ∈ Z² mod 1, via Smith reduction of the
/// integer matrix B = Aⁿ - I. Writing LBR = diag(d₁,d₂) with L,R unimodular,
/// the solutions are x = R(k₁/d₁, k₂/d₂) mod 1. Count = |det B|.
pub fn periodic_points(aut: &ToralAutomorphism, n: usize) -> Result<Vec<RatPoint>> {
    if n == 0 {
        return Err(Error::InvalidInput("period must be >= 1".into()));
    }
    let p = aut.pow_matrix(n)?;
    let b = [[p[0][0] - 1, p[0][1]], [p[1][0], p[1][1] - 1]];
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    if det == 0 {
        return Err(Error::DegeneratePeriod(n));
    }
    let (r, d1, d2) = smith_right(b);
    let mut points = Vec::with_capacity(det.unsigned_abs() as usize);
    for k1 in 0..d1.abs() {
        for k2 in 0..d2.abs() {
            let z = [Rational::new(k1, d1), Rational::new(k2, d2)];
            points.push(RatPoint::new(
                z[0] * Rational::from_integer(r[0][0]) + z[1] * Rational::from_integer(r[0][1]),
                z[0] * Rational::from_integer(r[1][0]) + z[1] * Rational::from_integer(r[1][1]),
            ));
        }
    }
    points.sort();
    points.dedup();
    if points.len() as i128 != det.abs() {
        return Err(Error::ConstructionFailed(format!(
            "period-{n} enumeration produced {} points, determinant says {}",
            points.len(),
            det.abs()
        )));
    }
    Ok(points)
}

/// Diagonalize B by unimodular row/column operations, tracking only the
/// accumulated column transform R (rows act on the left and drop out of the
/// solution formula).
fn smith_right(mut b: [[i128; 2]; 2]) -> ([[i128; 2]; 2], i128, i128) {
    let mut r = [[1i128, 0], [0, 1]];
    loop {
        if b[0][0] == 0 {
            if b[0][1] != 0 {
                swap_cols(&mut b, &mut r);
            } else {
                // First row zero: swap rows (untracked).
                b.swap(0, 1);
            }
            continue;
        }
        if b[0][1] != 0 {
            let q = b[0][1] / b[0][0];
            col_sub(&mut b, &mut r, q);
            if b[0][1] != 0 {
                swap_cols(&mut b, &mut r);
            }
            continue;
        }
        if b[1][0] != 0 {
            let q = b[1][0] / b[0][0];
            row_sub(&mut b, q);
            if b[1][0] != 0 {
                b.swap(0, 1);
            }
            continue;
        }
        break;
    }
    (r, b[0][0], b[1][1])
}

fn swap_cols(b: &mut [[i128; 2]; 2], r: &mut [[i128; 2]; 2]) {
    for row in b.iter_mut() {
        row.swap(0, 1);
    }
    for row in r.iter_mut() {
        row.swap(0, 1);
    }
}

/// Column 1 -= q * column 0 on both B and R.
fn col_sub(b: &mut [[i128; 2]; 2], r: &mut [[i128; 2]; 2], q: i128) {
    for row in b.iter_mut() {
        row[1] -= q * row[0];
    }
    for row in r.iter_mut() {
        row[1] -= q * row[0];
    }
}

/// Row 1 -= q * row 0 on B only.
fn row_sub(b: &mut [[i128; 2]; 2], q: i128) {
    for j in 0..2 {
        b[1][j] -= q * b[0][j];
    }
}

/// Point homoclinic to the fixed point 0: the intersection, mod 1, of the
/// unstable line through 0 with a lattice translate of the stable line.
/// Writing coeff_u·e_u - coeff_s·e_s = n, the point is coeff_u·e_u mod 1,
/// its forward iterates contract along e_s with coefficient coeff_s·eig_sᵏ
/// and its backward iterates along e_u with coeff_u·eig_u⁻ᵏ.
#[derive(Debug, Clone, Copy)]
pub struct HomoclinicVector {
    pub v: TorusPoint,
    pub lattice_index: [i64; 2],
    pub decay_constant: f64,
    pub coeff_u: f64,
    pub coeff_s: f64,
}

impl HomoclinicVector {
    pub fn point(&self) -> FloatPoint {
        self.v.to_float()
    }
}

/// Enumerate homoclinic points for all lattice indices with sup-norm at most
/// `lattice_bound`, each with its decay constant verified for |k| <= 30.
pub fn homoclinic_points(
    aut: &ToralAutomorphism,
    lattice_bound: i64,
) -> Result<Vec<HomoclinicVector>> {
    if lattice_bound < 1 {
        return Err(Error::InvalidInput("lattice bound must be >= 1".into()));
    }
    let mut out = Vec::new();
    for n1 in -lattice_bound..=lattice_bound {
        for n2 in -lattice_bound..=lattice_bound {
            let hv = homoclinic_from_index(aut, [n1, n2])?;
            out.push(hv);
        }
    }
    Ok(out)
}

/// Solve coeff_u·e_u - coeff_s·e_s = n and package the homoclinic point.
pub fn homoclinic_from_index(
    aut: &ToralAutomorphism,
    n: [i64; 2],
) -> Result<HomoclinicVector> {
    let (cu, cs) = solve_eigenbasis(aut, [n[0] as f64, n[1] as f64]);
    build_homoclinic(aut, n, cu, cs)
}

/// Coordinates (alpha, beta) with alpha·e_u - beta·e_s = w.
fn solve_eigenbasis(aut: &ToralAutomorphism, w: [f64; 2]) -> (f64, f64) {
    let m = [
        [aut.e_u[0], -aut.e_s[0]],
        [aut.e_u[1], -aut.e_s[1]],
    ];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let alpha = (w[0] * m[1][1] - w[1] * m[0][1]) / det;
    let beta = (m[0][0] * w[1] - m[1][0] * w[0]) / det;
    (alpha, beta)
}

fn build_homoclinic(
    aut: &ToralAutomorphism,
    n: [i64; 2],
    coeff_u: f64,
    coeff_s: f64,
) -> Result<HomoclinicVector> {
    let lift = [coeff_u * aut.e_u[0], coeff_u * aut.e_u[1]];
    let v = [mod1(lift[0]), mod1(lift[1])];
    let c1 = coeff_u.abs().max(coeff_s.abs());
    verify_decay(aut, v, c1)?;
    Ok(HomoclinicVector {
        v: TorusPoint::Float(v),
        lattice_index: n,
        decay_constant: c1,
        coeff_u,
        coeff_s,
    })
}

/// Check d(Lᵏv, 0) <= C₁ λ^{-|k|} for |k| <= 30 by direct iteration.
fn verify_decay(aut: &ToralAutomorphism, v: FloatPoint, c1: f64) -> Result<()> {
    let origin = [0.0, 0.0];
    let slack = 1e-7;
    let mut fwd = v;
    let mut bwd = v;
    for k in 0..=30u32 {
        let bound = c1 * aut.lambda.powi(-(k as i32)) + slack;
        if torus_dist(fwd, origin) > bound || torus_dist(bwd, origin) > bound {
            return Err(Error::ConstructionFailed(format!(
                "homoclinic decay violated at |k| = {k}"
            )));
        }
        fwd = aut.apply_f(fwd);
        bwd = aut.apply_inv_f(bwd);
    }
    Ok(())
}

/// The multiplication map M_k(x) = kx mod 1, exact on rational points.
pub fn mul_k(p: TorusPoint, k: u32) -> TorusPoint {
    match p {
        TorusPoint::Exact(q) => {
            let kk = Rational::from_integer(k as i128);
            TorusPoint::Exact(RatPoint::new(q.x * kk, q.y * kk))
        }
        TorusPoint::Float(q) => TorusPoint::Float([mod1(k as f64 * q[0]), mod1(k as f64 * q[1])]),
    }
}

/// Split a homoclinic point w into u + v = w mod 1 with v on the unstable
/// line through 0 and u on the stable line through 0, both homoclinic.
/// Expansion of the small lift w̃ = alpha·e_u + beta·e_s gives
/// v = alpha·e_u mod 1 and u = beta·e_s mod 1.
pub fn bracket_decompose(
    w: &HomoclinicVector,
    aut: &ToralAutomorphism,
) -> Result<(HomoclinicVector, HomoclinicVector)> {
    let wf = w.point();
    // Small lift with both coordinates in [-1/2, 1/2].
    let lift = [wf[0] - wf[0].round_ties_even(), wf[1] - wf[1].round_ties_even()];
    // alpha·e_u + beta·e_s = lift, so against the solver's sign convention
    // beta enters negated.
    let (alpha, neg_beta) = solve_eigenbasis(aut, lift);
    let beta = -neg_beta;

    // Lattice index of the lift used for w's unstable coordinate:
    // coeff_u·e_u - lift = p ∈ Z².
    let p = [
        (w.coeff_u * aut.e_u[0] - lift[0]).round(),
        (w.coeff_u * aut.e_u[1] - lift[1]).round(),
    ];
    let int_res = (w.coeff_u * aut.e_u[0] - lift[0] - p[0])
        .abs()
        .max((w.coeff_u * aut.e_u[1] - lift[1] - p[1]).abs());
    if int_res > 1e-9 {
        return Err(Error::ConstructionFailed(format!(
            "bracket lift is {int_res:.3e} from the lattice"
        )));
    }

    // v: alpha·e_u - (coeff_s - beta)·e_s = n - p.
    let v = build_homoclinic(
        aut,
        [
            w.lattice_index[0] - p[0] as i64,
            w.lattice_index[1] - p[1] as i64,
        ],
        alpha,
        w.coeff_s - beta,
    )?;
    // u: (coeff_u - alpha)·e_u - beta·e_s = p; its point is beta·e_s mod 1.
    let u_point = [mod1(beta * aut.e_s[0]), mod1(beta * aut.e_s[1])];
    let mut u = build_homoclinic(aut, [p[0] as i64, p[1] as i64], w.coeff_u - alpha, beta)?;
    debug_assert!(torus_dist(u.point(), u_point) < 1e-9);
    u.v = TorusPoint::Float(u_point);
    Ok((u, v))
}
