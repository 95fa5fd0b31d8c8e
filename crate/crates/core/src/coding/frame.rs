//! Eigen-coordinates: the plane is charted by (u, s) with
//! p = u·e_u + s·e_s, where L acts diagonally as (u, s) ↦ (eig_u·u, eig_s·s).
//! Partition rectangles are axis boxes in these coordinates.

use crate::torus::{FloatPoint, ToralAutomorphism};
use crate::util::mod1;

#[derive(Debug, Clone, Copy)]
pub struct EigenFrame {
    pub e_u: [f64; 2],
    pub e_s: [f64; 2],
    /// Rows of E⁻¹ where E = [e_u e_s].
    inv: [[f64; 2]; 2],
    /// det E; sign depends on the eigenvector normalization.
    pub det: f64,
}

impl EigenFrame {
    pub fn new(aut: &ToralAutomorphism) -> Self {
        let e_u = aut.e_u;
        let e_s = aut.e_s;
        let det = e_u[0] * e_s[1] - e_u[1] * e_s[0];
        let inv = [
            [e_s[1] / det, -e_s[0] / det],
            [-e_u[1] / det, e_u[0] / det],
        ];
        EigenFrame { e_u, e_s, inv, det }
    }

    pub fn to_frame(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.inv[0][0] * p[0] + self.inv[0][1] * p[1],
            self.inv[1][0] * p[0] + self.inv[1][1] * p[1],
        ]
    }

    pub fn to_plane(&self, uv: [f64; 2]) -> [f64; 2] {
        [
            uv[0] * self.e_u[0] + uv[1] * self.e_s[0],
            uv[0] * self.e_u[1] + uv[1] * self.e_s[1],
        ]
    }

    pub fn to_torus(&self, uv: [f64; 2]) -> FloatPoint {
        let p = self.to_plane(uv);
        [mod1(p[0]), mod1(p[1])]
    }

    /// Frame coordinates of every integer lattice vector landing inside
    /// [u_lo, u_hi] × [s_lo, s_hi] (inflated by tol), in lattice order.
    /// These are the candidate translates for torus intersections.
    pub fn offsets_within(
        &self,
        u_lo: f64,
        u_hi: f64,
        s_lo: f64,
        s_hi: f64,
        tol: f64,
    ) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        if u_hi < u_lo || s_hi < s_lo {
            return out;
        }
        let corners = [
            self.to_plane([u_lo, s_lo]),
            self.to_plane([u_lo, s_hi]),
            self.to_plane([u_hi, s_lo]),
            self.to_plane([u_hi, s_hi]),
        ];
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for c in corners {
            x0 = x0.min(c[0]);
            x1 = x1.max(c[0]);
            y0 = y0.min(c[1]);
            y1 = y1.max(c[1]);
        }
        for n1 in (x0.floor() as i64 - 1)..=(x1.ceil() as i64 + 1) {
            for n2 in (y0.floor() as i64 - 1)..=(y1.ceil() as i64 + 1) {
                let w = self.to_frame([n1 as f64, n2 as f64]);
                if w[0] >= u_lo - tol && w[0] <= u_hi + tol && w[1] >= s_lo - tol && w[1] <= s_hi + tol
                {
                    out.push(w);
                }
            }
        }
        out
    }
}

/// Axis-aligned box in frame coordinates; one particular lift of a torus
/// parallelogram whose torus projection is injective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxUv {
    pub u0: f64,
    pub s0: f64,
    pub du: f64,
    pub ds: f64,
}

impl BoxUv {
    pub fn u1(&self) -> f64 {
        self.u0 + self.du
    }

    pub fn s1(&self) -> f64 {
        self.s0 + self.ds
    }

    pub fn center(&self) -> [f64; 2] {
        [self.u0 + self.du / 2.0, self.s0 + self.ds / 2.0]
    }

    pub fn area(&self, frame: &EigenFrame) -> f64 {
        self.du * self.ds * frame.det.abs()
    }

    /// Longest diagonal of the parallelogram spanned by du·e_u and ds·e_s.
    pub fn diameter(&self, frame: &EigenFrame) -> f64 {
        let a = [
            self.du * frame.e_u[0] + self.ds * frame.e_s[0],
            self.du * frame.e_u[1] + self.ds * frame.e_s[1],
        ];
        let b = [
            self.du * frame.e_u[0] - self.ds * frame.e_s[0],
            self.du * frame.e_u[1] - self.ds * frame.e_s[1],
        ];
        a[0].hypot(a[1]).max(b[0].hypot(b[1]))
    }

    /// Image under L in frame coordinates: both axes scale by the signed
    /// eigenvalues, so intervals may flip.
    pub fn image(&self, eig_u: f64, eig_s: f64) -> BoxUv {
        let (u0, du) = scale_interval(self.u0, self.du, eig_u);
        let (s0, ds) = scale_interval(self.s0, self.ds, eig_s);
        BoxUv { u0, s0, du, ds }
    }

    pub fn translated(&self, off: [f64; 2]) -> BoxUv {
        BoxUv {
            u0: self.u0 + off[0],
            s0: self.s0 + off[1],
            du: self.du,
            ds: self.ds,
        }
    }

    pub fn contains(&self, uv: [f64; 2], tol: f64) -> bool {
        uv[0] >= self.u0 - tol
            && uv[0] <= self.u1() + tol
            && uv[1] >= self.s0 - tol
            && uv[1] <= self.s1() + tol
    }

    pub fn intersect(&self, other: &BoxUv) -> Option<BoxUv> {
        let u0 = self.u0.max(other.u0);
        let u1 = self.u1().min(other.u1());
        let s0 = self.s0.max(other.s0);
        let s1 = self.s1().min(other.s1());
        if u1 > u0 && s1 > s0 {
            Some(BoxUv {
                u0,
                s0,
                du: u1 - u0,
                ds: s1 - s0,
            })
        } else {
            None
        }
    }
}

fn scale_interval(start: f64, len: f64, factor: f64) -> (f64, f64) {
    if factor >= 0.0 {
        (start * factor, len * factor)
    } else {
        ((start + len) * factor, len * -factor)
    }
}
