//! Base partition construction: two segments through the origin, one along
//! each eigendirection, whose torus projection cuts T² into parallelogram
//! faces. Segment endpoints must land on the other segment (T-junctions) and
//! the parameter intervals must be invariant under the action of L on their
//! lines; both conditions restrict endpoints to homoclinic intersections.

use super::frame::{BoxUv, EigenFrame};
use crate::error::{Error, Result};
use crate::torus::ToralAutomorphism;

const TOL: f64 = 1e-9;

/// Intersection of the unstable and stable lines through 0 (mod 1): the
/// point with unstable parameter `cu` and stable parameter `cs`, satisfying
/// cu·e_u - cs·e_s = n.
#[derive(Debug, Clone, Copy)]
struct Junction {
    cu: f64,
    cs: f64,
}

fn junctions(frame: &EigenFrame, bound: i64) -> Vec<Junction> {
    let mut out = Vec::new();
    for n1 in -bound..=bound {
        for n2 in -bound..=bound {
            let uv = frame.to_frame([n1 as f64, n2 as f64]);
            out.push(Junction {
                cu: uv[0],
                cs: -uv[1],
            });
        }
    }
    out
}

/// One candidate segment configuration: U = {t·e_u : t ∈ [t_lo, t_hi]},
/// S = {s·e_s : s ∈ [s_lo, s_hi]}, together with the traced faces.
#[derive(Debug, Clone)]
pub struct BaseConfig {
    pub t_lo: f64,
    pub t_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub boxes: Vec<BoxUv>,
}

impl BaseConfig {
    fn total_len(&self) -> f64 {
        (self.t_hi - self.t_lo) + (self.s_hi - self.s_lo)
    }
}

/// Enumerate valid segment configurations, shortest first. Each returned
/// config has parallelogram faces of total area 1; the Markov crossing
/// structure is checked later, after refinement.
pub fn search_base_configs(aut: &ToralAutomorphism, frame: &EigenFrame) -> Result<Vec<BaseConfig>> {
    let cands = junctions(frame, 3);
    let mut t_his: Vec<&Junction> = cands.iter().filter(|j| j.cu > TOL).collect();
    let mut t_los: Vec<Option<&Junction>> =
        cands.iter().filter(|j| j.cu < -TOL).map(Some).collect();
    t_los.push(None);
    let mut s_his: Vec<Option<&Junction>> =
        cands.iter().filter(|j| j.cs > TOL).map(Some).collect();
    s_his.push(None);
    let mut s_los: Vec<Option<&Junction>> =
        cands.iter().filter(|j| j.cs < -TOL).map(Some).collect();
    s_los.push(None);
    // Deterministic enumeration order.
    t_his.sort_by(|a, b| a.cu.total_cmp(&b.cu));
    t_los.sort_by(|a, b| key(a, |j| -j.cu).total_cmp(&key(b, |j| -j.cu)));
    s_his.sort_by(|a, b| key(a, |j| j.cs).total_cmp(&key(b, |j| j.cs)));
    s_los.sort_by(|a, b| key(a, |j| -j.cs).total_cmp(&key(b, |j| -j.cs)));

    let mut configs = Vec::new();
    for t_hi in &t_his {
        for t_lo in &t_los {
            for s_hi in &s_his {
                for s_lo in &s_los {
                    if let Some(cfg) = try_config(aut, frame, t_hi, *t_lo, *s_hi, *s_lo) {
                        configs.push(cfg);
                    }
                }
            }
        }
    }
    if configs.is_empty() {
        return Err(Error::ConstructionFailed(
            "no valid two-segment base configuration found".into(),
        ));
    }
    configs.sort_by(|a, b| a.total_len().total_cmp(&b.total_len()));
    Ok(configs)
}

fn key(j: &Option<&Junction>, f: impl Fn(&Junction) -> f64) -> f64 {
    j.map(f).unwrap_or(0.0)
}

fn try_config(
    aut: &ToralAutomorphism,
    frame: &EigenFrame,
    t_hi: &Junction,
    t_lo: Option<&Junction>,
    s_hi: Option<&Junction>,
    s_lo: Option<&Junction>,
) -> Option<BaseConfig> {
    let t1 = t_hi.cu;
    let t0 = t_lo.map(|j| j.cu).unwrap_or(0.0);
    let s1 = s_hi.map(|j| j.cs).unwrap_or(0.0);
    let s0 = s_lo.map(|j| j.cs).unwrap_or(0.0);
    if t1 - t0 < TOL || s1 - s0 < TOL {
        return None;
    }
    if s_hi.is_none() && s_lo.is_none() {
        return None;
    }

    // Origin degree >= 3: a degree-2 corner leaves a reflex face.
    let deg = (t1 > TOL) as u32
        + (t0 < -TOL) as u32
        + (s1 > TOL) as u32
        + (s0 < -TOL) as u32;
    if deg < 3 {
        return None;
    }

    // Interval invariance: L⁻¹U ⊆ U and L·S ⊆ S on the parameter lines.
    let (iu0, iu1) = scale(t0, t1, 1.0 / aut.eig_u);
    if iu0 < t0 - TOL || iu1 > t1 + TOL {
        return None;
    }
    let (is0, is1) = scale(s0, s1, aut.eig_s);
    if is0 < s0 - TOL || is1 > s1 + TOL {
        return None;
    }

    // T-junctions: every segment endpoint lies strictly inside the other
    // segment. A zero endpoint means the segment stops at the origin, which
    // must then be interior to the other segment.
    let strict = 1e-7;
    for j in [Some(t_hi), t_lo].into_iter().flatten() {
        if j.cs < s0 + strict || j.cs > s1 - strict {
            return None;
        }
    }
    if t_lo.is_none() && !(s0 < -strict && s1 > strict) {
        return None;
    }
    for j in [s_hi, s_lo].into_iter().flatten() {
        if j.cu < t0 + strict || j.cu > t1 - strict {
            return None;
        }
    }
    if (s_hi.is_none() || s_lo.is_none()) && !(t0 < -strict && t1 > strict) {
        // S stopping at the origin requires U to pass through it.
        return None;
    }

    let boxes = trace_faces(frame, t0, t1, s0, s1)?;
    Some(BaseConfig {
        t_lo: t0,
        t_hi: t1,
        s_lo: s0,
        s_hi: s1,
        boxes,
    })
}

fn scale(lo: f64, hi: f64, f: f64) -> (f64, f64) {
    if f >= 0.0 {
        (lo * f, hi * f)
    } else {
        (hi * f, lo * f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    PU,
    PS,
    MU,
    MS,
}

impl Dir {
    fn left(self) -> Dir {
        match self {
            Dir::PU => Dir::PS,
            Dir::PS => Dir::MU,
            Dir::MU => Dir::MS,
            Dir::MS => Dir::PU,
        }
    }

    fn back(self) -> Dir {
        self.left().left()
    }

    fn delta(self) -> [f64; 2] {
        match self {
            Dir::PU => [1.0, 0.0],
            Dir::PS => [0.0, 1.0],
            Dir::MU => [-1.0, 0.0],
            Dir::MS => [0.0, -1.0],
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Vertex {
    t: f64,
    s: f64,
    /// Outgoing directed edge index per direction, if present.
    out: [Option<usize>; 4],
}

/// Trace the complement faces of U ∪ S on the torus by the leftmost-turn
/// rule, keeping face interiors on the left. Returns None unless every face
/// is a parallelogram and the areas tile the torus.
fn trace_faces(frame: &EigenFrame, t0: f64, t1: f64, s0: f64, s1: f64) -> Option<Vec<BoxUv>> {
    // Vertices: junctions inside both parameter windows.
    let bound = (t1 - t0 + s1 - s0).ceil() as i64 + 2;
    let mut verts: Vec<Vertex> = junctions(frame, bound)
        .into_iter()
        .filter(|j| {
            j.cu > t0 - TOL && j.cu < t1 + TOL && j.cs > s0 - TOL && j.cs < s1 + TOL
        })
        .map(|j| Vertex {
            t: j.cu,
            s: j.cs,
            out: [None; 4],
        })
        .collect();
    if verts.len() < 2 {
        return None;
    }

    // Directed edges: (from, to, dir, len); four per undirected edge pair.
    let mut edges: Vec<(usize, usize, Dir, f64)> = Vec::new();
    let mut add_pair = |verts: &mut Vec<Vertex>, a: usize, b: usize, d: Dir, len: f64| {
        if len < TOL {
            return false;
        }
        verts[a].out[d as usize] = Some(edges.len());
        edges.push((a, b, d, len));
        verts[b].out[d.back() as usize] = Some(edges.len());
        edges.push((b, a, d.back(), len));
        true
    };

    let mut by_t: Vec<usize> = (0..verts.len()).collect();
    by_t.sort_by(|&a, &b| verts[a].t.total_cmp(&verts[b].t));
    for w in by_t.windows(2) {
        let len = verts[w[1]].t - verts[w[0]].t;
        if !add_pair(&mut verts, w[0], w[1], Dir::PU, len) {
            return None;
        }
    }
    let mut by_s: Vec<usize> = (0..verts.len()).collect();
    by_s.sort_by(|&a, &b| verts[a].s.total_cmp(&verts[b].s));
    for w in by_s.windows(2) {
        let len = verts[w[1]].s - verts[w[0]].s;
        if !add_pair(&mut verts, w[0], w[1], Dir::PS, len) {
            return None;
        }
    }

    let n_edges = edges.len();
    let expected_faces = n_edges / 2 - verts.len();
    if expected_faces == 0 {
        return None;
    }

    let mut used = vec![false; n_edges];
    let mut boxes = Vec::new();
    for start in 0..n_edges {
        if used[start] {
            continue;
        }
        let face = walk_face(&verts, &edges, &mut used, start)?;
        boxes.push(face);
    }

    if boxes.len() != expected_faces {
        return None;
    }
    let total: f64 = boxes.iter().map(|b| b.area(frame)).sum();
    if (total - 1.0).abs() > 1e-9 {
        return None;
    }
    Some(boxes)
}

/// Walk one face starting from the given directed edge. The walk happens in
/// lifted frame coordinates; it must return to the start with zero total
/// displacement, and after collapsing collinear runs must be a CCW
/// parallelogram.
fn walk_face(
    verts: &[Vertex],
    edges: &[(usize, usize, Dir, f64)],
    used: &mut [bool],
    start: usize,
) -> Option<BoxUv> {
    let mut pos = {
        let v = &verts[edges[start].0];
        [v.t, 0.0]
    };
    let (mut min_u, mut max_u, mut min_s, mut max_s) = (pos[0], pos[0], pos[1], pos[1]);
    let mut runs: Vec<(Dir, f64)> = Vec::new();
    let mut cur = start;
    for _step in 0..edges.len() + 1 {
        if used[cur] {
            return None;
        }
        used[cur] = true;
        let (_, to, dir, len) = edges[cur];
        let d = dir.delta();
        pos = [pos[0] + d[0] * len, pos[1] + d[1] * len];
        min_u = min_u.min(pos[0]);
        max_u = max_u.max(pos[0]);
        min_s = min_s.min(pos[1]);
        max_s = max_s.max(pos[1]);
        match runs.last_mut() {
            Some((rd, rl)) if *rd == dir => *rl += len,
            _ => runs.push((dir, len)),
        }
        // Leftmost-turn continuation.
        let v = &verts[to];
        let mut next = None;
        for d in [dir.left(), dir, dir.left().back(), dir.back()] {
            if let Some(e) = v.out[d as usize] {
                next = Some(e);
                break;
            }
        }
        let next = next?;
        if next == start {
            // Face closed; validate geometry.
            let v0 = &verts[edges[start].0];
            if (pos[0] - v0.t).abs() > 1e-9 || pos[1].abs() > 1e-9 {
                return None;
            }
            if runs.len() == 5 && runs[0].0 == runs[4].0 {
                let tail = runs.pop().unwrap();
                runs[0].1 += tail.1;
            }
            if runs.len() != 4 {
                return None;
            }
            let dirs: Vec<Dir> = runs.iter().map(|r| r.0).collect();
            let ccw = (0..4).any(|r| {
                dirs[r] == Dir::PU
                    && dirs[(r + 1) % 4] == Dir::PS
                    && dirs[(r + 2) % 4] == Dir::MU
                    && dirs[(r + 3) % 4] == Dir::MS
            });
            if !ccw {
                return None;
            }
            return Some(BoxUv {
                u0: min_u,
                s0: min_s,
                du: max_u - min_u,
                ds: max_s - min_s,
            });
        }
        cur = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::eigen_data;

    #[test]
    fn cat_map_base_partition_is_two_squares() {
        let aut = eigen_data([[1, 1], [1, 0]]).unwrap();
        let frame = EigenFrame::new(&aut);
        let configs = search_base_configs(&aut, &frame).unwrap();
        assert!(!configs.is_empty());
        let best = &configs[0];
        assert_eq!(best.boxes.len(), 2);
        let mut areas: Vec<f64> = best.boxes.iter().map(|b| b.area(&frame)).collect();
        areas.sort_by(f64::total_cmp);
        // Golden-ratio squares: 1/(1+φ²) and φ²/(1+φ²).
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((areas[0] - 1.0 / (1.0 + phi * phi)).abs() < 1e-9);
        assert!((areas[1] - phi * phi / (1.0 + phi * phi)).abs() < 1e-9);
    }

    #[test]
    fn squared_cat_has_base_partition() {
        let aut = eigen_data([[2, 1], [1, 1]]).unwrap();
        let frame = EigenFrame::new(&aut);
        let configs = search_base_configs(&aut, &frame).unwrap();
        let best = &configs[0];
        let total: f64 = best.boxes.iter().map(|b| b.area(&frame)).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}
