//! Markov partition construction and the symbolic coding it induces: the
//! factor map between the subshift and the torus, cylinder geometry, and
//! periodic-word enumeration.

mod arrangement;
mod frame;
mod sft;

pub use sft::Sft;

use crate::error::{Error, Result};
use crate::torus::{FloatPoint, ToralAutomorphism, TorusPoint};
use frame::{BoxUv, EigenFrame};
use serde::{Deserialize, Serialize};

const TOL: f64 = 1e-9;
const MAX_ROUNDS: usize = 16;
const MAX_RECTS: usize = 4096;
const MAX_ENCODINGS: usize = 4096;

/// Admissible symbol window. `offset` is the index of time 0 inside
/// `symbols`, so the word covers positions -offset .. symbols.len()-offset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    pub symbols: Vec<u16>,
    pub offset: usize,
}

impl Word {
    pub fn future(symbols: Vec<u16>) -> Self {
        Word {
            symbols,
            offset: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Partition element: the parallelogram corner + du·e_u + ds·e_s, with the
/// corner reduced to the fundamental domain. `center` and `diameter` are
/// derived but carried for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub corner: FloatPoint,
    pub unstable_extent: f64,
    pub stable_extent: f64,
    pub center: FloatPoint,
    pub diameter: f64,
}

/// One crossing a→b: L maps the strip u ∈ [u_lo,u_hi] of rect_a (full
/// stable extent) onto the strip s ∈ [s_lo,s_hi] of rect_b (full unstable
/// extent); in lift coordinates L(x) + w lands in rect_b's box.
#[derive(Debug, Clone, Copy)]
struct Crossing {
    u_lo: f64,
    u_hi: f64,
    s_lo: f64,
    s_hi: f64,
    w: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct MarkovCoding {
    pub rectangles: Vec<Rectangle>,
    pub sft: Sft,
    pub zero_symbol: usize,
    aut: ToralAutomorphism,
    frame: EigenFrame,
    boxes: Vec<BoxUv>,
    crossings: Vec<Vec<Option<Crossing>>>,
}

/// Two-rectangle eigen-aligned base partition, refined under L and L⁻¹
/// until every rectangle has diameter < 1/2 and every transition crosses
/// exactly once. The transition matrix is read off the crossing geometry.
pub fn build_partition(aut: &ToralAutomorphism) -> Result<MarkovCoding> {
    let frame = EigenFrame::new(aut);
    let configs = arrangement::search_base_configs(aut, &frame)?;
    let mut last_err = None;
    for cfg in configs.iter().take(8) {
        match refine(aut, &frame, cfg.boxes.clone()) {
            Ok(boxes) => return assemble(aut, frame, boxes),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::ConstructionFailed("all base configurations failed to refine".into())
    }))
}

/// All crossings between current boxes. `pieces[a][b]` lists every lattice
/// translate along which L(box_a) meets box_b with positive area.
fn all_crossings(
    aut: &ToralAutomorphism,
    frame: &EigenFrame,
    boxes: &[BoxUv],
) -> Result<Vec<Vec<Vec<Crossing>>>> {
    let k = boxes.len();
    let mut out = vec![vec![Vec::new(); k]; k];
    for (a, ba) in boxes.iter().enumerate() {
        let im = ba.image(aut.eig_u, aut.eig_s);
        for (b, bb) in boxes.iter().enumerate() {
            for w in frame.offsets_within(
                bb.u0 - im.u1(),
                bb.u1() - im.u0,
                bb.s0 - im.s1(),
                bb.s1() - im.s0,
                TOL,
            ) {
                let t = im.translated(w);
                let o = match t.intersect(bb) {
                    Some(o) if o.du > TOL && o.ds > TOL => o,
                    _ => continue,
                };
                // Image must span rect_b fully along e_u.
                if t.u0 > bb.u0 + TOL || t.u1() < bb.u1() - TOL {
                    return Err(Error::ConstructionFailed(format!(
                        "image of rectangle {a} crosses {b} with partial unstable extent"
                    )));
                }
                // Preimage must span rect_a fully along e_s.
                let pre_s =
                    scale_iv(o.s0 - w[1], o.s1() - w[1], 1.0 / aut.eig_s);
                if pre_s.0 > ba.s0 + TOL || pre_s.1 < ba.s1() - TOL {
                    return Err(Error::ConstructionFailed(format!(
                        "preimage of rectangle {b} crosses {a} with partial stable extent"
                    )));
                }
                let pre_u =
                    scale_iv(o.u0 - w[0], o.u1() - w[0], 1.0 / aut.eig_u);
                out[a][b].push(Crossing {
                    u_lo: pre_u.0,
                    u_hi: pre_u.1,
                    s_lo: o.s0,
                    s_hi: o.s1(),
                    w,
                });
            }
        }
    }
    Ok(out)
}

fn scale_iv(lo: f64, hi: f64, f: f64) -> (f64, f64) {
    if f >= 0.0 {
        (lo * f, hi * f)
    } else {
        (hi * f, lo * f)
    }
}

fn refine(
    aut: &ToralAutomorphism,
    frame: &EigenFrame,
    mut boxes: Vec<BoxUv>,
) -> Result<Vec<BoxUv>> {
    for _round in 0..MAX_ROUNDS {
        let pieces = all_crossings(aut, frame, &boxes)?;
        let multi = pieces
            .iter()
            .any(|row| row.iter().any(|cell| cell.len() > 1));
        let max_diam = boxes
            .iter()
            .map(|b| b.diameter(frame))
            .fold(0.0f64, f64::max);
        if !multi && max_diam < 0.5 {
            return Ok(boxes);
        }
        let max_du = boxes.iter().map(|b| b.du).fold(0.0f64, f64::max);
        let max_ds = boxes.iter().map(|b| b.ds).fold(0.0f64, f64::max);
        // Stable cuts also separate multiple crossings into distinct target
        // rectangles, so they take priority.
        if multi || max_ds >= max_du {
            boxes = cut_stable(&boxes, &pieces);
        } else {
            boxes = cut_unstable(&boxes, &pieces);
        }
        if boxes.len() > MAX_RECTS {
            return Err(Error::ConstructionFailed(format!(
                "refinement exceeded {MAX_RECTS} rectangles"
            )));
        }
    }
    Err(Error::ConstructionFailed(format!(
        "refinement did not converge in {MAX_ROUNDS} rounds"
    )))
}

/// Join with the L-preimages: cut each rectangle along e_s at the preimage
/// strip boundaries (refines future coordinates).
fn cut_unstable(boxes: &[BoxUv], pieces: &[Vec<Vec<Crossing>>]) -> Vec<BoxUv> {
    let mut out = Vec::new();
    for (a, ba) in boxes.iter().enumerate() {
        let mut cuts = vec![ba.u0, ba.u1()];
        for row in &pieces[a] {
            for c in row {
                cuts.push(c.u_lo);
                cuts.push(c.u_hi);
            }
        }
        push_subdivision(&mut out, cuts, |lo, hi| BoxUv {
            u0: lo,
            s0: ba.s0,
            du: hi - lo,
            ds: ba.ds,
        });
    }
    out
}

/// Join with the L-images: cut each rectangle along e_u at the image strip
/// boundaries (refines past coordinates).
fn cut_stable(boxes: &[BoxUv], pieces: &[Vec<Vec<Crossing>>]) -> Vec<BoxUv> {
    let mut out = Vec::new();
    for (b, bb) in boxes.iter().enumerate() {
        let mut cuts = vec![bb.s0, bb.s1()];
        for row in pieces {
            for c in &row[b] {
                cuts.push(c.s_lo);
                cuts.push(c.s_hi);
            }
        }
        push_subdivision(&mut out, cuts, |lo, hi| BoxUv {
            u0: bb.u0,
            s0: lo,
            du: bb.du,
            ds: hi - lo,
        });
    }
    out
}

fn push_subdivision(out: &mut Vec<BoxUv>, mut cuts: Vec<f64>, make: impl Fn(f64, f64) -> BoxUv) {
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < TOL);
    for w in cuts.windows(2) {
        if w[1] - w[0] > TOL {
            out.push(make(w[0], w[1]));
        }
    }
}

fn assemble(
    aut: &ToralAutomorphism,
    frame: EigenFrame,
    mut boxes: Vec<BoxUv>,
) -> Result<MarkovCoding> {
    boxes.sort_by(|a, b| a.u0.total_cmp(&b.u0).then(a.s0.total_cmp(&b.s0)));

    // Tiling check: total area 1 and no pairwise overlap on the torus.
    let total: f64 = boxes.iter().map(|b| b.area(&frame)).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::ConstructionFailed(format!(
            "rectangle areas sum to {total}, expected 1"
        )));
    }
    for (i, bi) in boxes.iter().enumerate() {
        for (j, bj) in boxes.iter().enumerate().skip(i) {
            for w in frame.offsets_within(
                bj.u0 - bi.u1(),
                bj.u1() - bi.u0,
                bj.s0 - bi.s1(),
                bj.s1() - bi.s0,
                TOL,
            ) {
                if i == j && w[0].abs() < TOL && w[1].abs() < TOL {
                    continue;
                }
                if let Some(o) = bi.translated(w).intersect(bj) {
                    if o.du > TOL && o.ds > TOL {
                        return Err(Error::ConstructionFailed(format!(
                            "rectangles {i} and {j} overlap on the torus"
                        )));
                    }
                }
            }
        }
    }

    let pieces = all_crossings(aut, &frame, &boxes)?;
    let k = boxes.len();
    let mut crossings = vec![vec![None; k]; k];
    let mut transition = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            match pieces[a][b].len() {
                0 => {}
                1 => {
                    crossings[a][b] = Some(pieces[a][b][0]);
                    transition[a][b] = true;
                }
                n => {
                    return Err(Error::ConstructionFailed(format!(
                        "transition {a}->{b} crosses {n} times after refinement"
                    )))
                }
            }
        }
    }
    let sft = Sft::new(transition)?;

    let rectangles: Vec<Rectangle> = boxes
        .iter()
        .map(|b| Rectangle {
            corner: frame.to_torus([b.u0, b.s0]),
            unstable_extent: b.du,
            stable_extent: b.ds,
            center: frame.to_torus(b.center()),
            diameter: b.diameter(&frame),
        })
        .collect();

    let zero_symbol = find_zero_symbol(&frame, &boxes)?;

    Ok(MarkovCoding {
        rectangles,
        sft,
        zero_symbol,
        aut: *aut,
        frame,
        boxes,
        crossings,
    })
}

/// The distinguished symbol: the rectangle whose corner is a lattice lift of
/// the origin (it exists because the unstable segment starts there), falling
/// back to any rectangle whose closure contains the origin.
fn find_zero_symbol(frame: &EigenFrame, boxes: &[BoxUv]) -> Result<usize> {
    for (i, b) in boxes.iter().enumerate() {
        let c = frame.to_torus([b.u0, b.s0]);
        let d = crate::torus::torus_dist(c, [0.0, 0.0]);
        if d < 1e-7 {
            return Ok(i);
        }
    }
    for (i, b) in boxes.iter().enumerate() {
        for w in frame.offsets_within(b.u0 - TOL, b.u1() + TOL, b.s0 - TOL, b.s1() + TOL, TOL) {
            if b.contains(w, TOL) {
                return Ok(i);
            }
        }
    }
    Err(Error::ConstructionFailed(
        "no rectangle contains the origin".into(),
    ))
}

impl MarkovCoding {
    pub fn alphabet_size(&self) -> usize {
        self.sft.alphabet_size
    }

    pub fn automorphism(&self) -> &ToralAutomorphism {
        &self.aut
    }

    pub(crate) fn frame(&self) -> &EigenFrame {
        &self.frame
    }

    pub(crate) fn box_of(&self, sym: usize) -> &BoxUv {
        &self.boxes[sym]
    }

    /// Frame coordinates of x inside the canonical lift of `sym`'s box, if
    /// the point lies in that rectangle (within tol).
    pub(crate) fn locate_in_box(&self, x: FloatPoint, sym: usize, tol: f64) -> Option<[f64; 2]> {
        let b = self.box_of(sym);
        let uv = self.frame.to_frame([x[0], x[1]]);
        for w in self.frame.offsets_within(
            b.u0 - uv[0] - tol,
            b.u1() - uv[0] + tol,
            b.s0 - uv[1] - tol,
            b.s1() - uv[1] + tol,
            tol,
        ) {
            let cand = [uv[0] + w[0], uv[1] + w[1]];
            if b.contains(cand, tol) {
                return Some(cand);
            }
        }
        None
    }

    pub fn max_diameter(&self) -> f64 {
        self.rectangles
            .iter()
            .map(|r| r.diameter)
            .fold(0.0, f64::max)
    }

    /// Symmetric window: all itineraries over positions -depth ..= depth.
    pub fn encode(&self, x: TorusPoint, depth: usize) -> Vec<Word> {
        self.encode_window(x, depth, depth)
    }

    /// All admissible words w with L^j x ∈ rect_{w_j} for
    /// j ∈ [-past, future]. Interior points give exactly one word; points on
    /// the partition boundary give every compatible word (capped).
    pub fn encode_window(&self, x: TorusPoint, past: usize, future: usize) -> Vec<Word> {
        let mut orbit: Vec<FloatPoint> = Vec::with_capacity(past + future + 1);
        match x {
            TorusPoint::Exact(p) => {
                let mut back = p;
                for _ in 0..past {
                    back = self.aut.apply_inv_rat(back);
                }
                let mut q = back;
                for _ in 0..=(past + future) {
                    orbit.push(q.to_float());
                    q = self.aut.apply_rat(q);
                }
            }
            TorusPoint::Float(p) => {
                let p = [crate::util::mod1(p[0]), crate::util::mod1(p[1])];
                let mut back = p;
                for _ in 0..past {
                    back = self.aut.apply_inv_f(back);
                }
                let mut q = back;
                for _ in 0..=(past + future) {
                    orbit.push(q);
                    q = self.aut.apply_f(q);
                }
            }
        }

        let candidates: Vec<Vec<u16>> = orbit
            .iter()
            .map(|p| self.symbols_containing(*p))
            .collect();
        let mut words = Vec::new();
        let mut prefix: Vec<u16> = Vec::with_capacity(candidates.len());
        self.extend_itineraries(&candidates, &mut prefix, &mut words);
        words
            .into_iter()
            .map(|symbols| Word {
                symbols,
                offset: past,
            })
            .collect()
    }

    fn symbols_containing(&self, p: FloatPoint) -> Vec<u16> {
        let uv = self.frame.to_frame([p[0], p[1]]);
        let mut out = Vec::new();
        for (i, b) in self.boxes.iter().enumerate() {
            for w in self.frame.offsets_within(
                b.u0 - uv[0] - TOL,
                b.u1() - uv[0] + TOL,
                b.s0 - uv[1] - TOL,
                b.s1() - uv[1] + TOL,
                TOL,
            ) {
                if b.contains([uv[0] + w[0], uv[1] + w[1]], TOL) {
                    out.push(i as u16);
                    break;
                }
            }
        }
        out
    }

    fn extend_itineraries(
        &self,
        candidates: &[Vec<u16>],
        prefix: &mut Vec<u16>,
        words: &mut Vec<Vec<u16>>,
    ) {
        if words.len() >= MAX_ENCODINGS {
            return;
        }
        let pos = prefix.len();
        if pos == candidates.len() {
            words.push(prefix.clone());
            return;
        }
        for &s in &candidates[pos] {
            if let Some(&last) = prefix.last() {
                if !self.sft.admits(last as usize, s as usize) {
                    continue;
                }
            }
            prefix.push(s);
            self.extend_itineraries(candidates, prefix, words);
            prefix.pop();
        }
    }

    /// Cylinder geometry: ∩_j L^{-j} rect_{w_j} as one box in the lift
    /// coordinates of the time-0 rectangle. Future symbols narrow the
    /// unstable side, past symbols the stable side.
    pub(crate) fn decode_box(&self, w: &Word) -> Result<BoxUv> {
        if w.symbols.is_empty() || w.offset >= w.symbols.len() {
            return Err(Error::InvalidInput(
                "word must be nonempty with offset inside".into(),
            ));
        }
        let syms = &w.symbols;
        let a0 = syms[w.offset] as usize;
        let b0 = self.boxes[a0];

        let future = &syms[w.offset..];
        let mut u_iv = {
            let last = *future.last().unwrap() as usize;
            (self.boxes[last].u0, self.boxes[last].u1())
        };
        for j in (0..future.len() - 1).rev() {
            let (a, b) = (future[j] as usize, future[j + 1] as usize);
            let c = self.crossings[a][b].ok_or(Error::EmptyCylinder)?;
            let pulled = scale_iv(u_iv.0 - c.w[0], u_iv.1 - c.w[0], 1.0 / self.aut.eig_u);
            u_iv = (pulled.0.max(c.u_lo), pulled.1.min(c.u_hi));
            if u_iv.1 - u_iv.0 < -1e-12 {
                return Err(Error::EmptyCylinder);
            }
        }

        let past = &syms[..=w.offset];
        let mut s_iv = {
            let first = past[0] as usize;
            (self.boxes[first].s0, self.boxes[first].s1())
        };
        for j in 0..past.len() - 1 {
            let (a, b) = (past[j] as usize, past[j + 1] as usize);
            let c = self.crossings[a][b].ok_or(Error::EmptyCylinder)?;
            let scaled = scale_iv(s_iv.0, s_iv.1, self.aut.eig_s);
            let pushed = (scaled.0 + c.w[1], scaled.1 + c.w[1]);
            s_iv = (pushed.0.max(c.s_lo), pushed.1.min(c.s_hi));
            if s_iv.1 - s_iv.0 < -1e-12 {
                return Err(Error::EmptyCylinder);
            }
        }

        Ok(BoxUv {
            u0: u_iv.0.max(b0.u0),
            s0: s_iv.0.max(b0.s0),
            du: (u_iv.1 - u_iv.0).max(0.0).min(b0.du),
            ds: (s_iv.1 - s_iv.0).max(0.0).min(b0.ds),
        })
    }

    pub fn decode(&self, w: &Word) -> Result<Rectangle> {
        let b = self.decode_box(w)?;
        Ok(Rectangle {
            corner: self.frame.to_torus([b.u0, b.s0]),
            unstable_extent: b.du,
            stable_extent: b.ds,
            center: self.frame.to_torus(b.center()),
            diameter: b.diameter(&self.frame),
        })
    }

    /// The unique torus point whose orbit shadows the cyclic word forever:
    /// the fixed point of the word's n-step affine return map in frame
    /// coordinates, solved in closed form. Machine-precision accurate, no
    /// iteration involved.
    pub fn cycle_fixed_point(&self, symbols: &[u16]) -> Result<FloatPoint> {
        let n = symbols.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty cycle".into()));
        }
        // Horner accumulation of W = Σ eig^{n-1-k} w(k); the step map is
        // x ↦ eig·x + w(k), so the n-step composite is x ↦ eigⁿ·x + W.
        let (mut wu, mut ws) = (0.0f64, 0.0f64);
        for k in 0..n {
            let (a, b) = (symbols[k] as usize, symbols[(k + 1) % n] as usize);
            if a >= self.boxes.len() || b >= self.boxes.len() {
                return Err(Error::InvalidInput("symbol out of range".into()));
            }
            let c = self.crossings[a][b].ok_or(Error::EmptyCylinder)?;
            wu = self.aut.eig_u * wu + c.w[0];
            ws = self.aut.eig_s * ws + c.w[1];
        }
        let u = wu / (1.0 - self.aut.eig_u.powi(n as i32));
        let s = ws / (1.0 - self.aut.eig_s.powi(n as i32));
        let b0 = &self.boxes[symbols[0] as usize];
        if u < b0.u0 - 1e-6 || u > b0.u1() + 1e-6 || s < b0.s0 - 1e-6 || s > b0.s1() + 1e-6 {
            return Err(Error::ConstructionFailed(
                "cycle fixed point escaped its rectangle".into(),
            ));
        }
        Ok(self.frame.to_torus([u, s]))
    }

    /// All cyclically admissible words of length n (count = trace(Tⁿ)),
    /// in lexicographic order.
    pub fn periodic_words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let k = self.sft.alphabet_size;
        let mut path: Vec<u16> = Vec::with_capacity(n);
        for start in 0..k {
            path.push(start as u16);
            self.cycle_dfs(start, n, &mut path, &mut out);
            path.pop();
        }
        out
    }

    fn cycle_dfs(&self, start: usize, n: usize, path: &mut Vec<u16>, out: &mut Vec<Word>) {
        if path.len() == n {
            if self.sft.admits(*path.last().unwrap() as usize, start) {
                out.push(Word::future(path.clone()));
            }
            return;
        }
        let cur = *path.last().unwrap() as usize;
        for next in self.sft.successors(cur) {
            path.push(next as u16);
            self.cycle_dfs(start, n, path, out);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{eigen_data, periodic_points, torus_dist, RatPoint};
    use crate::util::kronecker_points;

    fn cat_coding() -> MarkovCoding {
        build_partition(&eigen_data([[1, 1], [1, 0]]).unwrap()).unwrap()
    }

    #[test]
    fn cat_partition_satisfies_global_invariants() {
        let coding = cat_coding();
        assert!(coding.max_diameter() < 0.5);
        assert!(coding.sft.mixing_power <= 50);
        let total: f64 = coding
            .boxes
            .iter()
            .map(|b| b.area(&coding.frame))
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
        // The zero rectangle's corner is the origin.
        let z = &coding.rectangles[coding.zero_symbol];
        assert!(torus_dist(z.corner, [0.0, 0.0]) < 1e-7);
    }

    #[test]
    fn transition_traces_track_fixed_point_counts() {
        let coding = cat_coding();
        let aut = coding.automorphism();
        for n in 1..=12 {
            let symbolic = coding.sft.trace_pow(n).unwrap() as i128;
            let geometric = periodic_points(aut, n).unwrap().len() as i128;
            assert!(
                (symbolic - geometric).abs() <= 2,
                "n={n}: trace {symbolic} vs fixed points {geometric}"
            );
        }
    }

    #[test]
    fn interior_points_encode_uniquely_and_decode_contains() {
        let coding = cat_coding();
        for (px, py) in kronecker_points(50, 23) {
            let words = coding.encode(TorusPoint::Float([px, py]), 4);
            // Kronecker samples stay away from the null boundary set.
            assert_eq!(words.len(), 1, "point ({px},{py})");
            let rect = coding.decode(&words[0]).unwrap();
            // The decoded cylinder must contain the point: check via frame
            // coordinates against the returned corner/extents.
            let b = coding.decode_box(&words[0]).unwrap();
            let uv = coding.frame.to_frame([px, py]);
            let contained = coding
                .frame
                .offsets_within(
                    b.u0 - uv[0] - TOL,
                    b.u1() - uv[0] + TOL,
                    b.s0 - uv[1] - TOL,
                    b.s1() - uv[1] + TOL,
                    TOL,
                )
                .iter()
                .any(|w| b.contains([uv[0] + w[0], uv[1] + w[1]], 1e-7));
            assert!(contained, "decoded rectangle misses the point");
            assert!(rect.diameter <= coding.max_diameter() + 1e-12);
        }
    }

    #[test]
    fn origin_lies_on_boundary_and_has_multiple_codes() {
        let coding = cat_coding();
        let words = coding.encode(TorusPoint::Exact(RatPoint::zero()), 2);
        assert!(words.len() >= 2);
        for w in &words {
            assert!(coding.sft.is_admissible(&w.symbols));
        }
    }

    #[test]
    fn encoding_commutes_with_the_shift() {
        let coding = cat_coding();
        let aut = coding.automorphism();
        for (px, py) in kronecker_points(20, 41) {
            let x = [px, py];
            let wx = coding.encode(TorusPoint::Float(x), 5);
            let wlx = coding.encode(TorusPoint::Float(aut.apply_f(x)), 4);
            assert_eq!(wx.len(), 1);
            assert_eq!(wlx.len(), 1);
            // encode(Lx) is the left shift: positions -4..4 of the shifted
            // word equal positions -3..5 of the original.
            assert_eq!(wx[0].symbols[2..11], wlx[0].symbols[..]);
        }
    }

    #[test]
    fn deeper_words_decode_to_geometrically_smaller_cylinders() {
        let coding = cat_coding();
        let x = TorusPoint::Float([0.37, 0.21]);
        let lambda = coding.automorphism().lambda;
        let mut prev: Option<Rectangle> = None;
        for depth in [1usize, 4, 7, 10] {
            let w = &coding.encode(x, depth)[0];
            let rect = coding.decode(w).unwrap();
            assert!(
                rect.diameter <= coding.max_diameter() * lambda.powi(-(depth as i32)) + 1e-12,
                "depth {depth}: diameter {}",
                rect.diameter
            );
            if let Some(p) = prev {
                assert!(rect.unstable_extent <= p.unstable_extent + 1e-12);
                assert!(rect.stable_extent <= p.stable_extent + 1e-12);
            }
            prev = Some(rect);
        }
    }

    #[test]
    fn single_symbol_word_decodes_to_its_rectangle() {
        let coding = cat_coding();
        for a in 0..coding.alphabet_size() {
            let w = Word::future(vec![a as u16]);
            let rect = coding.decode(&w).unwrap();
            let b = &coding.boxes[a];
            assert!((rect.unstable_extent - b.du).abs() < 1e-12);
            assert!((rect.stable_extent - b.ds).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_word_counts_match_traces() {
        let coding = cat_coding();
        for n in 1..=6 {
            let words = coding.periodic_words(n);
            assert_eq!(words.len() as u128, coding.sft.trace_pow(n).unwrap());
            for w in &words {
                assert!(coding.sft.is_admissible(&w.symbols));
                assert!(coding
                    .sft
                    .admits(*w.symbols.last().unwrap() as usize, w.symbols[0] as usize));
            }
        }
    }

    #[test]
    fn periodic_words_shadow_rational_periodic_points() {
        let coding = cat_coding();
        let aut = coding.automorphism();
        let n = 4;
        let points = periodic_points(aut, n).unwrap();
        let reps = 3;
        for w in coding.periodic_words(n) {
            // Decode the word repeated around its cycle to pin the orbit.
            let mut symbols = Vec::new();
            for _ in 0..(2 * reps + 1) {
                symbols.extend_from_slice(&w.symbols);
            }
            let long = Word {
                symbols,
                offset: reps * n,
            };
            let b = coding.decode_box(&long).unwrap();
            let center = coding.frame.to_torus(b.center());
            let diam = b.diameter(&coding.frame);
            let hit = points
                .iter()
                .any(|p| torus_dist(p.to_float(), center) <= diam / 2.0 + 1e-7);
            assert!(hit, "word {:?} shadows no period-{n} point", w.symbols);
        }
    }

    #[test]
    fn squared_cat_also_builds() {
        let coding = build_partition(&eigen_data([[2, 1], [1, 1]]).unwrap()).unwrap();
        assert!(coding.max_diameter() < 0.5);
        for n in 1..=6 {
            let symbolic = coding.sft.trace_pow(n).unwrap() as i128;
            let geometric = periodic_points(coding.automorphism(), n).unwrap().len() as i128;
            assert!(
                (symbolic - geometric).abs() <= 4,
                "n={n}: {symbolic} vs {geometric}"
            );
        }
    }
}


