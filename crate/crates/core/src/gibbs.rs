//! Equilibrium states on the symbolic side: the weighted transfer operator
//! on depth-m cylinder discretizations, pressure as its leading eigenvalue,
//! Gibbs cylinder weights, the g-function, and the local product density.

use crate::coding::{MarkovCoding, Sft, Word};
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::util::CompensatedSum;
use std::collections::BTreeMap;

const MAX_ITERS: usize = 100_000;
const REL_TOL: f64 = 1e-12;

/// Finite-depth approximation of the equilibrium state ν of a potential ψ:
/// weights over all admissible length-`depth` words, the pressure, and the
/// leading right eigenvector of the transfer matrix.
#[derive(Debug, Clone)]
pub struct GibbsApproximation {
    pub depth: usize,
    /// All admissible words of length `depth`, lexicographic.
    pub words: Vec<Vec<u16>>,
    /// Cylinder weights parallel to `words`; nonnegative, sums to 1.
    pub weights: Vec<f64>,
    /// Right leading eigenvector parallel to `words`, max-normalized.
    pub eigenfunction: Vec<f64>,
    pub pressure: f64,
    /// Empirical two-sided Gibbs bound over the stored cylinders.
    pub bowen_constant: f64,
    index: BTreeMap<Vec<u16>, usize>,
}

/// Equilibrium state of ψ at cylinder depth m via the weighted transfer
/// matrix M[(aw),(wb)] = e^{ψ(aw)}: pressure is the log of its leading
/// eigenvalue, weights come from the left and right leading eigenvectors.
/// ψ is any word-evaluable function; for torus potentials use
/// [`cylinder_potential`].
pub fn equilibrium<F: Fn(&[u16]) -> f64>(
    psi: F,
    sft: &Sft,
    depth: usize,
) -> Result<GibbsApproximation> {
    if depth == 0 {
        return Err(Error::InvalidInput("cylinder depth must be positive".into()));
    }
    let words = sft.admissible_words(depth);
    let n = words.len();
    let psi_vals: Vec<f64> = words.iter().map(|w| psi(w)).collect();
    let shift = psi_vals.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !shift.is_finite() {
        return Err(Error::InvalidInput(
            "potential must be finite on all cylinders".into(),
        ));
    }
    // Spectral shift keeps matrix entries in (0, 1]; the pressure gets the
    // shift back at the end.
    let ew: Vec<f64> = psi_vals.iter().map(|&p| (p - shift).exp()).collect();

    // Transitions (aw) -> (wb) factor through the shared overlap w, so one
    // operator application is two passes over the word list: accumulate per
    // overlap group, then distribute. Depth 1 has no overlap and uses the
    // transition matrix directly.
    let (prefix_of, suffix_of, groups) = if depth >= 2 {
        let mut ids: BTreeMap<&[u16], u32> = BTreeMap::new();
        let mut prefix_of = Vec::with_capacity(n);
        let mut suffix_of = Vec::with_capacity(n);
        for w in &words {
            let next = ids.len() as u32;
            let p = *ids.entry(&w[..depth - 1]).or_insert(next);
            prefix_of.push(p);
        }
        for w in &words {
            let next = ids.len() as u32;
            let s = *ids.entry(&w[1..]).or_insert(next);
            suffix_of.push(s);
        }
        let groups = ids.len();
        (prefix_of, suffix_of, groups)
    } else {
        (Vec::new(), Vec::new(), 0)
    };

    let apply_right = |v: &[f64], out: &mut [f64]| {
        if depth >= 2 {
            let mut gsum = vec![0.0; groups];
            for (j, &p) in prefix_of.iter().enumerate() {
                gsum[p as usize] += v[j];
            }
            for i in 0..n {
                out[i] = ew[i] * gsum[suffix_of[i] as usize];
            }
        } else {
            for i in 0..n {
                out[i] = ew[i]
                    * sft
                        .successors(i)
                        .map(|j| v[j])
                        .sum::<f64>();
            }
        }
    };
    let apply_left = |v: &[f64], out: &mut [f64]| {
        if depth >= 2 {
            let mut gsum = vec![0.0; groups];
            for i in 0..n {
                gsum[suffix_of[i] as usize] += v[i] * ew[i];
            }
            for (j, &p) in prefix_of.iter().enumerate() {
                out[j] = gsum[p as usize];
            }
        } else {
            for j in 0..n {
                out[j] = (0..n)
                    .filter(|&i| sft.admits(i, j))
                    .map(|i| v[i] * ew[i])
                    .sum::<f64>();
            }
        }
    };

    let (right, lam) = power_iterate(apply_right, n)?;
    let (left, _) = power_iterate(apply_left, n)?;
    let pressure = shift + lam.ln();

    let mut total = CompensatedSum::new();
    for i in 0..n {
        total.add(left[i] * right[i]);
    }
    let total = total.value();
    if !(total > 0.0) {
        return Err(Error::ConstructionFailed(
            "transfer eigenvectors degenerate".into(),
        ));
    }
    let weights: Vec<f64> = (0..n).map(|i| left[i] * right[i] / total).collect();
    let rmax = right.iter().fold(0.0f64, |a, &b| a.max(b));
    let eigenfunction: Vec<f64> = right.iter().map(|&r| r / rmax).collect();

    let index: BTreeMap<Vec<u16>, usize> =
        words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut out = GibbsApproximation {
        depth,
        words,
        weights,
        eigenfunction,
        pressure,
        bowen_constant: 1.0,
        index,
    };
    out.bowen_constant = bowen_constant(&out, psi, &[depth]);
    Ok(out)
}

/// Power iteration with the Collatz–Wielandt bracket as the stopping rule:
/// for positive v, min and max of (Av)/v enclose the leading eigenvalue.
fn power_iterate(apply: impl Fn(&[f64], &mut [f64]), n: usize) -> Result<(Vec<f64>, f64)> {
    let mut v = vec![1.0; n];
    let mut av = vec![0.0; n];
    for _ in 0..MAX_ITERS {
        apply(&v, &mut av);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            let r = av[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::ConstructionFailed(
                "transfer iteration lost positivity".into(),
            ));
        }
        for x in av.iter_mut() {
            *x /= hi;
        }
        std::mem::swap(&mut v, &mut av);
        if hi - lo <= REL_TOL * hi {
            return Ok((v, (lo + hi) / 2.0));
        }
    }
    Err(Error::NoConvergence(MAX_ITERS))
}

impl GibbsApproximation {
    /// Weight of one stored length-`depth` cylinder.
    pub fn weight(&self, word: &[u16]) -> Option<f64> {
        self.index.get(word).map(|&i| self.weights[i])
    }

    pub fn eigenfunction_at(&self, word: &[u16]) -> Option<f64> {
        self.index.get(word).map(|&i| self.eigenfunction[i])
    }

    /// ν-measure of the cylinder fixed by `prefix` (length ≤ depth): the
    /// marginal sum over all stored words extending it.
    pub fn cylinder_measure(&self, prefix: &[u16]) -> f64 {
        assert!(prefix.len() <= self.depth, "prefix longer than stored depth");
        if prefix.len() == self.depth {
            return self.weight(prefix).unwrap_or(0.0);
        }
        let mut sum = CompensatedSum::new();
        for (w, &i) in self.index.range(prefix.to_vec()..) {
            if !w.starts_with(prefix) {
                break;
            }
            sum.add(self.weights[i]);
        }
        sum.value()
    }
}

/// The g-function of ν⁺ resolved on length-`depth` future words:
/// g(w) = ν⁺(C_w) / ν⁺(C_{σ₊w}), the backward transition weight of the
/// first symbol given the rest. Values lie in (0, 1], hitting 1 exactly
/// when the tail has a unique admissible predecessor.
#[derive(Debug, Clone)]
pub struct GFunction {
    pub depth: usize,
    pub words: Vec<Vec<u16>>,
    pub values: Vec<f64>,
    index: BTreeMap<Vec<u16>, usize>,
}

impl GFunction {
    /// Value on the cylinder of the first `depth` symbols of `word`.
    pub fn eval(&self, word: &[u16]) -> Option<f64> {
        if word.len() < self.depth {
            return None;
        }
        self.index.get(&word[..self.depth]).map(|&i| self.values[i])
    }
}

pub fn g_function(g: &GibbsApproximation) -> Result<GFunction> {
    if g.depth < 2 {
        return Err(Error::InvalidInput(
            "g-function needs cylinder depth at least 2".into(),
        ));
    }
    let mut values = Vec::with_capacity(g.words.len());
    for (w, &wt) in g.words.iter().zip(&g.weights) {
        let tail = g.cylinder_measure(&w[1..]);
        if !(tail > 0.0) || !(wt > 0.0) {
            return Err(Error::ZeroMassCylinder);
        }
        let v = wt / tail;
        if !(v > 0.0) || v > 1.0 + 1e-6 {
            return Err(Error::ConstructionFailed(format!(
                "g-value {v} outside (0, 1]"
            )));
        }
        values.push(v.min(1.0));
    }
    Ok(GFunction {
        depth: g.depth,
        words: g.words.clone(),
        values,
        index: g.index.clone(),
    })
}

/// Local product density on the rectangle of the shared symbol:
/// ϱ(w⁻, w⁺) = ν̂(C_{w⁻·w⁺}) / (ν̂⁻(C_{w⁻})·ν̂⁺(C_{w⁺})) with all three
/// measures conditioned on that rectangle, which reduces to
/// ν(C_{w⁻·w⁺})·ν(A₀) / (ν(C_{w⁻})·ν(C_{w⁺})). This normalization makes
/// ϱ ≡ 1 for product measures and gives the marginal identity
/// Σ_{w⁻} ϱ·ν̂⁻(C_{w⁻}) = 1. `w_minus` must cover positions -k..0 and
/// `w_plus` positions 0..l with the same symbol at the shared position 0
/// (the distinguished rectangle, in the torus pipeline); k+l+1 must fit
/// inside the stored depth.
pub fn product_density(g: &GibbsApproximation, w_minus: &Word, w_plus: &Word) -> Result<f64> {
    if w_minus.offset + 1 != w_minus.symbols.len() || w_plus.offset != 0 {
        return Err(Error::InvalidInput(
            "w_minus must end at position 0 and w_plus start there".into(),
        ));
    }
    let joint = *w_minus.symbols.last().unwrap();
    if w_plus.symbols.first() != Some(&joint) {
        return Err(Error::InvalidInput(
            "words disagree at the shared position 0".into(),
        ));
    }
    let mut concat = w_minus.symbols.clone();
    concat.extend_from_slice(&w_plus.symbols[1..]);
    if concat.len() > g.depth {
        return Err(Error::InvalidInput(format!(
            "joint word length {} exceeds stored depth {}",
            concat.len(),
            g.depth
        )));
    }
    let joint_mass = g.cylinder_measure(&concat);
    let base_mass = g.cylinder_measure(&[joint]);
    let minus_mass = g.cylinder_measure(&w_minus.symbols);
    let plus_mass = g.cylinder_measure(&w_plus.symbols);
    if !(minus_mass > 0.0) || !(plus_mass > 0.0) || !(base_mass > 0.0) {
        return Err(Error::ZeroMassCylinder);
    }
    Ok(joint_mass * base_mass / (minus_mass * plus_mass))
}

/// Smallest C with C⁻¹ ≤ ν(C_w) / e^{S_nφ(x_w) − nP} ≤ C over all admissible
/// words of each listed length, with x_w the center of the word's decoded
/// cylinder and S_nφ summed along its true torus orbit. This is the Gibbs
/// property in textbook form; the word-function approximation enters only
/// through the measure itself, so C stabilizes quickly in n.
pub fn bowen_constant_exact(
    g: &GibbsApproximation,
    phi: &Potential,
    coding: &MarkovCoding,
    orders: &[usize],
) -> Result<f64> {
    let aut = coding.automorphism();
    let mut c = 1.0f64;
    for &n in orders {
        if n < 1 || n > g.depth {
            return Err(Error::InvalidInput(format!(
                "order {n} outside 1..=depth {}",
                g.depth
            )));
        }
        let mut masses: BTreeMap<&[u16], f64> = BTreeMap::new();
        for (w, &wt) in g.words.iter().zip(&g.weights) {
            *masses.entry(&w[..n]).or_insert(0.0) += wt;
        }
        for (w, &mass) in &masses {
            let word = Word {
                symbols: w.to_vec(),
                offset: 0,
            };
            let x = coding.decode(&word)?.center;
            let s = crate::potential::birkhoff_sum(phi, aut, x.into(), n);
            let ratio = mass / (s - n as f64 * g.pressure).exp();
            if ratio > 0.0 {
                c = c.max(ratio).max(1.0 / ratio);
            }
        }
    }
    Ok(c)
}

/// Smallest C with C⁻¹ ≤ ν(C_w) / e^{S_nψ(w) − nP} ≤ C over all admissible
/// words of each listed length. ψ along the word is summed over truncated
/// suffixes. A Gibbs measure keeps C bounded as n grows.
pub fn bowen_constant<F: Fn(&[u16]) -> f64>(
    g: &GibbsApproximation,
    psi: F,
    orders: &[usize],
) -> f64 {
    let mut c = 1.0f64;
    for &n in orders {
        assert!(n >= 1 && n <= g.depth, "order {n} outside 1..=depth");
        let mut masses: BTreeMap<&[u16], f64> = BTreeMap::new();
        for (w, &wt) in g.words.iter().zip(&g.weights) {
            *masses.entry(&w[..n]).or_insert(0.0) += wt;
        }
        for (w, &mass) in &masses {
            let mut s = 0.0;
            for j in 0..n {
                s += psi(&w[j..]);
            }
            let ratio = mass / (s - n as f64 * g.pressure).exp();
            if ratio > 0.0 {
                c = c.max(ratio).max(1.0 / ratio);
            }
        }
    }
    c
}

/// A torus potential as a word function: φ evaluated at the center of the
/// decoded cylinder with the window split around its midpoint. The middle
/// offset matters: it shrinks the cylinder in both the unstable and stable
/// directions, so the word function converges to φ∘π uniformly at rate
/// O(Lipschitz-norm · λ^{-len/2}). Anchoring the window at offset 0 instead
/// would leave the stable extent macroscopic and converge to the potential
/// collapsed onto a stable section, which has a genuinely different
/// pressure.
pub fn cylinder_potential<'a>(
    phi: &'a Potential,
    coding: &'a MarkovCoding,
) -> impl Fn(&[u16]) -> f64 + 'a {
    move |w: &[u16]| {
        let word = Word {
            symbols: w.to_vec(),
            offset: w.len() / 2,
        };
        let b = coding
            .decode_box(&word)
            .expect("admissible word must decode");
        phi.eval_f(coding.frame().to_torus(b.center()))
    }
}
