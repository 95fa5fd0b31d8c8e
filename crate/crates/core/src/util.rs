//! Small numeric helpers: wrap-around arithmetic, compensated sums,
//! log-sum-exp, and a deterministic low-discrepancy point source.

/// Reduce a real number to the fundamental domain `[0, 1)`.
pub fn mod1(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_integer(x: f64) -> f64 {
    let f = mod1(x);
    f.min(1.0 - f)
}

/// Neumaier-compensated accumulator. Summation order still matters for the
/// last bit, so callers that need partition-independent totals feed values in
/// a canonical order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `log(sum exp(x_i))` without overflow. Empty input yields `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add((v - m).exp());
    }
    m + acc.value().ln()
}

/// Kronecker sequence on the unit square driven by the plastic-number
/// constants; deterministic, well spread, and reproducible across runs.
/// `skip` offsets the start so independent samples can be drawn.
pub fn kronecker_points(count: usize, skip: u64) -> Vec<(f64, f64)> {
    // 1/phi_p and 1/phi_p^2 for the plastic number phi_p (root of x^3 = x + 1).
    const A1: f64 = 0.754_877_666_246_692_8;
    const A2: f64 = 0.569_840_290_998_053_2;
    (0..count)
        .map(|i| {
            let k = (i as u64 + skip + 1) as f64;
            (mod1(0.5 + k * A1), mod1(0.5 + k * A2))
        })
        .collect()
}
