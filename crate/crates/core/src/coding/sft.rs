//! Subshift of finite type on the partition alphabet.

use crate::error::{Error, Result};

const MIXING_CAP: usize = 50;

#[derive(Debug, Clone)]
pub struct Sft {
    pub alphabet_size: usize,
    pub transition: Vec<Vec<bool>>,
    /// Smallest n with all entries of transitionⁿ positive.
    pub mixing_power: usize,
}

impl Sft {
    pub fn new(transition: Vec<Vec<bool>>) -> Result<Self> {
        let k = transition.len();
        if k == 0 || transition.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidInput("transition matrix must be square".into()));
        }
        let mixing_power = mixing_power(&transition).ok_or(Error::NotMixing(MIXING_CAP))?;
        Ok(Sft {
            alphabet_size: k,
            transition,
            mixing_power,
        })
    }

    pub fn admits(&self, a: usize, b: usize) -> bool {
        self.transition[a][b]
    }

    pub fn is_admissible(&self, symbols: &[u16]) -> bool {
        symbols
            .windows(2)
            .all(|w| self.transition[w[0] as usize][w[1] as usize])
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.transition[a]
            .iter()
            .enumerate()
            .filter(|(_, &ok)| ok)
            .map(|(b, _)| b)
    }

    /// All admissible words of the given length, in lexicographic order.
    pub fn admissible_words(&self, len: usize) -> Vec<Vec<u16>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut words: Vec<Vec<u16>> = (0..self.alphabet_size).map(|a| vec![a as u16]).collect();
        for _ in 1..len {
            let mut next = Vec::with_capacity(words.len() * 2);
            for w in &words {
                for b in self.successors(*w.last().unwrap() as usize) {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.extend_from_slice(w);
                    v.push(b as u16);
                    next.push(v);
                }
            }
            words = next;
        }
        words
    }

    /// trace(Tⁿ): the number of cyclically admissible words of length n.
    pub fn trace_pow(&self, n: usize) -> Result<u128> {
        let k = self.alphabet_size;
        let mut acc: Vec<Vec<u128>> = (0..k)
            .map(|i| (0..k).map(|j| u128::from(i == j)).collect())
            .collect();
        let base: Vec<Vec<u128>> = self
            .transition
            .iter()
            .map(|row| row.iter().map(|&b| u128::from(b)).collect())
            .collect();
        for _ in 0..n {
            let mut next = vec![vec![0u128; k]; k];
            for i in 0..k {
                for l in 0..k {
                    if acc[i][l] == 0 {
                        continue;
                    }
                    for (j, cell) in next[i].iter_mut().enumerate() {
                        let add = acc[i][l]
                            .checked_mul(base[l][j])
                            .and_then(|p| cell.checked_add(p))
                            .ok_or_else(|| {
                                Error::InvalidInput(format!("trace power {n} overflows"))
                            })?;
                        *cell = add;
                    }
                }
            }
            acc = next;
        }
        Ok((0..k).map(|i| acc[i][i]).sum())
    }

    /// Perron root of the 0/1 transition matrix by power iteration.
    pub fn perron_root(&self) -> f64 {
        let k = self.alphabet_size;
        let mut v = vec![1.0f64; k];
        let mut root = 0.0;
        for _ in 0..20_000 {
            let mut w = vec![0.0f64; k];
            for (i, row) in self.transition.iter().enumerate() {
                for (j, &ok) in row.iter().enumerate() {
                    if ok {
                        w[j] += v[i];
                    }
                }
            }
            let norm: f64 = w.iter().sum::<f64>() / k as f64;
            for x in &mut w {
                *x /= norm;
            }
            if (norm - root).abs() <= 1e-14 * norm.abs() {
                return norm;
            }
            root = norm;
            v = w;
        }
        root
    }
}

/// Smallest n ≤ cap with Tⁿ strictly positive, via boolean matrix powers.
fn mixing_power(t: &[Vec<bool>]) -> Option<usize> {
    let k = t.len();
    let mut acc: Vec<Vec<bool>> = t.to_vec();
    for n in 1..=MIXING_CAP {
        if acc.iter().all(|row| row.iter().all(|&b| b)) {
            return Some(n);
        }
        let mut next = vec![vec![false; k]; k];
        for i in 0..k {
            for l in 0..k {
                if acc[i][l] {
                    for j in 0..k {
                        if t[l][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        acc = next;
    }
    None
}
