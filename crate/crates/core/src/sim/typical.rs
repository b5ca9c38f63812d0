//! Robust joint typicality: every empirical frequency lies within a
//! multiplicative slack of its probability, and zero-probability tuples
//! never occur.

use crate::error::{domain, Result};
use crate::prob::ProbTensor;

/// Absolute slack on frequency comparisons, covering float rounding.
const FREQ_TOL: f64 = 1e-12;

/// A typicality test precompiled for one joint law.
#[derive(Debug, Clone)]
pub struct TypicalitySet {
    probs: Vec<f64>,
    sizes: Vec<usize>,
    eps: f64,
}

impl TypicalitySet {
    pub fn new(law: &ProbTensor, eps: f64) -> Result<Self> {
        if !law.is_joint() {
            return domain("typicality needs a joint law");
        }
        if !(eps.is_finite() && eps > 0.0) {
            return domain(format!("typicality slack must be positive, got {eps}"));
        }
        Ok(Self {
            probs: law.values().to_vec(),
            sizes: law.sizes().to_vec(),
            eps,
        })
    }

    /// `seqs[i]` runs over the law's axis `i`. Sequences of unequal length
    /// or out-of-range symbols are never typical.
    pub fn contains(&self, seqs: &[&[u16]]) -> bool {
        if seqs.len() != self.sizes.len() {
            return false;
        }
        let n = seqs.first().map_or(0, |s| s.len());
        if n == 0 || seqs.iter().any(|s| s.len() != n) {
            return false;
        }
        let mut counts = vec![0u32; self.probs.len()];
        for t in 0..n {
            let mut idx = 0;
            for (s, &size) in seqs.iter().zip(&self.sizes) {
                let sym = s[t] as usize;
                if sym >= size {
                    return false;
                }
                idx = idx * size + sym;
            }
            if self.probs[idx] == 0.0 {
                return false;
            }
            counts[idx] += 1;
        }
        let n = n as f64;
        self.probs
            .iter()
            .zip(&counts)
            .all(|(&p, &c)| (c as f64 / n - p).abs() <= self.eps * p + FREQ_TOL)
    }
}

/// One-shot form of [`TypicalitySet::contains`].
pub fn is_typical(seqs: &[&[u16]], law: &ProbTensor, eps: f64) -> bool {
    TypicalitySet::new(law, eps).is_ok_and(|set| set.contains(seqs))
}
