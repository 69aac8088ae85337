//! Bitwise modelled states.
//!
//! A modelled state is a product-state approximation of an intermediate
//! search state, one angle `beta_j` per bit with amplitudes
//! `cos(beta_j/2)|0> + sin(beta_j/2)|1>`. The model is estimated from shot
//! statistics, Bayes-clamped so a finite sample can never pin a bit
//! absolutely, and drives both the preparation rotation R(mu) and the
//! target-weight estimate for the next stage.
//!
//! Internally the per-bit probability of reading 1 is the primary datum and
//! `beta_j = 2 asin(sqrt(p_j))` is derived from it, keeping exact cases
//! (p = 0.5 for a uniform bit, 0 or 1 for an ideally pinned one) exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::StateVector;

/// Product-state model |mu>, immutable once constructed.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelledState {
    probs: Vec<f64>,
    p_min: f64,
    shots_used: u64,
}

impl ModelledState {
    /// The uniform model: every bit unbiased (`beta_j = pi/2`). Preparing it
    /// equals the Walsh-Hadamard transform of |0...0>.
    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![0.5; n],
            p_min: 0.0,
            shots_used: 0,
        }
    }

    /// Model from explicit per-bit probabilities of reading 1. No clamping
    /// is applied; pinned bits (0 or 1) are allowed.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyModel);
        }
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityDomain { p });
            }
        }
        Ok(Self {
            probs,
            p_min: 0.0,
            shots_used: 0,
        })
    }

    /// Model from explicit angles; `p_j = sin^2(beta_j / 2)`.
    pub fn from_betas(betas: &[f64]) -> Result<Self> {
        let probs = betas
            .iter()
            .map(|&b| {
                let s = (b / 2.0).sin();
                s * s
            })
            .collect();
        Self::from_probs(probs)
    }

    /// Estimates a model from per-bit one-counts over `shots` measurements.
    /// Each raw frequency is clamped into `[p_min, 1 - p_min]` with the
    /// Bayes floor `p_min = 1 / (1 + shots)`.
    pub fn estimate_from_counts(one_counts: &[u64], shots: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if one_counts.is_empty() {
            return Err(Error::EmptyModel);
        }
        let p_min = 1.0 / (1.0 + shots as f64);
        let mut probs = Vec::with_capacity(one_counts.len());
        for &count in one_counts {
            if count > shots {
                return Err(Error::CountRange { count, shots });
            }
            probs.push((count as f64 / shots as f64).clamp(p_min, 1.0 - p_min));
        }
        Ok(Self {
            probs,
            p_min,
            shots_used: shots,
        })
    }

    pub fn n_bits(&self) -> usize {
        self.probs.len()
    }

    /// Per-bit probabilities of reading 1; index `k` is bit `k + 1`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Rotation angles `beta_j = 2 asin(sqrt(p_j))`, branch fixed in [0, pi].
    pub fn betas(&self) -> Vec<f64> {
        self.probs.iter().map(|&p| 2.0 * p.sqrt().asin()).collect()
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn shots_used(&self) -> u64 {
        self.shots_used
    }

    /// Shannon entropy of the modelled distribution in bits. Additive over
    /// bits; pinned bits contribute 0 (limit convention), uniform bits 1.
    pub fn entropy(&self) -> f64 {
        self.probs.iter().map(|&p| binary_entropy(p)).sum()
    }

    /// Target-weight estimate for the stage targeting the first `ell` flags:
    /// `2^((n - ell) - H)`, clamped into `[2^-n, 1]`.
    pub fn estimate_lambda(&self, ell: usize) -> Result<f64> {
        let n = self.probs.len();
        if ell < 1 || ell > n {
            return Err(Error::StageIndex { ell, n });
        }
        let raw = ((n - ell) as f64 - self.entropy()).exp2();
        Ok(raw.clamp((-(n as f64)).exp2(), 1.0))
    }

    /// Applies R(mu), the product of per-bit rotations. R is self-adjoint,
    /// so the same call implements the inverse.
    pub fn apply_rotation(&self, sv: &mut StateVector) -> Result<()> {
        if sv.n_qubits() != self.probs.len() {
            return Err(Error::QubitMismatch {
                expected: self.probs.len(),
                actual: sv.n_qubits(),
            });
        }
        for (k, &p) in self.probs.iter().enumerate() {
            sv.apply_bit_rotation(k + 1, 2.0 * p.sqrt().asin())?;
        }
        Ok(())
    }

    /// R(mu)|0...0> = |mu>.
    pub fn prepare(&self) -> Result<StateVector> {
        let mut sv = StateVector::zero(self.probs.len())?;
        self.apply_rotation(&mut sv)?;
        Ok(sv)
    }

    /// Serializable view carrying the angles, the Bayes floor, and the shot
    /// count the model came from.
    pub fn record(&self) -> ModelRecord {
        ModelRecord {
            betas: self.betas(),
            p_min: self.p_min,
            shots_used: self.shots_used,
        }
    }
}

/// Binary entropy `-p log2 p - (1-p) log2 (1-p)` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2()) - (1.0 - p) * (1.0 - p).log2()
}

/// JSON-facing form of a [`ModelledState`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub betas: Vec<f64>,
    pub p_min: f64,
    pub shots_used: u64,
}
