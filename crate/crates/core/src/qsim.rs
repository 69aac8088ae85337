//! Minimal dense statevector simulator.
//!
//! Only the gate families the partial-oracle search needs are implemented:
//! the Walsh-Hadamard transform, real per-qubit rotations, diagonal phases
//! over arbitrary basis-state predicates, a phase on |0...0>, and classical
//! reversible permutations of the basis. Amplitudes are double-precision
//! complex numbers; normalization is verified after every gate and a drift
//! beyond [`NORM_DRIFT_LIMIT`] is reported as an error instead of being
//! silently repaired.
//!
//! Bit convention: bit `j` (1-based, `1 <= j <= n`) of a basis-state integer
//! `x` is the j-th least significant bit, `(x >> (j - 1)) & 1`. Binary
//! strings in serialized output are rendered MSB first for readability.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Default ceiling on the qubit count (2^24 amplitudes, 256 MiB).
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Hard ceiling no configured limit can exceed (2^32 amplitudes).
pub const HARD_MAX_QUBITS: usize = 32;

/// Norm-squared drift beyond which operations refuse to continue.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// One-line statement of the bit convention, embedded in serialized reports.
pub const BIT_CONVENTION_NOTE: &str = "bit j is the j-th least significant bit \
of the basis-state integer; binary strings are displayed MSB first";

/// Dense state of `n_qubits` qubits: 2^n complex amplitudes indexed by
/// basis-state integer.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state |0...0>.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::zero_with_limit(n_qubits, DEFAULT_MAX_QUBITS)
    }

    /// Like [`StateVector::zero`] with an explicit qubit ceiling (itself
    /// capped at [`HARD_MAX_QUBITS`]).
    pub fn zero_with_limit(n_qubits: usize, limit: usize) -> Result<Self> {
        let limit = limit.min(HARD_MAX_QUBITS);
        if n_qubits < 1 || n_qubits > limit {
            return Err(Error::Capacity { n: n_qubits, limit });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Builds a state from raw amplitudes. The length must be a power of two
    /// and the norm must already be within [`NORM_DRIFT_LIMIT`] of 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() || dim > (1 << DEFAULT_MAX_QUBITS) {
            return Err(Error::Capacity {
                n: dim.max(1).ilog2() as usize,
                limit: DEFAULT_MAX_QUBITS,
            });
        }
        let sv = Self {
            n_qubits: dim.ilog2() as usize,
            amps,
        };
        sv.check_norm()?;
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, x: u64) -> Result<Complex64> {
        self.check_basis(x)?;
        Ok(self.amps[x as usize])
    }

    /// |amplitude_x|^2.
    pub fn probability_of(&self, x: u64) -> Result<f64> {
        self.check_basis(x)?;
        Ok(self.amps[x as usize].norm_sqr())
    }

    /// Total probability mass on the basis states selected by `member`.
    pub fn probability_mass<F: Fn(u64) -> bool>(&self, member: F) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(x, _)| member(*x as u64))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Hadamard on every qubit. Applying it twice restores the input.
    pub fn apply_walsh_hadamard(&mut self) -> Result<()> {
        let dim = self.amps.len();
        for q in 0..self.n_qubits {
            let mask = 1usize << q;
            for i in 0..dim {
                if i & mask == 0 {
                    let a = self.amps[i];
                    let b = self.amps[i | mask];
                    self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                    self.amps[i | mask] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        self.check_norm()
    }

    /// The self-adjoint rotation
    /// `[[cos(beta/2), sin(beta/2)], [sin(beta/2), -cos(beta/2)]]`
    /// on qubit `j` (1-based). `beta = pi/2` is the Hadamard gate.
    pub fn apply_bit_rotation(&mut self, j: usize, beta: f64) -> Result<()> {
        if j < 1 || j > self.n_qubits {
            return Err(Error::BitIndex {
                j,
                n: self.n_qubits,
            });
        }
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        let mask = 1usize << (j - 1);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a = self.amps[i];
                let b = self.amps[i | mask];
                self.amps[i] = a * c + b * s;
                self.amps[i | mask] = a * s - b * c;
            }
        }
        self.check_norm()
    }

    /// Multiplies `e^{i alpha}` onto every basis state selected by `member`.
    pub fn apply_diagonal_phase<F: Fn(u64) -> bool>(
        &mut self,
        member: F,
        alpha: f64,
    ) -> Result<()> {
        let phase = Complex64::from_polar(1.0, alpha);
        for (x, amp) in self.amps.iter_mut().enumerate() {
            if member(x as u64) {
                *amp *= phase;
            }
        }
        self.check_norm()
    }

    /// Multiplies `e^{i alpha}` onto the |0...0> amplitude only.
    pub fn apply_phase_on_zero(&mut self, alpha: f64) -> Result<()> {
        self.amps[0] *= Complex64::from_polar(1.0, alpha);
        self.check_norm()
    }

    /// Exact global phase flip (multiplies every amplitude by -1).
    pub fn negate(&mut self) {
        for amp in &mut self.amps {
            *amp = -*amp;
        }
    }

    /// Relabels the basis by the bijection `map`: the amplitude of `x` moves
    /// to `map(x)`. Classical reversible circuits (CNOT ladders, bit swaps)
    /// are applied through this primitive.
    pub fn permute_basis<F: Fn(u64) -> u64>(&mut self, map: F) -> Result<()> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (x, amp) in self.amps.iter().enumerate() {
            let target = map(x as u64);
            self.check_basis(target)?;
            out[target as usize] = *amp;
        }
        self.amps = out;
        // a non-bijective map drops amplitude mass and is caught here
        self.check_norm()
    }

    /// Draws `shots` basis states from the |amplitude|^2 distribution using a
    /// single uniform draw per shot against the cumulative distribution
    /// (recomputed once per call). Deterministic for a given generator state.
    pub fn sample_bits<R: Rng>(&self, shots: u64, rng: &mut R) -> Result<SampleCounts> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut total = 0.0;
        for a in &self.amps {
            total += a.norm_sqr();
            cdf.push(total);
        }
        let mut one_counts = vec![0u64; self.n_qubits];
        let mut histogram = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * total;
            let idx = cdf.partition_point(|&c| c <= u).min(self.amps.len() - 1);
            let x = idx as u64;
            *histogram.entry(x).or_insert(0u64) += 1;
            for (j, count) in one_counts.iter_mut().enumerate() {
                *count += (x >> j) & 1;
            }
        }
        Ok(SampleCounts {
            shots,
            one_counts,
            histogram,
        })
    }

    fn check_basis(&self, x: u64) -> Result<()> {
        if (x as usize) < self.amps.len() {
            Ok(())
        } else {
            Err(Error::BasisIndex {
                x,
                n: self.n_qubits,
            })
        }
    }

    fn check_norm(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        let drift = (norm_sqr - 1.0).abs();
        if drift > NORM_DRIFT_LIMIT {
            Err(Error::NormDrift { norm_sqr, drift })
        } else {
            Ok(())
        }
    }
}

/// Measurement statistics from [`StateVector::sample_bits`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCounts {
    pub shots: u64,
    /// `one_counts[k]` is the number of shots in which bit `k + 1` read 1.
    pub one_counts: Vec<u64>,
    /// Full outcome histogram keyed by basis-state integer.
    pub histogram: BTreeMap<u64, u64>,
}

impl SampleCounts {
    /// Most frequent outcome; ties resolve to the smallest basis state.
    pub fn modal_outcome(&self) -> Option<u64> {
        let mut best: Option<(u64, u64)> = None;
        for (&x, &count) in &self.histogram {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((x, count));
            }
        }
        best.map(|(x, _)| x)
    }
}
