//! Stage oracles.
//!
//! The production path is a diagonal phase on the key register alone: the
//! joint circuit uncomputes its work registers, so its net action on the key
//! register is `e^{i alpha}` on every member of the stage target set, which
//! we apply by evaluating the flag predicate per basis state. That keeps the
//! simulation at 2^n amplitudes instead of 2^(2n+1).
//!
//! The literal circuit (scramble onto a y register, flip an ancilla on the
//! first `ell` flags, phase the ancilla, then uncompute everything) is also
//! implemented, over the full `2n + 1` qubit register, and is used at small
//! `n` to verify the diagonal path against it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::StateVector;
use crate::scrambler::ScramblerSpec;

/// Joint-register simulation is limited to keys this wide (2n + 1 <= 13).
pub const MAX_FULL_CIRCUIT_QUBITS: usize = 6;

/// Phase oracle for one search stage. Applications are counted; the counter
/// belongs to the run that owns the oracle.
#[derive(Debug)]
pub struct StageOracle<'a> {
    spec: &'a ScramblerSpec,
    ell: usize,
    alpha: f64,
    queries: u64,
}

impl<'a> StageOracle<'a> {
    pub fn new(spec: &'a ScramblerSpec, ell: usize, alpha: f64) -> Result<Self> {
        // validates ell
        spec.stage_mask(ell)?;
        Ok(Self {
            spec,
            ell,
            alpha,
            queries: 0,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Oracle applications so far (each `apply*` call counts one query).
    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Diagonal fast path: multiplies `e^{i alpha}` onto every basis state
    /// whose first `ell` flags are all 1.
    pub fn apply(&mut self, sv: &mut StateVector) -> Result<()> {
        if sv.n_qubits() != self.spec.n() {
            return Err(Error::QubitMismatch {
                expected: self.spec.n(),
                actual: sv.n_qubits(),
            });
        }
        let spec = self.spec;
        let mask = spec.stage_mask(self.ell)?;
        sv.apply_diagonal_phase(|x| spec.flags(x).bits() & mask == mask, self.alpha)?;
        self.queries += 1;
        Ok(())
    }

    /// Literal circuit over the joint register (key bits 1..n, y bits
    /// n+1..2n, ancilla bit 2n+1): load the plaintext, scramble, compare
    /// against the negated ciphertext, flip the ancilla on the first `ell`
    /// flags, phase the ancilla, then uncompute in reverse. With y and
    /// ancilla starting at |0>, they return to |0> exactly and the key
    /// register picks up the same diagonal phase as [`StageOracle::apply`].
    pub fn apply_full_circuit(&mut self, joint: &mut StateVector) -> Result<()> {
        let n = self.spec.n();
        if n > MAX_FULL_CIRCUIT_QUBITS {
            return Err(Error::Capacity {
                n,
                limit: MAX_FULL_CIRCUIT_QUBITS,
            });
        }
        if joint.n_qubits() != 2 * n + 1 {
            return Err(Error::QubitMismatch {
                expected: 2 * n + 1,
                actual: joint.n_qubits(),
            });
        }
        let flag_mask = self.spec.stage_mask(self.ell)?;
        let ancilla = 1u64 << (2 * n);

        self.scramble_registers(joint, false)?;
        self.flip_ancilla_on_flags(joint, flag_mask)?;
        joint.apply_diagonal_phase(|i| i & ancilla != 0, self.alpha)?;
        self.flip_ancilla_on_flags(joint, flag_mask)?;
        self.scramble_registers(joint, true)?;

        self.queries += 1;
        Ok(())
    }

    /// Forward: y <- perm(y XOR p0 XOR x) XOR NOT(c0). Starting from y = 0
    /// this leaves the flag bits of x in the y register.
    fn scramble_registers(&self, joint: &mut StateVector, inverse: bool) -> Result<()> {
        let n = self.spec.n();
        let spec = self.spec;
        let x_mask = (1u64 << n) - 1;
        let c0_bar = !spec.c0() & x_mask;
        joint.permute_basis(|i| {
            let x = i & x_mask;
            let y = (i >> n) & x_mask;
            let rest = i & !(x_mask << n);
            let y_new = if inverse {
                spec.unscram(y ^ c0_bar) ^ x
            } else {
                spec.scram(y ^ x) ^ c0_bar
            };
            rest | (y_new << n)
        })
    }

    /// Multi-controlled X: flips the ancilla when the first `ell` y bits are
    /// all 1. An empty control set (ell = 0) flips unconditionally.
    fn flip_ancilla_on_flags(&self, joint: &mut StateVector, flag_mask: u64) -> Result<()> {
        let n = self.spec.n();
        let ancilla = 1u64 << (2 * n);
        joint.permute_basis(|i| {
            let y = (i >> n) & ((1u64 << n) - 1);
            if y & flag_mask == flag_mask {
                i ^ ancilla
            } else {
                i
            }
        })
    }
}

/// Embeds a key-register state into the joint register with y and ancilla
/// at |0>.
pub fn embed_x_register(x_state: &StateVector) -> Result<StateVector> {
    let n = x_state.n_qubits();
    if n > MAX_FULL_CIRCUIT_QUBITS {
        return Err(Error::Capacity {
            n,
            limit: MAX_FULL_CIRCUIT_QUBITS,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (2 * n + 1)];
    amps[..1 << n].copy_from_slice(x_state.amplitudes());
    StateVector::from_amplitudes(amps)
}

/// Extracts the key-register block (y = 0, ancilla = 0) of a joint state and
/// the probability mass left outside it. A disentangled output has zero
/// residual and the block is the reduced key-register state.
pub fn reduced_x_register(joint: &StateVector, n: usize) -> Result<(Vec<Complex64>, f64)> {
    if joint.n_qubits() != 2 * n + 1 {
        return Err(Error::QubitMismatch {
            expected: 2 * n + 1,
            actual: joint.n_qubits(),
        });
    }
    let block = joint.amplitudes()[..1 << n].to_vec();
    let inside: f64 = block.iter().map(Complex64::norm_sqr).sum();
    Ok((block, joint.norm_sqr() - inside))
}
