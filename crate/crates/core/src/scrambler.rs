//! The scrambler search scenario: a reversible permute-and-XOR cipher.
//!
//! An instance hides an n-bit key `x_star`. Scrambling a candidate key `x`
//! means XORing it into the plaintext `p0` and permuting the bits; comparing
//! the result against the published ciphertext `c0` bit by bit (negated XOR)
//! yields the flag bits. Flag `j` is 1 exactly when bit `j` of the generated
//! ciphertext matches `c0`, so all flags are 1 only for the hidden key. The
//! per-bit flags are the partial match predicates the staged search consumes,
//! and because the cipher is a bijection, exactly `2^(n - ell)` keys satisfy
//! the first `ell` of them.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{sub_rng, STREAM_KEY, STREAM_PERM, STREAM_PLAINTEXT};

/// Enumeration helpers refuse to walk more than 2^20 keys.
pub const MAX_ENUMERATION_QUBITS: usize = 20;

/// Bit widths are limited by the u64 word the cipher operates on.
const MAX_KEY_BITS: usize = 63;

/// One scrambler instance. Immutable after construction and safe to share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScramblerSpec {
    n: usize,
    /// Output bit `i` (0-based) of the permutation reads input bit `perm[i]`.
    perm: Vec<usize>,
    p0: u64,
    x_star: u64,
    c0: u64,
    seed: Option<u64>,
}

/// Partial-oracle outputs for one candidate key, packed LSB first: bit `j`
/// of [`FlagState::bits`] is the result of the j-th match predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagState {
    bits: u64,
    n: usize,
}

impl FlagState {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True exactly when the candidate is the hidden key.
    pub fn is_all_ones(&self) -> bool {
        self.bits == low_mask(self.n)
    }
}

fn low_mask(bits: usize) -> u64 {
    (1u64 << bits) - 1
}

impl ScramblerSpec {
    /// A fresh instance with permutation, plaintext, and key drawn from
    /// named sub-streams of `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        Self::generate(n, seed, None, None)
    }

    /// Like [`ScramblerSpec::random`] with the hidden key fixed.
    pub fn with_key(n: usize, seed: u64, x_star: u64) -> Result<Self> {
        Self::generate(n, seed, Some(x_star), None)
    }

    /// Full-control generation: optional fixed key, optional separate seed
    /// for the bit permutation (plaintext and key still derive from `seed`).
    pub fn generate(
        n: usize,
        seed: u64,
        x_star: Option<u64>,
        perm_seed: Option<u64>,
    ) -> Result<Self> {
        check_width(n)?;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut sub_rng(perm_seed.unwrap_or(seed), STREAM_PERM));
        let p0 = sub_rng(seed, STREAM_PLAINTEXT).random::<u64>() & low_mask(n);
        let x_star = match x_star {
            Some(x) if x >= (1u64 << n) => return Err(Error::BasisIndex { x, n }),
            Some(x) => x,
            None => sub_rng(seed, STREAM_KEY).random::<u64>() & low_mask(n),
        };
        Self::assemble(n, perm, p0, x_star, Some(seed))
    }

    /// Builds an instance from explicit parts; `c0` is derived. `perm` maps
    /// 0-based positions: output bit `i` reads input bit `perm[i]`.
    pub fn from_parts(n: usize, perm: Vec<usize>, p0: u64, x_star: u64) -> Result<Self> {
        check_width(n)?;
        if p0 >= (1u64 << n) {
            return Err(Error::BasisIndex { x: p0, n });
        }
        if x_star >= (1u64 << n) {
            return Err(Error::BasisIndex { x: x_star, n });
        }
        Self::assemble(n, perm, p0, x_star, None)
    }

    fn assemble(
        n: usize,
        perm: Vec<usize>,
        p0: u64,
        x_star: u64,
        seed: Option<u64>,
    ) -> Result<Self> {
        if perm.len() != n || !is_bijection(&perm) {
            return Err(Error::InvalidPermutation { n });
        }
        let mut spec = Self {
            n,
            perm,
            p0,
            x_star,
            c0: 0,
            seed,
        };
        spec.c0 = spec.scram(x_star);
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p0(&self) -> u64 {
        self.p0
    }

    pub fn x_star(&self) -> u64 {
        self.x_star
    }

    pub fn c0(&self) -> u64 {
        self.c0
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Scrambled ciphertext for candidate key `x`: permute(p0 XOR x).
    /// Reversible in `x` for the fixed plaintext.
    pub fn scram(&self, x: u64) -> u64 {
        self.permute((self.p0 ^ x) & low_mask(self.n))
    }

    /// Inverse of [`ScramblerSpec::scram`]: un-permute, then XOR away `p0`.
    pub fn unscram(&self, c: u64) -> u64 {
        self.unpermute(c & low_mask(self.n)) ^ self.p0
    }

    /// Flag bits for `x`: negated XOR of the generated ciphertext with `c0`.
    pub fn flags(&self, x: u64) -> FlagState {
        FlagState {
            bits: !(self.scram(x) ^ self.c0) & low_mask(self.n),
            n: self.n,
        }
    }

    /// True when the first `ell` flags of `x` are all 1; `ell = 0` accepts
    /// every key.
    pub fn stage_member(&self, ell: usize, x: u64) -> Result<bool> {
        let mask = self.stage_mask(ell)?;
        Ok(self.flags(x).bits & mask == mask)
    }

    /// Mask selecting the first `ell` flag bits.
    pub fn stage_mask(&self, ell: usize) -> Result<u64> {
        if ell > self.n {
            return Err(Error::StageIndex { ell, n: self.n });
        }
        Ok(low_mask(ell))
    }

    /// Every key whose first `ell` flags are all 1, in ascending order.
    pub fn enumerate_target_set(&self, ell: usize) -> Result<Vec<u64>> {
        if self.n > MAX_ENUMERATION_QUBITS {
            return Err(Error::EnumerationBound {
                n: self.n,
                limit: MAX_ENUMERATION_QUBITS,
            });
        }
        let mask = self.stage_mask(ell)?;
        Ok((0..1u64 << self.n)
            .filter(|&x| self.flags(x).bits & mask == mask)
            .collect())
    }

    /// Serializable view of the instance.
    pub fn record(&self) -> ScramblerRecord {
        ScramblerRecord {
            bit_order: BIT_ORDER_TAG.to_string(),
            n: self.n,
            perm: self.perm.iter().map(|&p| p + 1).collect(),
            p0: bits_string(self.p0, self.n),
            x_star: bits_string(self.x_star, self.n),
            c0: bits_string(self.c0, self.n),
            seed: self.seed,
        }
    }

    /// Rebuilds an instance from its serialized record.
    pub fn from_record(record: &ScramblerRecord) -> Result<Self> {
        check_width(record.n)?;
        let perm = record
            .perm
            .iter()
            .map(|&p| {
                p.checked_sub(1).ok_or(Error::InvalidRecord {
                    field: "perm",
                    reason: "positions are 1-based".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let p0 = parse_bits(&record.p0, record.n, "p0")?;
        let x_star = parse_bits(&record.x_star, record.n, "x_star")?;
        let spec = Self::assemble(record.n, perm, p0, x_star, record.seed)?;
        let c0 = parse_bits(&record.c0, record.n, "c0")?;
        if spec.c0 != c0 {
            return Err(Error::InvalidRecord {
                field: "c0",
                reason: "does not equal scram(x_star)".into(),
            });
        }
        Ok(spec)
    }

    fn permute(&self, w: u64) -> u64 {
        let mut out = 0u64;
        for (i, &src) in self.perm.iter().enumerate() {
            out |= ((w >> src) & 1) << i;
        }
        out
    }

    fn unpermute(&self, w: u64) -> u64 {
        let mut out = 0u64;
        for (i, &src) in self.perm.iter().enumerate() {
            out |= ((w >> i) & 1) << src;
        }
        out
    }
}

fn check_width(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidInstance { n })
    } else if n > MAX_KEY_BITS {
        Err(Error::Capacity {
            n,
            limit: MAX_KEY_BITS,
        })
    } else {
        Ok(())
    }
}

fn is_bijection(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Tag documenting how binary strings in records are rendered.
pub const BIT_ORDER_TAG: &str = "msb_first_display";

fn bits_string(value: u64, n: usize) -> String {
    format!("{value:0n$b}")
}

fn parse_bits(s: &str, n: usize, field: &'static str) -> Result<u64> {
    if s.len() != n {
        return Err(Error::InvalidRecord {
            field,
            reason: format!("expected {n} binary digits, got {}", s.len()),
        });
    }
    u64::from_str_radix(s, 2).map_err(|e| Error::InvalidRecord {
        field,
        reason: e.to_string(),
    })
}

/// JSON-facing form of a [`ScramblerSpec`]. Binary strings are MSB first;
/// `perm` holds 1-based positions, entry `j` being the input bit read by
/// output bit `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScramblerRecord {
    pub bit_order: String,
    pub n: usize,
    pub perm: Vec<usize>,
    pub p0: String,
    pub x_star: String,
    pub c0: String,
    pub seed: Option<u64>,
}
