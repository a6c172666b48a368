use std::sync::Arc;

use num_traits::ToPrimitive;

use super::{blocks_in, check_message_bits, check_received, Codec, CodecError};
use crate::channel::{ChannelParams, Codeword, Rational, ReceivedWord};
use crate::outer::OuterCode;

/// Concatenated code for the average-bounded channel.
///
/// The outer code's bits are expanded into inner blocks of length `2ℓ`:
/// a 0 becomes `2ℓ` zeros, a 1 becomes `ℓ` ones followed by `ℓ` zeros.
/// The receiver sums each inner block (`γ`) and decides 1 iff
/// `γ ≥ √(ℓk)`, then runs the outer decoder.
#[derive(Debug, Clone)]
pub struct AvgConcat {
    c: Rational,
    m: usize,
    ell: usize,
    k: u32,
    outer: Arc<dyn OuterCode>,
}

impl AvgConcat {
    /// `ℓ = cM` must be a positive integer.
    pub fn new(
        c: Rational,
        m: usize,
        k: u32,
        outer: Arc<dyn OuterCode>,
    ) -> Result<Self, CodecError> {
        if k == 0 {
            return Err(CodecError::InvalidParams("k must be positive".into()));
        }
        let ell = c * Rational::from_integer(m as u64);
        if !ell.is_integer() || ell.to_integer() == 0 {
            return Err(CodecError::InvalidParams(format!(
                "ℓ = cM = {ell} must be a positive integer"
            )));
        }
        Ok(Self {
            c,
            m,
            ell: ell.to_integer().to_usize().unwrap_or(usize::MAX),
            k,
            outer,
        })
    }

    pub fn c(&self) -> Rational {
        self.c
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn inner_block_len(&self) -> usize {
        2 * self.ell
    }

    pub fn outer(&self) -> &Arc<dyn OuterCode> {
        &self.outer
    }

    /// `√(ℓk)`, for reporting.
    pub fn threshold(&self) -> f64 {
        ((self.ell as f64) * f64::from(self.k)).sqrt()
    }

    /// Decision rule `γ ≥ √(ℓk)`, evaluated exactly as `γ² ≥ ℓk`.
    pub fn decides_one(&self, gamma: u64) -> bool {
        u128::from(gamma) * u128::from(gamma) >= self.ell as u128 * u128::from(self.k)
    }

    fn check_channel(&self, ch: &ChannelParams) -> Result<usize, CodecError> {
        if ch.m() != self.m {
            return Err(CodecError::InvalidParams(format!(
                "codec built for M = {}, channel has M = {}",
                self.m,
                ch.m()
            )));
        }
        let blocks = blocks_in(ch, self.inner_block_len())?;
        if blocks != self.outer.codeword_len() {
            return Err(CodecError::InvalidParams(format!(
                "{blocks} inner blocks but the outer code emits {} bits",
                self.outer.codeword_len()
            )));
        }
        Ok(blocks)
    }

    pub fn inner_encode(
        &self,
        outer_bits: &[u8],
        ch: &ChannelParams,
    ) -> Result<Codeword, CodecError> {
        let blocks = self.check_channel(ch)?;
        check_message_bits(outer_bits, blocks)?;
        let mut bits = Vec::with_capacity(ch.codeword_len());
        for &b in outer_bits {
            bits.extend(std::iter::repeat_n(b, self.ell));
            bits.extend(std::iter::repeat_n(0u8, self.ell));
        }
        Ok(Codeword::from_bits(bits).expect("inner blocks are binary"))
    }

    /// Per-block received weight `γ(i)`.
    pub fn gammas(&self, y: &ReceivedWord, ch: &ChannelParams) -> Result<Vec<u64>, CodecError> {
        check_received(y, ch)?;
        self.check_channel(ch)?;
        Ok(y.values()
            .chunks(self.inner_block_len())
            .map(|b| b.iter().map(|&v| u64::from(v)).sum())
            .collect())
    }

    pub fn inner_decode(
        &self,
        y: &ReceivedWord,
        ch: &ChannelParams,
    ) -> Result<Vec<u8>, CodecError> {
        Ok(self
            .gammas(y, ch)?
            .into_iter()
            .map(|g| u8::from(self.decides_one(g)))
            .collect())
    }
}

impl Codec for AvgConcat {
    type Message = Vec<u8>;

    fn encode(&self, msg: &Vec<u8>, ch: &ChannelParams) -> Result<Codeword, CodecError> {
        self.check_channel(ch)?;
        check_message_bits(msg, self.outer.message_len())?;
        let outer_bits = self.outer.encode(msg)?;
        self.inner_encode(&outer_bits, ch)
    }

    fn decode(&self, y: &ReceivedWord, ch: &ChannelParams) -> Result<Vec<u8>, CodecError> {
        let inner = self.inner_decode(y, ch)?;
        Ok(self.outer.decode(&inner)?)
    }
}
