use num_traits::ToPrimitive;

use super::{blocks_in, check_message_bits, check_received, Codec, CodecError};
use crate::channel::{ChannelParams, Codeword, Rational, ReceivedWord};

/// Unary block code for the max-bounded channel.
///
/// Each `log2 k`-bit chunk of the message, read as `v ∈ [0, k)`, becomes a
/// block of `2cM·log2 k` symbols whose first `v + 1` entries are 1. Any
/// delay up to `cM·log2 k` keeps those 1s inside their block and at most
/// `k` of them can collide, so the received block sum equals `v + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxUnary {
    c: Rational,
    m: usize,
    k: u32,
    bits_per_block: usize,
    block_len: usize,
}

impl MaxUnary {
    pub fn new(c: Rational, m: usize, k: u32) -> Result<Self, CodecError> {
        if k < 2 || !k.is_power_of_two() {
            return Err(CodecError::InvalidParams(format!(
                "k = {k} must be a power of two ≥ 2"
            )));
        }
        if *c.numer() == 0 {
            return Err(CodecError::InvalidParams("c must be positive".into()));
        }
        let bits_per_block = k.trailing_zeros() as usize;
        let len = c * Rational::from_integer((2 * m * bits_per_block) as u64);
        if !len.is_integer() {
            return Err(CodecError::InvalidParams(format!(
                "block length 2cM·log2 k = {len} is not an integer"
            )));
        }
        let block_len = len.to_integer().to_usize().unwrap_or(usize::MAX);
        if block_len < k as usize {
            return Err(CodecError::InvalidParams(format!(
                "block length {block_len} cannot hold k = {k} ones"
            )));
        }
        Ok(Self {
            c,
            m,
            k,
            bits_per_block,
            block_len,
        })
    }

    pub fn c(&self) -> Rational {
        self.c
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn bits_per_block(&self) -> usize {
        self.bits_per_block
    }

    /// Largest max-delay under which decoding is guaranteed: `cM·log2 k`.
    pub fn tolerated_delay(&self) -> u64 {
        (self.block_len / 2) as u64
    }

    pub fn payload_len(&self, ch: &ChannelParams) -> Result<usize, CodecError> {
        Ok(self.bits_per_block * blocks_in(ch, self.block_len)?)
    }

    fn check_channel(&self, ch: &ChannelParams) -> Result<usize, CodecError> {
        if ch.m() != self.m {
            return Err(CodecError::InvalidParams(format!(
                "codec built for M = {}, channel has M = {}",
                self.m,
                ch.m()
            )));
        }
        blocks_in(ch, self.block_len)
    }

    /// Per-block decisions before they are turned back into bits:
    /// the clamped count of received 1s, in `[1, k]`.
    pub fn block_counts(
        &self,
        y: &ReceivedWord,
        ch: &ChannelParams,
    ) -> Result<Vec<u32>, CodecError> {
        check_received(y, ch)?;
        self.check_channel(ch)?;
        Ok(y.values()
            .chunks(self.block_len)
            .map(|block| {
                let sum: u64 = block.iter().map(|&v| u64::from(v)).sum();
                sum.clamp(1, u64::from(self.k)) as u32
            })
            .collect())
    }
}

impl Codec for MaxUnary {
    type Message = Vec<u8>;

    fn encode(&self, msg: &Vec<u8>, ch: &ChannelParams) -> Result<Codeword, CodecError> {
        let blocks = self.check_channel(ch)?;
        check_message_bits(msg, blocks * self.bits_per_block)?;
        let mut bits = Vec::with_capacity(ch.codeword_len());
        for chunk in msg.chunks(self.bits_per_block) {
            let value = chunk.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
            let ones = value + 1;
            bits.extend(std::iter::repeat_n(1u8, ones));
            bits.extend(std::iter::repeat_n(0u8, self.block_len - ones));
        }
        Ok(Codeword::from_bits(bits).expect("unary blocks are binary"))
    }

    fn decode(&self, y: &ReceivedWord, ch: &ChannelParams) -> Result<Vec<u8>, CodecError> {
        let counts = self.block_counts(y, ch)?;
        let width = self.bits_per_block;
        Ok(counts
            .into_iter()
            .flat_map(|count| {
                let value = count - 1;
                (0..width).rev().map(move |i| (value >> i & 1) as u8)
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_delay, DelayBudget, DelaySchedule, Resolution};
    use proptest::prelude::*;

    fn channel(m: usize, t: usize, k: u32, dmax: u64) -> ChannelParams {
        ChannelParams::new(m, t, Resolution::Finite(k), DelayBudget::Max(dmax)).unwrap()
    }

    #[test]
    fn block_geometry() {
        let code = MaxUnary::new(Rational::new(1, 2), 64, 4).unwrap();
        assert_eq!(code.block_len(), 128);
        assert_eq!(code.bits_per_block(), 2);
        assert_eq!(code.tolerated_delay(), 64);
    }

    #[test]
    fn encode_value_plus_one_ones() {
        // k = 4, block_len = 16: c·M = 4
        let code = MaxUnary::new(Rational::new(1, 2), 8, 4).unwrap();
        assert_eq!(code.block_len(), 16);
        let ch = channel(8, 2, 4, 0);
        let one = code.encode(&vec![0, 0], &ch).unwrap();
        assert_eq!(
            one.bits()[..16],
            [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
        );
        let four = code.encode(&vec![1, 1], &ch).unwrap();
        assert_eq!(
            four.bits()[..16],
            [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
        );
    }

    #[test]
    fn encode_two_blocks_k2() {
        // k = 2, block_len = 8
        let code = MaxUnary::new(Rational::new(1, 2), 8, 2).unwrap();
        let ch = channel(8, 2, 2, 0);
        let c = code.encode(&vec![0, 1], &ch).unwrap();
        assert_eq!(c.bits(), &[1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn decode_examples() {
        let code = MaxUnary::new(Rational::new(1, 2), 8, 4).unwrap();
        let ch = channel(8, 2, 4, 0);
        let mut y = vec![0u32; 16];
        y[1] = 1;
        assert_eq!(code.decode(&ReceivedWord::new(y), &ch).unwrap(), vec![0, 0]);
        let mut y = vec![0u32; 16];
        y[7] = 4;
        assert_eq!(code.decode(&ReceivedWord::new(y), &ch).unwrap(), vec![1, 1]);
        // all-zero block clamps to y = 1
        let y = vec![0u32; 16];
        assert_eq!(code.decode(&ReceivedWord::new(y), &ch).unwrap(), vec![0, 0]);
        // impossible oversize sums clamp to k
        let y = vec![4u32; 16];
        assert_eq!(code.decode(&ReceivedWord::new(y), &ch).unwrap(), vec![1, 1]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(MaxUnary::new(Rational::new(1, 2), 8, 3).is_err());
        assert!(MaxUnary::new(Rational::new(1, 2), 8, 1).is_err());
        assert!(MaxUnary::new(Rational::new(1, 3), 8, 4).is_err());
        assert!(MaxUnary::new(Rational::new(1, 16), 8, 4).is_err());
        let code = MaxUnary::new(Rational::new(1, 2), 8, 4).unwrap();
        assert!(matches!(
            code.encode(&vec![0, 0, 0], &channel(8, 2, 4, 0)),
            Err(CodecError::MessageLength { .. })
        ));
        assert!(matches!(
            code.encode(&vec![0, 0], &channel(8, 3, 4, 0)),
            Err(CodecError::BlockAlignment { .. })
        ));
    }

    proptest! {
        #[test]
        fn survives_any_tolerated_max_delay(
            msg in prop::collection::vec(0u8..2, 4),
            delays in prop::collection::vec(0u64..=8, 64),
        ) {
            // M = 8, k = 4, c = 1: block 32, tolerated delay 16 > 8
            let code = MaxUnary::new(Rational::from_integer(1), 8, 4).unwrap();
            let ch = channel(8, 8, 4, 8);
            let c = code.encode(&msg, &ch).unwrap();
            let y = apply_delay(&c, &DelaySchedule::new(delays), &ch).unwrap();
            prop_assert_eq!(code.decode(&y, &ch).unwrap(), msg);
        }
    }
}
