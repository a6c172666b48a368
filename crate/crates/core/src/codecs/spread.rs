use std::sync::Arc;

use super::{blocks_in, check_message_bits, check_received, Codec, CodecError};
use crate::channel::{ChannelParams, Codeword, ReceivedWord};
use crate::outer::OuterCode;

/// Concatenated code for delays combined with bit flips on the OR channel.
///
/// Each outer bit occupies a block of `D_max + 1` symbols: all zeros for 0,
/// a single leading 1 for 1. A block decodes to 1 iff anything nonzero was
/// received in it. A leading 1 delayed by at most `D_max` stays in its block.
#[derive(Debug, Clone)]
pub struct Spread {
    d_max: u64,
    flips_per_step: usize,
    outer: Arc<dyn OuterCode>,
}

impl Spread {
    pub fn new(d_max: u64, flips_per_step: usize, outer: Arc<dyn OuterCode>) -> Self {
        Self {
            d_max,
            flips_per_step,
            outer,
        }
    }

    pub fn d_max(&self) -> u64 {
        self.d_max
    }

    pub fn flips_per_step(&self) -> usize {
        self.flips_per_step
    }

    pub fn block_len(&self) -> usize {
        self.d_max as usize + 1
    }

    pub fn outer(&self) -> &Arc<dyn OuterCode> {
        &self.outer
    }

    fn check_channel(&self, ch: &ChannelParams) -> Result<usize, CodecError> {
        let blocks = blocks_in(ch, self.block_len())?;
        if blocks != self.outer.codeword_len() {
            return Err(CodecError::InvalidParams(format!(
                "{blocks} blocks but the outer code emits {} bits",
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
        let mut bits = vec![0u8; ch.codeword_len()];
        for (block, &b) in bits.chunks_mut(self.block_len()).zip(outer_bits) {
            block[0] = b;
        }
        Ok(Codeword::from_bits(bits).expect("binary"))
    }

    pub fn inner_decode(
        &self,
        y: &ReceivedWord,
        ch: &ChannelParams,
    ) -> Result<Vec<u8>, CodecError> {
        check_received(y, ch)?;
        self.check_channel(ch)?;
        Ok(y.values()
            .chunks(self.block_len())
            .map(|block| u8::from(block.iter().any(|&v| v > 0)))
            .collect())
    }
}

impl Codec for Spread {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{DelayBudget, Resolution};
    use crate::outer::Uncoded;

    fn channel(m: usize, t: usize) -> ChannelParams {
        ChannelParams::new(m, t, Resolution::Finite(1), DelayBudget::Max(3)).unwrap()
    }

    #[test]
    fn block_shapes() {
        let code = Spread::new(3, 1, Arc::new(Uncoded::new(2)));
        let ch = channel(8, 1);
        assert_eq!(
            code.encode(&vec![1, 0], &ch).unwrap().bits(),
            &[1, 0, 0, 0, 0, 0, 0, 0]
        );
        let code = Spread::new(1, 1, Arc::new(Uncoded::new(2)));
        let ch = channel(4, 1);
        assert_eq!(code.encode(&vec![1, 1], &ch).unwrap().bits(), &[1, 0, 1, 0]);
    }

    #[test]
    fn or_decisions() {
        let code = Spread::new(3, 1, Arc::new(Uncoded::new(1)));
        let ch = channel(4, 1);
        let d = |v: Vec<u32>| code.decode(&ReceivedWord::new(v), &ch).unwrap();
        assert_eq!(d(vec![0, 0, 1, 0]), vec![1]);
        assert_eq!(d(vec![0, 0, 0, 0]), vec![0]);
        assert_eq!(d(vec![1, 0, 1, 0]), vec![1]);
    }

    #[test]
    fn misaligned_blocks() {
        let code = Spread::new(2, 1, Arc::new(Uncoded::new(2)));
        assert!(matches!(
            code.encode(&vec![0, 0], &channel(8, 1)),
            Err(CodecError::BlockAlignment { .. })
        ));
    }
}
