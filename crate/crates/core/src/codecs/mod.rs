//! Encoder/decoder constructions for the delay channel.
//!
//! | codec         | budget | idea                                         |
//! |---------------|--------|----------------------------------------------|
//! | [`MaxUnary`]  | max    | a block's value is the number of 1s it holds |
//! | [`AvgConcat`] | avg    | outer code over `ℓ` 1s / `2ℓ` 0s inner blocks |
//! | [`FirstOne`]  | avg    | the message is the position of the first 1   |
//! | [`Spread`]    | max    | outer code over "1 then `D_max` 0s" blocks   |

use thiserror::Error;

use crate::channel::{ChannelParams, Codeword, ReceivedWord};
use crate::outer::OuterError;

mod avg_concat;
mod first_one;
mod max_unary;
mod spread;

pub use avg_concat::AvgConcat;
pub use first_one::FirstOne;
pub use max_unary::MaxUnary;
pub use spread::Spread;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("invalid codec parameters: {0}")]
    InvalidParams(String),
    #[error("message has {found} symbols, expected {expected}")]
    MessageLength { expected: usize, found: usize },
    #[error("received word has {found} symbols, expected {expected}")]
    ReceivedLength { expected: usize, found: usize },
    #[error("block length {block_len} does not divide the codeword length {total}")]
    BlockAlignment { block_len: usize, total: usize },
    #[error("message index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("message symbol {0} is not a bit")]
    NotABit(usize),
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error(transparent)]
    Outer(#[from] OuterError),
}

/// Shared encode/decode surface.
pub trait Codec {
    type Message: Clone + PartialEq + std::fmt::Debug;

    fn encode(&self, msg: &Self::Message, ch: &ChannelParams) -> Result<Codeword, CodecError>;

    fn decode(&self, y: &ReceivedWord, ch: &ChannelParams) -> Result<Self::Message, CodecError>;
}

pub(crate) fn blocks_in(ch: &ChannelParams, block_len: usize) -> Result<usize, CodecError> {
    let total = ch.codeword_len();
    if block_len == 0 || !total.is_multiple_of(block_len) {
        return Err(CodecError::BlockAlignment { block_len, total });
    }
    Ok(total / block_len)
}

pub(crate) fn check_received(y: &ReceivedWord, ch: &ChannelParams) -> Result<(), CodecError> {
    if y.len() != ch.codeword_len() {
        return Err(CodecError::ReceivedLength {
            expected: ch.codeword_len(),
            found: y.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_message_bits(msg: &[u8], expected: usize) -> Result<(), CodecError> {
    if msg.len() != expected {
        return Err(CodecError::MessageLength {
            expected,
            found: msg.len(),
        });
    }
    if let Some(p) = msg.iter().position(|&b| b > 1) {
        return Err(CodecError::NotABit(p));
    }
    Ok(())
}

/// Compares inner-code bits, returning the fraction that differ.
pub fn bit_error_fraction(sent: &[u8], decided: &[u8]) -> f64 {
    if sent.is_empty() {
        return 0.0;
    }
    let wrong = sent.iter().zip(decided).filter(|(a, b)| a != b).count();
    wrong as f64 / sent.len() as f64
}
