//! Classical binary error-correcting codes used as the outer layer of the
//! concatenated constructions.

use std::fmt::Debug;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::channel::Rational;

mod ml;
mod rs;

pub use ml::MlLinearCode;
pub use rs::ReedSolomonCode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OuterError {
    #[error("expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("symbol at position {0} is not a bit")]
    NotABit(usize),
    #[error("outer decoding failed: {0}")]
    DecodeFailure(&'static str),
    #[error("invalid outer code: {0}")]
    InvalidParams(String),
}

/// A binary block code correcting a fixed fraction of adversarial bit flips.
pub trait OuterCode: Debug + Send + Sync {
    fn message_len(&self) -> usize;

    fn codeword_len(&self) -> usize;

    /// Fraction of the codeword's bits that may be flipped adversarially
    /// while decoding still succeeds.
    fn tolerated_fraction(&self) -> Rational;

    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>, OuterError>;

    /// Returns the unique message within the tolerated radius, or
    /// [`OuterError::DecodeFailure`].
    fn decode(&self, received: &[u8]) -> Result<Vec<u8>, OuterError>;

    /// `⌊δ_tol · n⌋`.
    fn tolerated_errors(&self) -> usize {
        (self.tolerated_fraction() * Rational::from_integer(self.codeword_len() as u64))
            .floor()
            .to_integer()
            .to_usize()
            .unwrap_or(usize::MAX)
    }

    fn rate(&self) -> f64 {
        self.message_len() as f64 / self.codeword_len() as f64
    }
}

pub(crate) fn check_bits(bits: &[u8], expected: usize) -> Result<(), OuterError> {
    if bits.len() != expected {
        return Err(OuterError::LengthMismatch {
            expected,
            found: bits.len(),
        });
    }
    if let Some(pos) = bits.iter().position(|&b| b > 1) {
        return Err(OuterError::NotABit(pos));
    }
    Ok(())
}

/// The identity code: no redundancy, no correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Uncoded {
    len: usize,
}

impl Uncoded {
    pub fn new(len: usize) -> Self {
        Self { len }
    }
}

impl OuterCode for Uncoded {
    fn message_len(&self) -> usize {
        self.len
    }

    fn codeword_len(&self) -> usize {
        self.len
    }

    fn tolerated_fraction(&self) -> Rational {
        Rational::from_integer(0)
    }

    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>, OuterError> {
        check_bits(msg, self.len)?;
        Ok(msg.to_vec())
    }

    fn decode(&self, received: &[u8]) -> Result<Vec<u8>, OuterError> {
        check_bits(received, self.len)?;
        Ok(received.to_vec())
    }
}
