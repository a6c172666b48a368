use super::{check_bits, OuterCode, OuterError};
use crate::channel::Rational;

const MAX_MESSAGE_BITS: usize = 10;

/// Small binary linear code with exhaustive nearest-codeword decoding.
///
/// Every codeword is tabulated, so decoding compares against all
/// `2^message_len` of them. Intended as a reference, not for speed.
#[derive(Debug, Clone)]
pub struct MlLinearCode {
    message_len: usize,
    codeword_len: usize,
    tolerated: Rational,
    radius: usize,
    min_distance: usize,
    /// Indexed by the message read as an integer, bit `i` = message bit `i`.
    table: Vec<Vec<u8>>,
}

impl MlLinearCode {
    /// `generator` holds one row per message bit.
    pub fn new(generator: Vec<Vec<u8>>, tolerated: Rational) -> Result<Self, OuterError> {
        let message_len = generator.len();
        if message_len == 0 || message_len > MAX_MESSAGE_BITS {
            return Err(OuterError::InvalidParams(format!(
                "message length {message_len} outside 1..={MAX_MESSAGE_BITS}"
            )));
        }
        let codeword_len = generator[0].len();
        if codeword_len == 0 {
            return Err(OuterError::InvalidParams("empty generator rows".into()));
        }
        for row in &generator {
            check_bits(row, codeword_len)
                .map_err(|e| OuterError::InvalidParams(format!("generator row: {e}")))?;
        }

        let table: Vec<Vec<u8>> = (0..1usize << message_len)
            .map(|m| {
                let mut word = vec![0u8; codeword_len];
                for (i, row) in generator.iter().enumerate() {
                    if m >> i & 1 == 1 {
                        for (w, &g) in word.iter_mut().zip(row) {
                            *w ^= g;
                        }
                    }
                }
                word
            })
            .collect();
        // Linear code: minimum distance is the minimum nonzero weight.
        let min_distance = table[1..]
            .iter()
            .map(|w| w.iter().filter(|&&b| b == 1).count())
            .min()
            .unwrap_or(codeword_len);
        if min_distance == 0 {
            return Err(OuterError::InvalidParams(
                "generator is rank deficient".into(),
            ));
        }

        let radius = (tolerated * Rational::from_integer(codeword_len as u64))
            .floor()
            .to_integer() as usize;
        if 2 * radius >= min_distance {
            return Err(OuterError::InvalidParams(format!(
                "radius {radius} not below half the minimum distance {min_distance}"
            )));
        }
        Ok(Self {
            message_len,
            codeword_len,
            tolerated,
            radius,
            min_distance,
            table,
        })
    }

    /// A `[20, 4, 10]` code: the 15 nonzero columns of length 4 (simplex
    /// code) extended by the four unit columns and the all-ones column.
    /// Corrects every pattern of up to 4 flips, i.e. a 1/5 fraction.
    pub fn reference() -> Self {
        let mut columns: Vec<u8> = (1..16).collect();
        columns.extend([0b0001, 0b0010, 0b0100, 0b1000, 0b1111]);
        let generator = (0..4)
            .map(|r| columns.iter().map(|c| c >> r & 1).collect())
            .collect();
        Self::new(generator, Rational::new(1, 5)).expect("reference code parameters")
    }

    pub fn min_distance(&self) -> usize {
        self.min_distance
    }

    pub fn codewords(&self) -> &[Vec<u8>] {
        &self.table
    }
}

impl OuterCode for MlLinearCode {
    fn message_len(&self) -> usize {
        self.message_len
    }

    fn codeword_len(&self) -> usize {
        self.codeword_len
    }

    fn tolerated_fraction(&self) -> Rational {
        self.tolerated
    }

    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>, OuterError> {
        check_bits(msg, self.message_len)?;
        let index = msg
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
        Ok(self.table[index].clone())
    }

    fn decode(&self, received: &[u8]) -> Result<Vec<u8>, OuterError> {
        check_bits(received, self.codeword_len)?;
        let mut best: Option<(usize, usize)> = None;
        let mut tied = false;
        for (m, word) in self.table.iter().enumerate() {
            let dist = word.iter().zip(received).filter(|(a, b)| a != b).count();
            match best {
                Some((_, d)) if dist > d => {}
                Some((_, d)) if dist == d => tied = true,
                _ => {
                    best = Some((m, dist));
                    tied = false;
                }
            }
        }
        match best {
            Some((m, dist)) if dist <= self.radius && !tied => {
                Ok((0..self.message_len).map(|i| (m >> i & 1) as u8).collect())
            }
            Some((_, dist)) if dist <= self.radius => Err(OuterError::DecodeFailure("ambiguous")),
            _ => Err(OuterError::DecodeFailure(
                "no codeword within the decoding radius",
            )),
        }
    }
}
