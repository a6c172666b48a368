use num_traits::ToPrimitive;

use super::{check_received, Codec, CodecError};
use crate::channel::{ChannelParams, Codeword, Rational, ReceivedWord};

/// Position-of-first-1 code.
///
/// Codeword `i` opens with `i·Mc′` zeros followed by `M − i·Mc′` ones and is
/// silent for the remaining `T − 1` macro-steps. The decoder reads the
/// 1-based position `L` of the leftmost nonzero symbol and answers the
/// largest `i` with `i·Mc′ ≤ L`. Confusing codeword `i` with `i + 1` means
/// shifting the first `Mc′` ones each past the old front, which costs
/// `1 + 2 + … + Mc′` units of delay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOne {
    c_prime: Rational,
    m: usize,
    step: usize,
    num_codewords: usize,
}

impl FirstOne {
    /// `step = M·c′` must be an integer ≥ 2, and `⌊1/c′⌋ − 1 ≥ 1`.
    pub fn new(c_prime: Rational, m: usize) -> Result<Self, CodecError> {
        if *c_prime.numer() == 0 {
            return Err(CodecError::InvalidParams("c′ must be positive".into()));
        }
        let step = c_prime * Rational::from_integer(m as u64);
        if !step.is_integer() || step.to_integer() < 2 {
            return Err(CodecError::InvalidParams(format!(
                "M·c′ = {step} must be an integer ≥ 2"
            )));
        }
        let num_codewords = c_prime
            .recip()
            .floor()
            .to_integer()
            .to_usize()
            .unwrap_or(0)
            .saturating_sub(1);
        if num_codewords == 0 {
            return Err(CodecError::InvalidParams(format!(
                "c′ = {c_prime} leaves no non-degenerate codeword"
            )));
        }
        Ok(Self {
            c_prime,
            m,
            step: step.to_integer() as usize,
            num_codewords,
        })
    }

    pub fn c_prime(&self) -> Rational {
        self.c_prime
    }

    /// `c = 2c′²`.
    pub fn c(&self) -> Rational {
        Rational::from_integer(2) * self.c_prime * self.c_prime
    }

    /// The average-delay bound `cM − 1` the construction is stated for,
    /// floored at zero.
    pub fn nominal_avg_delay(&self) -> Rational {
        let cm = self.c() * Rational::from_integer(self.m as u64);
        if cm >= Rational::from_integer(1) {
            cm - Rational::from_integer(1)
        } else {
            Rational::from_integer(0)
        }
    }

    /// `M·c′`.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn num_codewords(&self) -> usize {
        self.num_codewords
    }

    /// Exact cost of shifting the leftmost 1 by `M·c′`: `Σ_{j=1}^{Mc′} j`.
    pub fn confusion_cost(&self) -> u64 {
        let s = self.step as u64;
        s * (s + 1) / 2
    }

    /// The codebook as a list, codeword `i` at index `i − 1`.
    pub fn codebook(&self, ch: &ChannelParams) -> Result<Vec<Codeword>, CodecError> {
        (1..=self.num_codewords)
            .map(|i| self.encode(&i, ch))
            .collect()
    }
}

impl Codec for FirstOne {
    type Message = usize;

    fn encode(&self, index: &usize, ch: &ChannelParams) -> Result<Codeword, CodecError> {
        let i = *index;
        if i == 0 || i > self.num_codewords {
            return Err(CodecError::IndexOutOfRange {
                index: i,
                max: self.num_codewords,
            });
        }
        if ch.m() != self.m {
            return Err(CodecError::InvalidParams(format!(
                "codec built for M = {}, channel has M = {}",
                self.m,
                ch.m()
            )));
        }
        let zeros = i * self.step;
        let mut bits = vec![0u8; ch.codeword_len()];
        bits[zeros..self.m].fill(1);
        Ok(Codeword::from_bits(bits).expect("binary"))
    }

    fn decode(&self, y: &ReceivedWord, ch: &ChannelParams) -> Result<usize, CodecError> {
        check_received(y, ch)?;
        let leftmost = y
            .values()
            .iter()
            .position(|&v| v > 0)
            .ok_or_else(|| CodecError::DecodeFailure("no 1 was received".into()))?;
        let l = leftmost + 1;
        Ok((l / self.step).clamp(1, self.num_codewords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{DelayBudget, Resolution};

    fn setup() -> (FirstOne, ChannelParams) {
        let code = FirstOne::new(Rational::new(1, 4), 16).unwrap();
        let ch = ChannelParams::new(
            16,
            2,
            Resolution::Finite(1),
            DelayBudget::Avg(Rational::from_integer(1)),
        )
        .unwrap();
        (code, ch)
    }

    #[test]
    fn parameters() {
        let (code, _) = setup();
        assert_eq!(code.step(), 4);
        assert_eq!(code.num_codewords(), 3);
        assert_eq!(code.c(), Rational::new(1, 8));
        assert_eq!(code.nominal_avg_delay(), Rational::from_integer(1));
        assert_eq!(code.confusion_cost(), 10);
    }

    #[test]
    fn encode_examples() {
        let (code, ch) = setup();
        let c1 = code.encode(&1, &ch).unwrap();
        assert_eq!(
            c1.bits()[..16],
            [0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]
        );
        assert!(c1.bits()[16..].iter().all(|&b| b == 0));
        let c3 = code.encode(&3, &ch).unwrap();
        assert_eq!(
            c3.bits()[..16],
            [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1]
        );
        // i = 4 would be all zeros and is excluded
        assert_eq!(
            code.encode(&4, &ch),
            Err(CodecError::IndexOutOfRange { index: 4, max: 3 })
        );
        assert!(code.encode(&0, &ch).is_err());
    }

    #[test]
    fn decode_examples() {
        let (code, ch) = setup();
        let at = |pos_1based: usize| {
            let mut v = vec![0u32; 32];
            v[pos_1based - 1] = 1;
            code.decode(&ReceivedWord::new(v), &ch)
        };
        assert_eq!(at(5), Ok(1));
        assert_eq!(at(12), Ok(3));
        assert_eq!(at(8), Ok(2));
        assert!(matches!(
            code.decode(&ReceivedWord::new(vec![0; 32]), &ch),
            Err(CodecError::DecodeFailure(_))
        ));
    }

    #[test]
    fn rejects_step_below_two() {
        assert!(FirstOne::new(Rational::new(1, 16), 16).is_err());
        assert!(FirstOne::new(Rational::new(1, 2), 16).is_ok());
        assert!(FirstOne::new(Rational::new(2, 3), 3).is_err());
    }
}
