//! Reed–Solomon over GF(2^8) with bounded-distance decoding
//! (Berlekamp–Massey, Chien search, Forney).
//!
//! Bits are packed eight to a symbol, most significant bit first, so a
//! flipped bit corrupts exactly one symbol.

use super::{check_bits, OuterCode, OuterError};
use crate::channel::Rational;

const PRIMITIVE: u16 = 0x11d;

struct Gf {
    exp: [u8; 512],
    log: [u8; 256],
}

static GF: std::sync::LazyLock<Gf> = std::sync::LazyLock::new(|| {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    for (i, e) in exp.iter_mut().enumerate().take(255) {
        *e = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= PRIMITIVE;
        }
    }
    for i in 255..512 {
        exp[i] = exp[i - 255];
    }
    Gf { exp, log }
});

fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    let g = &*GF;
    g.exp[g.log[a as usize] as usize + g.log[b as usize] as usize]
}

fn inv(a: u8) -> u8 {
    debug_assert!(a != 0);
    let g = &*GF;
    g.exp[255 - g.log[a as usize] as usize]
}

fn alpha_pow(e: usize) -> u8 {
    GF.exp[e % 255]
}

/// Evaluates a polynomial stored highest degree first.
fn eval_high_first(poly: &[u8], x: u8) -> u8 {
    poly.iter().fold(0, |acc, &c| mul(acc, x) ^ c)
}

/// Evaluates a polynomial stored lowest degree first.
fn eval_low_first(poly: &[u8], x: u8) -> u8 {
    poly.iter().rev().fold(0, |acc, &c| mul(acc, x) ^ c)
}

/// Systematic RS code with `data` message symbols and `parity` check
/// symbols, correcting up to `parity / 2` symbol errors.
#[derive(Debug, Clone)]
pub struct ReedSolomonCode {
    data: usize,
    parity: usize,
    /// Generator `Π (x - α^i)`, highest degree first, monic.
    generator: Vec<u8>,
}

impl ReedSolomonCode {
    pub fn new(data: usize, parity: usize) -> Result<Self, OuterError> {
        if data == 0 || parity == 0 || data + parity > 255 {
            return Err(OuterError::InvalidParams(format!(
                "need data ≥ 1, parity ≥ 1 and data + parity ≤ 255, got {data} + {parity}"
            )));
        }
        let mut generator = vec![1u8];
        for i in 0..parity {
            let root = alpha_pow(i);
            let mut next = vec![0u8; generator.len() + 1];
            for (j, &g) in generator.iter().enumerate() {
                next[j] ^= g;
                next[j + 1] ^= mul(g, root);
            }
            generator = next;
        }
        Ok(Self {
            data,
            parity,
            generator,
        })
    }

    /// Smallest code whose bit-error tolerance is at least `fraction` for a
    /// message of `message_bits` bits (rounded up to whole symbols).
    pub fn for_fraction(message_bits: usize, fraction: Rational) -> Result<Self, OuterError> {
        let data = message_bits.div_ceil(8).max(1);
        for parity in (2..=255 - data).step_by(2) {
            let code = Self::new(data, parity)?;
            if code.tolerated_fraction() >= fraction {
                return Ok(code);
            }
        }
        Err(OuterError::InvalidParams(format!(
            "no GF(256) code with {data} data symbols reaches the requested tolerance"
        )))
    }

    /// Code filling exactly `codeword_bits` bits with the least parity that
    /// reaches `fraction`.
    pub fn for_codeword_bits(codeword_bits: usize, fraction: Rational) -> Result<Self, OuterError> {
        if !codeword_bits.is_multiple_of(8) || codeword_bits == 0 || codeword_bits / 8 > 255 {
            return Err(OuterError::InvalidParams(format!(
                "{codeword_bits} bits is not 1..=255 whole GF(256) symbols"
            )));
        }
        let n = codeword_bits / 8;
        for parity in (2..n).step_by(2) {
            let code = Self::new(n - parity, parity)?;
            if code.tolerated_fraction() >= fraction {
                return Ok(code);
            }
        }
        Err(OuterError::InvalidParams(format!(
            "no {n}-symbol code reaches the requested tolerance"
        )))
    }

    pub fn data_symbols(&self) -> usize {
        self.data
    }

    pub fn parity_symbols(&self) -> usize {
        self.parity
    }

    pub fn symbol_capacity(&self) -> usize {
        self.parity / 2
    }

    fn n(&self) -> usize {
        self.data + self.parity
    }

    pub fn encode_symbols(&self, msg: &[u8]) -> Vec<u8> {
        debug_assert_eq!(msg.len(), self.data);
        let mut rem = vec![0u8; self.parity];
        for &m in msg {
            let factor = m ^ rem[0];
            rem.rotate_left(1);
            *rem.last_mut().unwrap() = 0;
            if factor != 0 {
                for (r, &g) in rem.iter_mut().zip(&self.generator[1..]) {
                    *r ^= mul(g, factor);
                }
            }
        }
        let mut out = msg.to_vec();
        out.extend(rem);
        out
    }

    fn syndromes(&self, word: &[u8]) -> Vec<u8> {
        (0..self.parity)
            .map(|j| eval_high_first(word, alpha_pow(j)))
            .collect()
    }

    /// Corrects `word` in place; returns the number of symbols fixed.
    pub fn correct_symbols(&self, word: &mut [u8]) -> Result<usize, OuterError> {
        let n = self.n();
        if word.len() != n {
            return Err(OuterError::LengthMismatch {
                expected: n,
                found: word.len(),
            });
        }
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(0);
        }

        // Berlekamp–Massey; polynomials lowest degree first.
        let mut lambda = vec![1u8];
        let mut prev = vec![1u8];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut prev_disc = 1u8;
        for step in 0..self.parity {
            let mut disc = synd[step];
            for i in 1..=l.min(lambda.len() - 1) {
                disc ^= mul(lambda[i], synd[step - i]);
            }
            if disc == 0 {
                shift += 1;
                continue;
            }
            let coef = mul(disc, inv(prev_disc));
            let mut updated = lambda.clone();
            if updated.len() < prev.len() + shift {
                updated.resize(prev.len() + shift, 0);
            }
            for (i, &b) in prev.iter().enumerate() {
                updated[i + shift] ^= mul(coef, b);
            }
            if 2 * l <= step {
                prev = std::mem::replace(&mut lambda, updated);
                l = step + 1 - l;
                prev_disc = disc;
                shift = 1;
            } else {
                lambda = updated;
                shift += 1;
            }
        }
        while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
            lambda.pop();
        }
        let degree = lambda.len() - 1;
        if degree != l || degree > self.symbol_capacity() {
            return Err(OuterError::DecodeFailure("too many symbol errors"));
        }

        // Chien search over the (possibly shortened) positions.
        let mut positions = Vec::with_capacity(degree);
        for pos in 0..n {
            let locator_exp = n - 1 - pos;
            let x_inv = alpha_pow(255 - locator_exp % 255);
            if eval_low_first(&lambda, x_inv) == 0 {
                positions.push(pos);
            }
        }
        if positions.len() != degree {
            return Err(OuterError::DecodeFailure(
                "error locator has no matching roots",
            ));
        }

        // Forney: e = X · Ω(X⁻¹) / Λ'(X⁻¹) for first consecutive root α^0.
        let mut omega = vec![0u8; self.parity];
        for (i, &s) in synd.iter().enumerate() {
            for (j, &c) in lambda.iter().enumerate() {
                if i + j < self.parity {
                    omega[i + j] ^= mul(s, c);
                }
            }
        }
        let derivative: Vec<u8> = lambda
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();
        for &pos in &positions {
            let x = alpha_pow(n - 1 - pos);
            let x_inv = inv(x);
            let denom = eval_low_first(&derivative, x_inv);
            if denom == 0 {
                return Err(OuterError::DecodeFailure("degenerate error locator"));
            }
            let magnitude = mul(x, mul(eval_low_first(&omega, x_inv), inv(denom)));
            word[pos] ^= magnitude;
        }
        if self.syndromes(word).iter().any(|&s| s != 0) {
            return Err(OuterError::DecodeFailure(
                "correction did not yield a codeword",
            ));
        }
        Ok(degree)
    }
}

fn pack(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | b << (7 - i))
        })
        .collect()
}

fn unpack(symbols: &[u8]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|&s| (0..8).map(move |i| s >> (7 - i) & 1))
        .collect()
}

impl OuterCode for ReedSolomonCode {
    fn message_len(&self) -> usize {
        8 * self.data
    }

    fn codeword_len(&self) -> usize {
        8 * self.n()
    }

    /// Each bit error costs at most one symbol, so `⌊parity/2⌋` symbol
    /// errors bound the bit errors.
    fn tolerated_fraction(&self) -> Rational {
        Rational::new(self.symbol_capacity() as u64, self.codeword_len() as u64)
    }

    fn encode(&self, msg: &[u8]) -> Result<Vec<u8>, OuterError> {
        check_bits(msg, self.message_len())?;
        Ok(unpack(&self.encode_symbols(&pack(msg))))
    }

    fn decode(&self, received: &[u8]) -> Result<Vec<u8>, OuterError> {
        check_bits(received, self.codeword_len())?;
        let mut word = pack(received);
        self.correct_symbols(&mut word)?;
        Ok(unpack(&word[..self.data]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_inverse() {
        for a in 1..=255u8 {
            assert_eq!(mul(a, inv(a)), 1);
        }
    }

    #[test]
    fn codewords_have_zero_syndromes() {
        let code = ReedSolomonCode::new(10, 6).unwrap();
        let msg: Vec<u8> = (0..10).map(|i| i * 17 + 3).collect();
        let word = code.encode_symbols(&msg);
        assert_eq!(&word[..10], &msg[..]);
        assert!(code.syndromes(&word).iter().all(|&s| s == 0));
    }

    #[test]
    fn corrects_up_to_capacity_symbol_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (data, parity) in [(1, 2), (8, 8), (20, 11), (200, 55)] {
            let code = ReedSolomonCode::new(data, parity).unwrap();
            for _ in 0..200 {
                let msg: Vec<u8> = (0..data).map(|_| rng.random()).collect();
                let clean = code.encode_symbols(&msg);
                let mut word = clean.clone();
                let errors = rng.random_range(0..=code.symbol_capacity());
                let mut hit = std::collections::HashSet::new();
                while hit.len() < errors {
                    hit.insert(rng.random_range(0..word.len()));
                }
                for &p in &hit {
                    word[p] ^= rng.random_range(1..=255u8);
                }
                assert_eq!(code.correct_symbols(&mut word).unwrap(), errors);
                assert_eq!(word, clean);
            }
        }
    }

    #[test]
    fn beyond_capacity_never_panics() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let code = ReedSolomonCode::new(12, 8).unwrap();
        for _ in 0..500 {
            let mut word: Vec<u8> = (0..20).map(|_| rng.random()).collect();
            let _ = code.correct_symbols(&mut word);
        }
    }

    #[test]
    fn bit_level_tolerance() {
        let code = ReedSolomonCode::new(4, 8).unwrap();
        assert_eq!(code.codeword_len(), 96);
        assert_eq!(code.tolerated_fraction(), Rational::new(4, 96));
        assert_eq!(code.tolerated_errors(), 4);
    }

    #[test]
    fn for_fraction_picks_smallest_parity() {
        let code = ReedSolomonCode::for_fraction(32, Rational::new(1, 20)).unwrap();
        assert!(code.tolerated_fraction() >= Rational::new(1, 20));
        let smaller = ReedSolomonCode::new(code.data_symbols(), code.parity_symbols() - 2).unwrap();
        assert!(smaller.tolerated_fraction() < Rational::new(1, 20));
    }

    #[test]
    fn for_codeword_bits_fills_length() {
        let code = ReedSolomonCode::for_codeword_bits(256, Rational::new(1, 20)).unwrap();
        assert_eq!(code.codeword_len(), 256);
        assert!(code.tolerated_fraction() >= Rational::new(1, 20));
        assert!(ReedSolomonCode::for_codeword_bits(100, Rational::new(1, 20)).is_err());
        // bit tolerance of a byte code stays below 1/16
        assert!(ReedSolomonCode::for_codeword_bits(256, Rational::new(1, 5)).is_err());
    }

    #[test]
    fn rejects_oversized_codes() {
        assert!(ReedSolomonCode::new(250, 6).is_err());
        assert!(ReedSolomonCode::new(0, 4).is_err());
    }
}
