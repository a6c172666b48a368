#![no_main]

use std::sync::Arc;

use delaychan::channel::{ChannelParams, DelayBudget, Rational, ReceivedWord, Resolution};
use delaychan::codecs::{AvgConcat, Codec, FirstOne, MaxUnary, Spread};
use delaychan::outer::{MlLinearCode, Uncoded};
use libfuzzer_sys::fuzz_target;

fn word(bytes: &[u8], n: usize) -> ReceivedWord {
    let mut v: Vec<u32> = bytes.iter().map(|&b| u32::from(b)).collect();
    v.resize(n, 0);
    ReceivedWord::new(v)
}

// Decoders must be total on received words of the right length.
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    match pick % 4 {
        0 => {
            let ch = ChannelParams::new(8, 4, Resolution::Finite(4), DelayBudget::Max(8)).unwrap();
            let code = MaxUnary::new(Rational::new(1, 2), 8, 4).unwrap();
            let msg = code.decode(&word(rest, 32), &ch).unwrap();
            assert_eq!(msg.len(), code.payload_len(&ch).unwrap());
        }
        1 => {
            let ch = ChannelParams::new(8, 4, Resolution::Finite(2), DelayBudget::Avg(Rational::from_integer(1))).unwrap();
            let code = AvgConcat::new(Rational::new(1, 2), 8, 2, Arc::new(Uncoded::new(4))).unwrap();
            let _ = code.decode(&word(rest, 32), &ch);
        }
        2 => {
            let ch = ChannelParams::new(16, 1, Resolution::Finite(1), DelayBudget::Avg(Rational::from_integer(1))).unwrap();
            let code = FirstOne::new(Rational::new(1, 4), 16).unwrap();
            if let Ok(i) = code.decode(&word(rest, 16), &ch) {
                assert!((1..=code.num_codewords()).contains(&i));
            }
        }
        _ => {
            let ch = ChannelParams::new(8, 5, Resolution::Finite(1), DelayBudget::Max(1)).unwrap();
            let code = Spread::new(1, 1, Arc::new(MlLinearCode::reference()));
            let _ = code.decode(&word(rest, 40), &ch);
        }
    }
});
