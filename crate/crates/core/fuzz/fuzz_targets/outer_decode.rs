#![no_main]

use delaychan::outer::{MlLinearCode, OuterCode, ReedSolomonCode};
use libfuzzer_sys::fuzz_target;

/// Decodes `data` as a received word; any accepted message must encode
/// to something whose `unit`-bit chunks differ from it in at most `radius`
/// places.
fn check(code: &dyn OuterCode, data: &[u8], unit: usize, radius: usize) {
    let mut r: Vec<u8> = data.iter().map(|&b| b & 1).collect();
    r.resize(code.codeword_len(), 0);
    if let Ok(msg) = code.decode(&r) {
        let cw = code.encode(&msg).unwrap();
        let dist = cw.chunks(unit).zip(r.chunks(unit)).filter(|(a, b)| a != b).count();
        assert!(dist <= radius, "decoded outside the radius");
    }
}

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    if pick % 2 == 0 {
        let ml = MlLinearCode::reference();
        check(&ml, rest, 1, ml.tolerated_errors());
    } else {
        let rs = ReedSolomonCode::new(4, 4).unwrap();
        check(&rs, rest, 8, rs.symbol_capacity());
    }
});
