#![no_main]

use delaychan::format::{format_bits, parse_bits};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(bits) = parse_bits(data) {
        assert!(bits.iter().all(|&b| b <= 1));
        assert_eq!(parse_bits(&format_bits(&bits)).unwrap(), bits);
    }
});
