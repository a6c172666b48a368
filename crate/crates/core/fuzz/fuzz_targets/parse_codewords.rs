#![no_main]

use delaychan::format::{parse_codewords, write_codewords};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(words) = parse_codewords(data, None) {
        let again = parse_codewords(&write_codewords(&words), None).expect("written output parses");
        assert_eq!(again, words);
    }
});
