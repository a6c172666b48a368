#![no_main]

use delaychan::format::{parse_trace, write_trace};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(entries) = parse_trace(data) {
        assert_eq!(parse_trace(&write_trace(&entries)).unwrap(), entries);
    }
});
