#![no_main]

use delaychan::experiments::parse_trial_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(rows) = parse_trial_csv(data) {
        for r in rows {
            assert!(r.corrupted_fraction.is_none_or(|f| (0.0..=1.0).contains(&f)));
        }
    }
});
