#![no_main]

use delaychan::experiments::{fit_power_law, parse_xy_table};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    // first line picks the columns, the rest is the table
    let (cols, table) = data.split_once('\n').unwrap_or((data, ""));
    let (x, y) = cols.split_once(' ').unwrap_or(("0", "1"));
    if let Ok(points) = parse_xy_table(table, x, y) {
        assert!(points.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        let _ = fit_power_law(&points);
    }
});
