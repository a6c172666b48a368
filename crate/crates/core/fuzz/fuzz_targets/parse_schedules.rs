#![no_main]

use delaychan::format::{parse_schedules, write_schedules};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(schedules) = parse_schedules(data, None) {
        let again = parse_schedules(&write_schedules(&schedules), None).expect("written output parses");
        assert_eq!(again, schedules);
    }
});
