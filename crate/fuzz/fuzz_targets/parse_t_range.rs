#![no_main]

use libfuzzer_sys::fuzz_target;
use quotient_levels::textio::parse_t_range;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_t_range(text) {
        assert!(r.lo < r.hi && r.steps >= 1);
    }
});
