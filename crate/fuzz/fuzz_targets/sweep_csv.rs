#![no_main]

use libfuzzer_sys::fuzz_target;
use quotient_levels::invariants::read_sweep_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = read_sweep_csv(text);
    }
});
