#![no_main]

use libfuzzer_sys::fuzz_target;
use quotient_levels::textio::parse_point;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_point(text) {
        assert!(p.x.is_finite() && p.y.is_finite());
        assert_eq!(parse_point(&format!("{},{}", p.x, p.y)).unwrap(), p);
    }
});
