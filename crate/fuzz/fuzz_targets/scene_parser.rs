#![no_main]

use libfuzzer_sys::fuzz_target;
use quotient_levels::scene::{parse_scene, serialize_scene};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(scene) = parse_scene(text) {
        let again = parse_scene(&serialize_scene(&scene)).expect("serialized scene re-parses");
        assert_eq!(serialize_scene(&again), serialize_scene(&scene));
    }
});
