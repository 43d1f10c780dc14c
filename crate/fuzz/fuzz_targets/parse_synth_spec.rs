#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = dmst::io::SyntheticSpec::from_json(text) {
        let pixels = spec
            .width
            .checked_mul(spec.height)
            .and_then(|n| n.checked_mul(spec.frames));
        if pixels.is_some_and(|n| n <= 1 << 16) {
            let _ = dmst::io::generate_synthetic(&spec);
        }
    }
});
