#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = dmst_cli::parse_init(text) {
        assert!(w.hx > 0.0 && w.hy > 0.0 && w.cx.is_finite());
    }
});
