#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = dmst::io::read_records(data) {
        for r in rows {
            assert!(r.cx.is_finite() && r.rho.is_finite());
        }
    }
});
