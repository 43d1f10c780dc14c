#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(settings) = dmst::io::Settings::from_json(text) {
        let win = dmst::Window::new(8.0, 8.0, 4.0, 4.0).unwrap();
        let _ = settings.tracker_config(dmst::Variant::Dmst, win);
    }
    let mut s = dmst::io::Settings::default();
    let _ = s.apply_override(text);
});
