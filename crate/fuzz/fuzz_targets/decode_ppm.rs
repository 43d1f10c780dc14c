#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(frame) = dmst::io::decode_ppm(data) {
        let again = dmst::io::decode_ppm(&dmst::io::encode_ppm(&frame)).unwrap();
        assert_eq!(again, frame);
    }
});
