#![no_main]

use libfuzzer_sys::fuzz_target;
use qve_core::pipeline::parse_params_log;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_params_log(text, "fuzz");
    }
});
