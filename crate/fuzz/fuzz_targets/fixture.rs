#![no_main]

use libfuzzer_sys::fuzz_target;
use qve_core::pipeline::{format_fixture, parse_fixture};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(problem) = parse_fixture(text, "fuzz") {
        // anything accepted must survive a save/load cycle unchanged
        let saved = format_fixture(&problem, None);
        let again = parse_fixture(&saved, "saved").expect("formatted fixture parses");
        assert_eq!(format_fixture(&again, None), saved);
    }
});
