#![no_main]

use libfuzzer_sys::fuzz_target;
use qve_core::integrals::Molecule;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        for charge in [-1, 0, 1] {
            let _ = Molecule::parse_geometry(text, "fuzz", charge);
        }
    }
});
