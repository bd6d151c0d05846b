#![no_main]

use libfuzzer_sys::fuzz_target;
use qve_core::circuit::NoiseModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = NoiseModel::parse(text, "fuzz") {
        let back = NoiseModel::parse(&model.to_toml(), "round trip").expect("serialized model parses");
        assert_eq!(back, model);
    }
});
