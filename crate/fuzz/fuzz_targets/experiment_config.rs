#![no_main]
use biphoton::experiment::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = ExperimentConfig::from_toml_str(text) {
        let emitted = c.to_toml_string();
        let back = ExperimentConfig::from_toml_str(&emitted).expect("emitted config parses");
        // NaN fields compare unequal, so compare the emitted text instead
        assert_eq!(back.to_toml_string(), emitted);
    }
});
