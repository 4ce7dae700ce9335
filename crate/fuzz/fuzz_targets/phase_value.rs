#![no_main]
use biphoton::units::{parse_phase, wrap_phase};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(phi) = parse_phase(s) {
            assert!(phi.is_finite());
            let w = wrap_phase(phi);
            assert!((0.0..std::f64::consts::TAU).contains(&w));
        }
    }
});
