#![no_main]
use biphoton::dispersion::{refractive_index, MaterialModel};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(m) = MaterialModel::from_toml_str(text) else {
        return;
    };
    // an accepted file must give finite indices inside its range
    let (lo, hi) = m.valid_wavelength_range;
    for axis in m.axes.keys() {
        let n = refractive_index(&m, axis, 0.5 * (lo + hi), m.reference_temperature).unwrap();
        assert!(n.is_finite());
    }
});
