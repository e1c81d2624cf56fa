#![no_main]

use entlab_core::extremal::{build_saturating_state, SaturatingSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(spec) = serde_json::from_str::<SaturatingSpec>(data) else {
        return;
    };
    let (d1, d2) = spec.dims();
    // Building is quadratic in d1·d2; keep iterations fast.
    if d1 * d2 <= 64 {
        let rho = build_saturating_state(&spec).unwrap();
        assert_eq!(rho.dims().as_slice(), &[d1, d2]);
    }
});
