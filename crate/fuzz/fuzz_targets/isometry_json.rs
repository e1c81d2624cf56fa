#![no_main]

use entlab_core::Isometry;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(w) = serde_json::from_str::<Isometry>(data) {
        assert!(w.orthonormality_defect() <= 1e-10);
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(w, serde_json::from_str::<Isometry>(&text).unwrap());
    }
});
