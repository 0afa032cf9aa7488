// Fuzz the corpus manifest parser; errors are fine, panics are not.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = ccspectra::datasets::parse_manifest(text) {
        // Accepted manifests re-render and reparse to the same rows.
        let rendered = ccspectra::datasets::render_manifest(&rows);
        let back = ccspectra::datasets::parse_manifest(&rendered)
            .expect("rendered manifest reparses");
        assert_eq!(back, rows);
    }
});
