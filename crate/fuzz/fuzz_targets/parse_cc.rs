// Fuzz the CC document parser: it must never panic, and anything it
// accepts must survive a serialize/parse round trip unchanged.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cc) = ccspectra::io::parse(text) {
        let canonical = ccspectra::io::serialize(&cc);
        let back = ccspectra::io::parse(&canonical).expect("canonical form reparses");
        assert_eq!(back, cc, "round trip changed the complex");
    }
});
