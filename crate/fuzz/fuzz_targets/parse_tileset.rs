#![no_main]

use libfuzzer_sys::fuzz_target;
use sssst::io::{emit_tileset, parse_tileset};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Anything that parses must survive a round trip.
    if let Ok(ts) = parse_tileset(text) {
        assert_eq!(parse_tileset(&emit_tileset(&ts)).unwrap(), ts);
    }
});
