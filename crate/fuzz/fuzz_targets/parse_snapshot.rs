#![no_main]

use libfuzzer_sys::fuzz_target;
use sssst::io::Snapshot;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = Snapshot::parse(text) {
        assert_eq!(Snapshot::parse(&s.emit()).unwrap(), s);
        let _ = s.grid();
    }
});
