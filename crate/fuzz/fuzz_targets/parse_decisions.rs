#![no_main]

use libfuzzer_sys::fuzz_target;
use sssst::CodingPrefix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = text.parse::<CodingPrefix>() {
        assert_eq!(p.to_string().parse::<CodingPrefix>().unwrap(), p);
        if p.len() <= 12 {
            let _ = p.rank();
        }
    }
});
