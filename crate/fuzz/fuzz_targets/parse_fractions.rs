#![no_main]

use libfuzzer_sys::fuzz_target;
use quicklex::parse::parse_fractions;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_fractions(s) {
        assert!(!f.is_empty() && f.iter().all(|x| *x > 0.0 && *x <= 1.0));
    }
});
