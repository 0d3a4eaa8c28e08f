#![no_main]

use libfuzzer_sys::fuzz_target;
use quicklex::parse::parse_synthetic;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = parse_synthetic(s) {
        assert!(spec.rows > 0 && spec.cols > 0 && spec.arity > 0);
    }
});
