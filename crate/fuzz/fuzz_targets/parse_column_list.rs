#![no_main]

use libfuzzer_sys::fuzz_target;
use quicklex::parse::parse_column_list;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cols) = parse_column_list(s) {
        assert!(!cols.is_empty());
    }
});
