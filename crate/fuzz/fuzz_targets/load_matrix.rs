#![no_main]

use libfuzzer_sys::fuzz_target;
use quicklex::{parse_matrix, presort_columns, Format};

// First byte picks the format (bit 0) and header flag (bit 1).
fuzz_target!(|data: &[u8]| {
    let Some((&flags, body)) = data.split_first() else {
        return;
    };
    let format = if flags & 1 == 0 { Format::Csv } else { Format::Tsv };
    let Ok(d) = parse_matrix(body, format, flags & 2 != 0) else {
        return;
    };
    assert!(d.rows() > 0 && d.cols() > 0);
    for j in 0..d.cols() {
        for r in 0..d.rows() {
            let code = d.get(r, j);
            assert!((code as usize) < d.arity(j));
            assert_eq!(d.encode(j, d.decode(r, j)), Some(code));
        }
    }
    let q = presort_columns(&d);
    for j in 0..d.cols() {
        assert!(q
            .column(j)
            .windows(2)
            .all(|w| d.get(w[0] as usize, j) <= d.get(w[1] as usize, j)));
    }
});
