#![no_main]

use libfuzzer_sys::fuzz_target;
use quicklex::{
    brute_force_ranking, lex_sort, presort_columns, refine_augmented, stable_lex_sort, DataMatrix, OrderedPartition,
    RankingVector,
};

// Byte 0: column count (1..=4), byte 1: arity (1..=4), then the column
// sequence as the next `cols` bytes, then cell values row by row.
fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let cols = data[0] as usize % 4 + 1;
    let arity = data[1] as u32 % 4 + 1;
    let rest = &data[2..];
    if rest.len() < cols {
        return;
    }
    let (seq_bytes, cells) = rest.split_at(cols);
    let rows = (cells.len() / cols).min(64);
    if rows == 0 {
        return;
    }
    let matrix: Vec<Vec<u32>> = (0..rows)
        .map(|r| (0..cols).map(|c| cells[r * cols + c] as u32 % arity).collect())
        .collect();
    let d = DataMatrix::from_rows(&matrix).unwrap();
    let q = presort_columns(&d);
    let seq: Vec<usize> = seq_bytes.iter().map(|&b| b as usize % cols).collect();

    let expected = brute_force_ranking(&d, &seq).unwrap();
    assert_eq!(lex_sort(&d, &q, &seq).unwrap(), expected);
    assert_eq!(stable_lex_sort(&d, &seq).unwrap(), expected);

    let mut l = RankingVector::zeros(rows);
    let mut op = OrderedPartition::trivial(rows);
    for &c in &seq {
        (l, op) = refine_augmented(&d, &q, c, &l, &op).unwrap();
    }
    assert_eq!(l, expected);
    op.validate(&l).unwrap();
});
