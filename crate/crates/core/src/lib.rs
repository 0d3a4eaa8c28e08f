//! Lexicographic ranking of categorical matrices restricted to arbitrary
//! column sequences.
//!
//! After a one-time per-column presort ([`presort_columns`]), the ranking for
//! a column sequence extended by one more column costs a single `O(m)` pass
//! ([`refine`]). That makes it cheap to rank every nested column subset or
//! sequence up to a cardinality bound ([`enumerate_subsets`],
//! [`enumerate_sequences`]), which in turn drives contingency-table
//! extraction and BDeu scoring of SNP sets against a phenotype
//! ([`epistasis_scan`]).
//!
//! ```
//! use quicklex::{lex_sort, parse_matrix, presort_columns, Format};
//!
//! let d = parse_matrix(b"0,1,0\n1,1,0\n1,0,0\n0,1,1\n0,0,1\n", Format::Csv, false).unwrap();
//! let q = presort_columns(&d);
//! assert_eq!(lex_sort(&d, &q, &[2, 1]).unwrap().ranks(), &[1, 1, 0, 3, 2]);
//! ```

pub mod baseline;
pub mod bench;
pub mod enumerate;
pub mod error;
pub mod lexsort;
pub mod matrix;
pub mod parse;
pub mod score;

#[cfg(test)]
mod testdata;

pub use baseline::{brute_force_ranking, stable_lex_sort, stable_sort_permutation};
pub use bench::{generate_matrix, measure_node_costs, plant_epistasis, run_scaling_experiment, BenchReport, BenchRow};
pub use enumerate::{
    enumerate_sequences, enumerate_subsets, enumerate_subsets_augmented, node_count, EnumNode, Enumerator, Mode,
};
pub use error::{Error, Result};
pub use lexsort::{
    is_refinement, lex_sort, ordered_partition, refine, refine_augmented, OrderedPartition, RankingVector,
    RefineScratch, Refiner,
};
pub use matrix::{load_matrix, load_matrix_path, parse_matrix, presort_columns, ColumnPresort, DataMatrix, Format};
pub use score::{
    adtree_cost_bounds, bde_local_score, contingency_from_partition, epistasis_scan, null_score, ContingencyTable,
    ScoredSet,
};
