use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("input contains no data records")]
    EmptyInput,
    #[error("record {record} has {found} fields, expected {expected}")]
    RaggedInput {
        record: usize,
        expected: usize,
        found: usize,
    },
    #[error("record {record}, field {column} is empty")]
    EmptyField { record: usize, column: usize },
    #[error("input is not valid UTF-8 (line {line})")]
    InvalidUtf8 { line: usize },
    #[error("column {column} out of range for matrix with {cols} columns")]
    ColumnOutOfRange { column: usize, cols: usize },
    #[error("ranking vector has length {found}, matrix has {expected} rows")]
    RankVectorLengthMismatch { expected: usize, found: usize },
    #[error("ranking vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("ranks are not dense: {0}")]
    NotDense(String),
    #[error("ordered partition is inconsistent: {0}")]
    InconsistentPartition(String),
    #[error("column sequence is empty")]
    EmptySequence,
    #[error("cardinality bound {k} must lie in 1..={max}")]
    CardinalityOutOfRange { k: usize, max: usize },
    #[error("equivalent sample size must be positive and finite, got {0}")]
    NonPositiveEss(f64),
    #[error("child arity must be at least 2, got {0}")]
    BadChildArity(usize),
    #[error("joint table does not refine parent table: {0}")]
    TableInconsistency(String),
    #[error("phenotype column {column} out of range for matrix with {cols} columns")]
    PhenotypeColumnOutOfRange { column: usize, cols: usize },
    #[error("invalid SNP pair ({a}, {b}) for {n_snps} SNP columns")]
    BadPair { a: usize, b: usize, n_snps: usize },
    #[error("noise rate {0} outside [0, 0.5)")]
    BadNoise(f64),
    #[error("arity must be at least 1")]
    BadArity,
    #[error("fraction {0} outside (0, 1]")]
    BadFraction(f64),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("benchmark paths disagree on columns {0:?}")]
    BenchMismatch(Vec<usize>),
}
