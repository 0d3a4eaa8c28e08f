//! Synthetic data and the row-truncation scaling experiment.
//!
//! Both timed paths enumerate the same column subsets in the same DFS order.
//! The refinement path pays for the column presort once per truncation; the
//! stable-sort path ranks every node from scratch.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline::stable_lex_sort;
use crate::enumerate::{for_each_subset, Enumerator, Mode};
use crate::error::{Error, Result};
use crate::matrix::{presort_columns, DataMatrix};

/// Uniform categorical matrix. Cells are drawn row by row from a ChaCha8
/// stream seeded with `seed`, so output is identical on every platform.
pub fn generate_matrix(rows: usize, arities: &[u32], seed: u64) -> Result<DataMatrix> {
    if arities.contains(&0) {
        return Err(Error::BadArity);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<u32>> = arities.iter().map(|_| Vec::with_capacity(rows)).collect();
    for _ in 0..rows {
        for (col, &a) in cols.iter_mut().zip(arities) {
            col.push(rng.gen_range(0..a));
        }
    }
    DataMatrix::from_value_columns(&cols)
}

/// `n_snps` uniform binary columns followed by a phenotype column equal to
/// the XOR of columns `pair.0` and `pair.1`, each phenotype bit flipped with
/// probability `noise_rate`.
pub fn plant_epistasis(
    rows: usize,
    n_snps: usize,
    pair: (usize, usize),
    noise_rate: f64,
    seed: u64,
) -> Result<DataMatrix> {
    let (a, b) = pair;
    if a == b || a >= n_snps || b >= n_snps {
        return Err(Error::BadPair { a, b, n_snps });
    }
    if !(0.0..0.5).contains(&noise_rate) {
        return Err(Error::BadNoise(noise_rate));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<u32>> = vec![Vec::with_capacity(rows); n_snps + 1];
    for _ in 0..rows {
        for col in cols.iter_mut().take(n_snps) {
            col.push(rng.gen_range(0..2));
        }
        let flip = rng.gen_bool(noise_rate) as u32;
        let pheno = cols[a].last().unwrap() ^ cols[b].last().unwrap() ^ flip;
        cols[n_snps].push(pheno);
    }
    DataMatrix::from_value_columns(&cols)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Checks that both paths agree on every node.
fn verify_paths(matrix: &DataMatrix, max_card: usize) -> Result<u64> {
    let presort = presort_columns(matrix);
    let mut walk = Enumerator::new(matrix, &presort, Mode::Subsets, max_card)?;
    let mut mismatch = None;
    let nodes = walk.run(|node, _| {
        if mismatch.is_none() && stable_lex_sort(matrix, node.columns).as_ref() != Ok(node.ranking) {
            mismatch = Some(node.columns.to_vec());
        }
    });
    match mismatch {
        Some(cols) => Err(Error::BenchMismatch(cols)),
        None => Ok(nodes),
    }
}

/// Seconds for presort plus refinement over all subsets up to `max_card`.
fn time_refinement(matrix: &DataMatrix, max_card: usize, include_presort: bool) -> Result<f64> {
    let start = Instant::now();
    let presort = presort_columns(matrix);
    let mut walk = Enumerator::new(matrix, &presort, Mode::Subsets, max_card)?;
    let enum_start = Instant::now();
    let mut checksum = 0usize;
    walk.run(|node, _| checksum = checksum.wrapping_add(node.ranking.num_blocks()));
    black_box(checksum);
    let end = Instant::now();
    Ok(if include_presort { end - start } else { end - enum_start }.as_secs_f64())
}

/// Seconds for a fresh stable-sort ranking at every subset up to `max_card`.
fn time_stable(matrix: &DataMatrix, max_card: usize) -> Result<f64> {
    let start = Instant::now();
    let mut checksum = 0usize;
    let mut failure = None;
    for_each_subset(matrix.cols(), max_card, |cols| match stable_lex_sort(matrix, cols) {
        Ok(r) => checksum = checksum.wrapping_add(r.num_blocks()),
        Err(e) => failure = Some(e),
    });
    black_box(checksum);
    match failure {
        Some(e) => Err(e),
        None => Ok(start.elapsed().as_secs_f64()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeTiming {
    pub nodes: u64,
    /// Median seconds per node, refinement only (presort excluded).
    pub refine_per_node: f64,
    /// Median seconds per node for stable-sort ranking.
    pub stable_per_node: f64,
}

/// Median per-node cost of each method over `reps` timed runs, after one
/// untimed run that also checks the two methods agree.
pub fn measure_node_costs(matrix: &DataMatrix, max_card: usize, reps: usize) -> Result<NodeTiming> {
    let nodes = verify_paths(matrix, max_card)?;
    let reps = reps.max(1);
    let mut q = Vec::with_capacity(reps);
    let mut s = Vec::with_capacity(reps);
    for _ in 0..reps {
        q.push(time_refinement(matrix, max_card, false)?);
        s.push(time_stable(matrix, max_card)?);
    }
    Ok(NodeTiming {
        nodes,
        refine_per_node: median(q) / nodes as f64,
        stable_per_node: median(s) / nodes as f64,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub fraction: f64,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub nodes: u64,
    pub qls_seconds: f64,
    pub sls_seconds: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "fraction,m,n,k,nodes,qls_seconds,sls_seconds,ratio")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{:.6},{:.6},{:.4}",
                r.fraction, r.m, r.n, r.k, r.nodes, r.qls_seconds, r.sls_seconds, r.ratio
            )?;
        }
        Ok(())
    }
}

/// For each fraction `f`, truncates `matrix` to its first `⌈f m⌉` rows and
/// times all-subsets ranking up to `max_card` with both methods. Each
/// truncation first gets an untimed run that doubles as the agreement check;
/// the `reps` timed runs then go round-robin over all truncations so that
/// slow drift in machine speed lands on every row alike. Reported times are
/// medians.
pub fn run_scaling_experiment(
    matrix: &DataMatrix,
    max_card: usize,
    fractions: &[f64],
    reps: usize,
) -> Result<BenchReport> {
    if let Some(&bad) = fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        return Err(Error::BadFraction(bad));
    }
    if max_card == 0 || max_card > matrix.cols() {
        return Err(Error::CardinalityOutOfRange {
            k: max_card,
            max: matrix.cols(),
        });
    }
    let reps = reps.max(1);
    let mut subs = Vec::with_capacity(fractions.len());
    for &fraction in fractions {
        let rows = ((fraction * matrix.rows() as f64).ceil() as usize).clamp(1, matrix.rows());
        let sub = matrix.head(rows)?;
        let nodes = verify_paths(&sub, max_card)?;
        subs.push((fraction, sub, nodes));
    }
    let mut q = vec![Vec::with_capacity(reps); subs.len()];
    let mut s = vec![Vec::with_capacity(reps); subs.len()];
    for _ in 0..reps {
        for (i, (_, sub, _)) in subs.iter().enumerate() {
            q[i].push(time_refinement(sub, max_card, true)?);
            s[i].push(time_stable(sub, max_card)?);
        }
    }
    let rows = subs
        .into_iter()
        .zip(q.into_iter().zip(s))
        .map(|((fraction, sub, nodes), (q, s))| {
            let (qls, sls) = (median(q), median(s));
            BenchRow {
                fraction,
                m: sub.rows(),
                n: sub.cols(),
                k: max_card,
                nodes,
                qls_seconds: qls,
                sls_seconds: sls,
                ratio: sls / qls,
            }
        })
        .collect();
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::subset_count;

    #[test]
    fn arity_one_is_constant() {
        let d = generate_matrix(4, &[1, 1], 9).unwrap();
        assert!((0..2).all(|j| d.column(j).iter().all(|&c| c == 0)));
        assert_eq!(generate_matrix(4, &[0], 1), Err(Error::BadArity));
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(
            generate_matrix(50, &[3, 5], 7).unwrap(),
            generate_matrix(50, &[3, 5], 7).unwrap()
        );
        assert_ne!(
            generate_matrix(50, &[3, 5], 7).unwrap(),
            generate_matrix(50, &[3, 5], 8).unwrap()
        );
    }

    #[test]
    fn generated_columns_are_uniform() {
        let (m, arity) = (100_000usize, 5u32);
        let d = generate_matrix(m, &[arity; 7], 42).unwrap();
        let p = 1.0 / arity as f64;
        let sigma = (m as f64 * p * (1.0 - p)).sqrt();
        for j in 0..7 {
            let mut freq = [0usize; 5];
            for &c in d.column(j) {
                freq[c as usize] += 1;
            }
            for f in freq {
                assert!((f as f64 - m as f64 * p).abs() < 5.0 * sigma);
            }
        }
    }

    #[test]
    fn planted_phenotype_is_xor_without_noise() {
        let d = plant_epistasis(300, 6, (1, 4), 0.0, 3).unwrap();
        for r in 0..300 {
            assert_eq!(d.get(r, 6), d.get(r, 1) ^ d.get(r, 4));
        }
    }

    #[test]
    fn plant_rejects_bad_inputs() {
        assert!(matches!(
            plant_epistasis(10, 5, (2, 2), 0.0, 0),
            Err(Error::BadPair { .. })
        ));
        assert!(matches!(
            plant_epistasis(10, 5, (2, 5), 0.0, 0),
            Err(Error::BadPair { .. })
        ));
        assert_eq!(plant_epistasis(10, 5, (0, 1), 0.5, 0), Err(Error::BadNoise(0.5)));
    }

    #[test]
    fn small_experiment_shape() {
        let d = generate_matrix(200, &[3, 4, 2, 5], 1).unwrap();
        let report = run_scaling_experiment(&d, 4, &[0.5, 1.0], 1).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].m, 100);
        for r in &report.rows {
            assert_eq!(r.nodes as u128, subset_count(4, 4));
            assert!(r.qls_seconds > 0.0 && r.sls_seconds > 0.0);
        }
        let k1 = run_scaling_experiment(&d, 1, &[1.0], 1).unwrap();
        assert_eq!(k1.rows[0].nodes, 4);

        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("fraction,m,n,k,nodes,qls_seconds,sls_seconds,ratio\n0.5,100,4,4,15,"));
    }

    #[test]
    fn experiment_rejects_bad_fraction() {
        let d = generate_matrix(10, &[2], 1).unwrap();
        assert_eq!(run_scaling_experiment(&d, 1, &[1.5], 1), Err(Error::BadFraction(1.5)));
        assert_eq!(run_scaling_experiment(&d, 1, &[0.0], 1), Err(Error::BadFraction(0.0)));
    }
}
