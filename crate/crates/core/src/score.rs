//! Contingency tables, BDeu local scores and the epistasis scan.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::io::{self, Write};

use statrs::function::gamma::ln_gamma;

use crate::enumerate::{Enumerator, Mode};
use crate::error::{Error, Result};
use crate::lexsort::{OrderedPartition, RankingVector};
use crate::matrix::{ColumnPresort, DataMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContingencyEntry {
    /// First row of the block in order.
    pub representative_row: u32,
    pub count: u32,
}

/// Counts of identical rows, one entry per block in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    entries: Vec<ContingencyEntry>,
    total: usize,
}

impl ContingencyTable {
    pub fn entries(&self) -> &[ContingencyEntry] {
        &self.entries
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn counts(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|e| e.count)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn fill_from(&mut self, op: &OrderedPartition) {
        self.entries.clear();
        self.entries.extend(
            op.partition()
                .iter()
                .zip(op.block_sizes())
                .map(|(&start, size)| ContingencyEntry {
                    representative_row: op.order()[start as usize],
                    count: size as u32,
                }),
        );
        self.total = op.rows();
    }
}

pub fn contingency_from_partition(op: &OrderedPartition) -> Result<ContingencyTable> {
    op.check_structure()?;
    let mut table = ContingencyTable {
        entries: Vec::new(),
        total: 0,
    };
    table.fill_from(op);
    Ok(table)
}

/// BDeu local log-score of a child given its parents, from the parent-only
/// table and the parent-plus-child table.
///
/// `parent_configs` is `q`, the number of possible parent configurations
/// (product of the parents' arities, 1 for no parents). Configurations that
/// never occur contribute nothing, so only observed blocks are summed.
/// `joint` must list its blocks in the same order as `parent` with each
/// parent block split into at most `child_arity` consecutive child blocks,
/// which is what appending the child column with a refine produces.
pub fn bde_local_score(
    parent: &ContingencyTable,
    joint: &ContingencyTable,
    child_arity: usize,
    parent_configs: f64,
    ess: f64,
) -> Result<f64> {
    if !(ess > 0.0 && ess.is_finite()) {
        return Err(Error::NonPositiveEss(ess));
    }
    if child_arity < 2 {
        return Err(Error::BadChildArity(child_arity));
    }
    if parent.total != joint.total {
        return Err(Error::TableInconsistency(format!(
            "totals differ ({} vs {})",
            parent.total, joint.total
        )));
    }
    let alpha_j = ess / parent_configs;
    let alpha_jk = alpha_j / child_arity as f64;
    let ln_alpha_jk = ln_gamma(alpha_jk);

    let mut score = 0.0;
    let mut cells = joint.counts();
    for (j, n_j) in parent.counts().enumerate() {
        score += ln_gamma(alpha_j) - ln_gamma(alpha_j + n_j as f64);
        let mut covered = 0u32;
        let mut states = 0usize;
        while covered < n_j {
            let n_jk = cells
                .next()
                .ok_or_else(|| Error::TableInconsistency(format!("joint table ends inside parent block {j}")))?;
            covered += n_jk;
            states += 1;
            score += ln_gamma(alpha_jk + n_jk as f64) - ln_alpha_jk;
        }
        if covered != n_j {
            return Err(Error::TableInconsistency(format!(
                "joint block straddles parent block {j}"
            )));
        }
        if states > child_arity {
            return Err(Error::TableInconsistency(format!(
                "parent block {j} splits into {states} child states, arity is {child_arity}"
            )));
        }
    }
    Ok(score)
}

/// A scored SNP set. `rank` is 1-based in the report.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSet {
    pub columns: Vec<usize>,
    pub score: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpistasisScan {
    /// Best sets, highest score first.
    pub top: Vec<ScoredSet>,
    /// Number of SNP sets scored.
    pub scored: u64,
    pub refine_calls: u64,
}

#[derive(Debug)]
struct Candidate {
    score: f64,
    columns: Vec<usize>,
}

impl Ord for Candidate {
    /// Greater is better: higher score, then smaller column tuple.
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.columns.cmp(&self.columns))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

fn check_pheno(matrix: &DataMatrix, pheno_col: usize) -> Result<usize> {
    if pheno_col >= matrix.cols() {
        return Err(Error::PhenotypeColumnOutOfRange {
            column: pheno_col,
            cols: matrix.cols(),
        });
    }
    let arity = matrix.arity(pheno_col);
    if arity < 2 {
        return Err(Error::BadChildArity(arity));
    }
    Ok(arity)
}

/// Score of the phenotype with no parents.
pub fn null_score(matrix: &DataMatrix, presort: &ColumnPresort, pheno_col: usize, ess: f64) -> Result<f64> {
    let arity = check_pheno(matrix, pheno_col)?;
    let m = matrix.rows();
    let mut refiner = crate::lexsort::Refiner::new(matrix, presort)?;
    let (_, joint) = refiner.refine_augmented(pheno_col, &RankingVector::zeros(m), &OrderedPartition::trivial(m))?;
    let parent = contingency_from_partition(&OrderedPartition::trivial(m))?;
    bde_local_score(&parent, &contingency_from_partition(&joint)?, arity, 1.0, ess)
}

/// Scores every set of up to `max_card` SNP columns (all columns except
/// `pheno_col`) as parents of the phenotype and keeps the best `top`.
/// Each set costs two refines: one for the set itself, one more to append
/// the phenotype.
pub fn epistasis_scan(
    matrix: &DataMatrix,
    presort: &ColumnPresort,
    pheno_col: usize,
    max_card: usize,
    ess: f64,
    top: usize,
) -> Result<EpistasisScan> {
    let child_arity = check_pheno(matrix, pheno_col)?;
    if !(ess > 0.0 && ess.is_finite()) {
        return Err(Error::NonPositiveEss(ess));
    }
    let snps: Vec<usize> = (0..matrix.cols()).filter(|&c| c != pheno_col).collect();
    let mut walk = Enumerator::with_columns(matrix, presort, Mode::Subsets, max_card, snps)?.augmented(true);

    let arities: Vec<f64> = matrix.arities().into_iter().map(|a| a as f64).collect();
    let m = matrix.rows();
    let mut joint_rank = RankingVector::zeros(m);
    let mut joint_part = OrderedPartition::trivial(m);
    let mut parent_table = contingency_from_partition(&OrderedPartition::trivial(m))?;
    let mut joint_table = parent_table.clone();
    let mut heap: BinaryHeap<Reverse<Candidate>> = BinaryHeap::new();
    let mut failure = None;

    let scored = walk.run(|node, refiner| {
        if failure.is_some() {
            return;
        }
        let partition = node.partition.expect("augmented walk");
        refiner.refine_augmented_unchecked(pheno_col, node.ranking, partition, &mut joint_rank, &mut joint_part);
        parent_table.fill_from(partition);
        joint_table.fill_from(&joint_part);
        let q: f64 = node.columns.iter().map(|&c| arities[c]).product();
        match bde_local_score(&parent_table, &joint_table, child_arity, q, ess) {
            Ok(score) => {
                if top == 0 {
                    return;
                }
                let cand = Candidate {
                    score,
                    columns: node.columns.to_vec(),
                };
                if heap.len() < top {
                    heap.push(Reverse(cand));
                } else if heap.peek().is_some_and(|Reverse(worst)| cand > *worst) {
                    heap.pop();
                    heap.push(Reverse(cand));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let mut best: Vec<Candidate> = heap.into_iter().map(|Reverse(c)| c).collect();
    best.sort_by(|a, b| b.cmp(a));
    Ok(EpistasisScan {
        top: best
            .into_iter()
            .enumerate()
            .map(|(i, c)| ScoredSet {
                columns: c.columns,
                score: c.score,
                rank: i + 1,
            })
            .collect(),
        scored,
        refine_calls: walk.refine_calls(),
    })
}

/// TSV report: `rank`, comma-joined `columns`, `log_score`.
pub fn write_score_report<W: Write>(mut out: W, sets: &[ScoredSet]) -> io::Result<()> {
    writeln!(out, "rank\tcolumns\tlog_score")?;
    for s in sets {
        let cols: Vec<String> = s.columns.iter().map(usize::to_string).collect();
        writeln!(out, "{}\t{}\t{:.6}", s.rank, cols.join(","), s.score)?;
    }
    Ok(())
}

/// Upper bounds on the build time and node count of an AD-tree over `m`
/// rows of `n` binary columns:
/// time = Σ_{k=0}^{⌊log2 m⌋} (m / 2^k) C(n, k), space = Σ_{k=0}^{⌊log2 m⌋} C(n, k).
pub fn adtree_cost_bounds(m: u64, n: u64) -> (f64, f64) {
    if m == 0 {
        return (0.0, 0.0);
    }
    let depth = m.ilog2() as u64;
    let (mut time, mut space) = (0.0, 0.0);
    let mut binom = 1.0f64;
    for k in 0..=depth.min(n) {
        if k > 0 {
            binom *= (n - k + 1) as f64 / k as f64;
        }
        time += m as f64 / 2f64.powi(k as i32) * binom;
        space += binom;
    }
    (time, space)
}
