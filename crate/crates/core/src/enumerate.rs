//! Depth-first enumeration of column sequences and column subsets.
//!
//! Every visited node extends its parent by one column, so its ranking is a
//! single refine of the parent's ranking. One ranking vector (and, in
//! augmented mode, one ordered partition) is kept per depth and reused across
//! siblings, so memory stays `O(m k)` however many nodes are visited.

use crate::error::{Error, Result};
use crate::lexsort::{OrderedPartition, RankingVector, Refiner};
use crate::matrix::{ColumnPresort, DataMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every duplicate-free column sequence.
    Sequences,
    /// Every column set, generated in ascending index order.
    Subsets,
}

/// The state handed to a visitor at each node.
#[derive(Debug)]
pub struct EnumNode<'n> {
    pub columns: &'n [usize],
    pub ranking: &'n RankingVector,
    /// Present in augmented mode.
    pub partition: Option<&'n OrderedPartition>,
}

impl EnumNode<'_> {
    pub fn depth(&self) -> usize {
        self.columns.len()
    }
}

/// Σ_{i=1..k} n! / (n-i)!, saturating.
pub fn sequence_count(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut falling = 1u128;
    for i in 0..k.min(n) {
        falling = falling.saturating_mul((n - i) as u128);
        total = total.saturating_add(falling);
    }
    total
}

/// Σ_{i=1..k} C(n, i), saturating.
pub fn subset_count(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for i in 1..=k.min(n) {
        binom = binom.saturating_mul((n - i + 1) as u128) / i as u128;
        total = total.saturating_add(binom);
    }
    total
}

pub fn node_count(mode: Mode, n: usize, k: usize) -> u128 {
    match mode {
        Mode::Sequences => sequence_count(n, k),
        Mode::Subsets => subset_count(n, k),
    }
}

/// Reusable DFS driver over a pool of candidate columns.
#[derive(Debug)]
pub struct Enumerator<'a> {
    refiner: Refiner<'a>,
    pool: Vec<usize>,
    max_card: usize,
    mode: Mode,
    augmented: bool,
    path: Vec<usize>,
    used: Vec<bool>,
    rankings: Vec<RankingVector>,
    partitions: Vec<OrderedPartition>,
    visits: u64,
}

impl<'a> Enumerator<'a> {
    /// Enumerates over every column of `matrix`.
    pub fn new(matrix: &'a DataMatrix, presort: &'a ColumnPresort, mode: Mode, max_card: usize) -> Result<Self> {
        Self::with_columns(matrix, presort, mode, max_card, (0..matrix.cols()).collect())
    }

    /// Enumerates over the given distinct columns only.
    pub fn with_columns(
        matrix: &'a DataMatrix,
        presort: &'a ColumnPresort,
        mode: Mode,
        max_card: usize,
        pool: Vec<usize>,
    ) -> Result<Self> {
        let mut seen = vec![false; matrix.cols()];
        for &c in &pool {
            matrix.check_column(c)?;
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::Parse {
                    what: "distinct column pool",
                    input: format!("{pool:?}"),
                });
            }
        }
        if max_card == 0 || max_card > pool.len() {
            return Err(Error::CardinalityOutOfRange {
                k: max_card,
                max: pool.len(),
            });
        }
        let m = matrix.rows();
        Ok(Enumerator {
            refiner: Refiner::new(matrix, presort)?,
            used: vec![false; pool.len()],
            pool,
            max_card,
            mode,
            augmented: false,
            path: Vec::with_capacity(max_card),
            rankings: vec![RankingVector::zeros(m); max_card + 1],
            partitions: vec![OrderedPartition::trivial(m); max_card + 1],
            visits: 0,
        })
    }

    /// Also maintain an [`OrderedPartition`] at each node.
    pub fn augmented(mut self, on: bool) -> Self {
        self.augmented = on;
        self
    }

    pub fn refine_calls(&self) -> u64 {
        self.refiner.calls()
    }

    /// Runs the traversal, returning the number of nodes visited. The visitor
    /// may issue further refines through the supplied [`Refiner`]; those are
    /// counted in [`Enumerator::refine_calls`] too.
    pub fn run<F>(&mut self, mut visitor: F) -> u64
    where
        F: FnMut(&EnumNode<'_>, &mut Refiner<'a>),
    {
        let before = self.visits;
        self.dfs(0, 0, &mut visitor);
        self.visits - before
    }

    fn dfs<F>(&mut self, depth: usize, start: usize, visitor: &mut F)
    where
        F: FnMut(&EnumNode<'_>, &mut Refiner<'a>),
    {
        let first = match self.mode {
            Mode::Subsets => start,
            Mode::Sequences => 0,
        };
        for idx in first..self.pool.len() {
            if self.used[idx] {
                continue;
            }
            let col = self.pool[idx];
            let (done, next) = self.rankings.split_at_mut(depth + 1);
            if self.augmented {
                let (pdone, pnext) = self.partitions.split_at_mut(depth + 1);
                self.refiner
                    .refine_augmented_unchecked(col, &done[depth], &pdone[depth], &mut next[0], &mut pnext[0]);
            } else {
                self.refiner
                    .refine_into(col, &done[depth], &mut next[0])
                    .expect("pool columns are validated");
            }
            self.path.push(col);
            self.used[idx] = true;
            self.visits += 1;

            let node = EnumNode {
                columns: &self.path,
                ranking: &self.rankings[depth + 1],
                partition: self.augmented.then(|| &self.partitions[depth + 1]),
            };
            visitor(&node, &mut self.refiner);

            if depth + 1 < self.max_card {
                self.dfs(depth + 1, idx + 1, visitor);
            }
            self.path.pop();
            self.used[idx] = false;
        }
    }
}

/// Visits every duplicate-free column sequence of length `1..=max_card`.
pub fn enumerate_sequences<F>(
    matrix: &DataMatrix,
    presort: &ColumnPresort,
    max_card: usize,
    mut visitor: F,
) -> Result<u64>
where
    F: FnMut(&EnumNode<'_>),
{
    let mut e = Enumerator::new(matrix, presort, Mode::Sequences, max_card)?;
    Ok(e.run(|node, _| visitor(node)))
}

/// Visits every column subset of size `1..=max_card`.
pub fn enumerate_subsets<F>(
    matrix: &DataMatrix,
    presort: &ColumnPresort,
    max_card: usize,
    mut visitor: F,
) -> Result<u64>
where
    F: FnMut(&EnumNode<'_>),
{
    let mut e = Enumerator::new(matrix, presort, Mode::Subsets, max_card)?;
    Ok(e.run(|node, _| visitor(node)))
}

/// As [`enumerate_subsets`], with each node also carrying its ordered partition.
pub fn enumerate_subsets_augmented<F>(
    matrix: &DataMatrix,
    presort: &ColumnPresort,
    max_card: usize,
    mut visitor: F,
) -> Result<u64>
where
    F: FnMut(&EnumNode<'_>),
{
    let mut e = Enumerator::new(matrix, presort, Mode::Subsets, max_card)?.augmented(true);
    Ok(e.run(|node, _| visitor(node)))
}

/// Plain combinatorial walk over subsets of `0..n` in the same DFS order,
/// with no ranking attached.
pub fn for_each_subset<F: FnMut(&[usize])>(n: usize, max_card: usize, mut visit: F) -> u64 {
    fn rec<F: FnMut(&[usize])>(n: usize, k: usize, start: usize, path: &mut Vec<usize>, visit: &mut F) -> u64 {
        let mut count = 0;
        for c in start..n {
            path.push(c);
            visit(path);
            count += 1;
            if path.len() < k {
                count += rec(n, k, c + 1, path, visit);
            }
            path.pop();
        }
        count
    }
    rec(n, max_card, 0, &mut Vec::with_capacity(max_card), &mut visit)
}
