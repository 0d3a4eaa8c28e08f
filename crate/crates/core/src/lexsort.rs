//! Lexicographic ranking by refinement.
//!
//! A [`RankingVector`] assigns every row the index of its block of
//! lexicographically equal rows. Appending one column to the sort key splits
//! blocks without reordering them, and with the column presort in hand that
//! split costs a single `O(m)` pass: walk the new column in value order and
//! count, per existing block, how many distinct values have been seen so far.

use crate::error::{Error, Result};
use crate::matrix::{ColumnPresort, DataMatrix};

/// Dense per-row block ranks: the ranks used are exactly `0..num_blocks`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingVector {
    ranks: Vec<u32>,
    num_blocks: usize,
}

impl RankingVector {
    /// Ranking for the empty column sequence: every row in one block.
    pub fn zeros(rows: usize) -> Self {
        RankingVector {
            ranks: vec![0; rows],
            num_blocks: usize::from(rows > 0),
        }
    }

    pub fn from_ranks(ranks: Vec<u32>) -> Result<Self> {
        let m = ranks.len();
        let mut used = vec![false; m];
        for &r in &ranks {
            let r = r as usize;
            if r >= m {
                return Err(Error::NotDense(format!("rank {r} >= row count {m}")));
            }
            used[r] = true;
        }
        let num_blocks = used.iter().take_while(|&&u| u).count();
        if used[num_blocks..].iter().any(|&u| u) {
            return Err(Error::NotDense(format!("rank {num_blocks} is skipped")));
        }
        Ok(RankingVector { ranks, num_blocks })
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn into_ranks(self) -> Vec<u32> {
        self.ranks
    }
}

/// Rows listed block by block from smallest to largest, plus the offset at
/// which each block starts. Block `b` is `order[partition[b]..partition[b + 1]]`
/// with an implicit final offset of `order.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPartition {
    order: Vec<u32>,
    partition: Vec<u32>,
}

impl OrderedPartition {
    /// Identity order, single block.
    pub fn trivial(rows: usize) -> Self {
        OrderedPartition {
            order: (0..rows as u32).collect(),
            partition: if rows > 0 { vec![0] } else { Vec::new() },
        }
    }

    /// Unchecked constructor; see [`OrderedPartition::validate`].
    pub fn new(order: Vec<u32>, partition: Vec<u32>) -> Self {
        OrderedPartition { order, partition }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn partition(&self) -> &[u32] {
        &self.partition
    }

    pub fn rows(&self) -> usize {
        self.order.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.len()
    }

    fn block_end(&self, b: usize) -> usize {
        self.partition.get(b + 1).map_or(self.order.len(), |&p| p as usize)
    }

    pub fn block(&self, b: usize) -> &[u32] {
        &self.order[self.partition[b] as usize..self.block_end(b)]
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_blocks()).map(|b| self.block_end(b) - self.partition[b] as usize)
    }

    /// Checks the structural invariants on their own: `order` is a
    /// permutation and `partition` starts at zero and strictly increases.
    pub fn check_structure(&self) -> Result<()> {
        let m = self.order.len();
        let bad = |msg: String| Err(Error::InconsistentPartition(msg));
        if m > 0 && self.partition.first() != Some(&0) {
            return bad("partition must start at 0".into());
        }
        if m == 0 && !self.partition.is_empty() {
            return bad("empty order with non-empty partition".into());
        }
        if self.partition.windows(2).any(|w| w[0] >= w[1]) {
            return bad("partition is not strictly increasing".into());
        }
        if self.partition.last().is_some_and(|&p| p as usize >= m) {
            return bad("partition offset past end of order".into());
        }
        let mut seen = vec![false; m];
        for &r in &self.order {
            let r = r as usize;
            if r >= m || std::mem::replace(&mut seen[r], true) {
                return bad(format!("order is not a permutation (row {r})"));
            }
        }
        Ok(())
    }

    /// Checks the invariants and consistency with `ranking`: every row in
    /// block `b` must carry rank `b`.
    pub fn validate(&self, ranking: &RankingVector) -> Result<()> {
        if self.order.len() != ranking.len() {
            return Err(Error::RankVectorLengthMismatch {
                expected: ranking.len(),
                found: self.order.len(),
            });
        }
        self.check_structure()?;
        if self.num_blocks() != ranking.num_blocks() {
            return Err(Error::InconsistentPartition(format!(
                "{} blocks in partition, {} in ranking",
                self.num_blocks(),
                ranking.num_blocks()
            )));
        }
        for b in 0..self.num_blocks() {
            if let Some(&row) = self.block(b).iter().find(|&&r| ranking.ranks[r as usize] as usize != b) {
                return Err(Error::InconsistentPartition(format!(
                    "row {row} sits in block {b} but has rank {}",
                    ranking.ranks[row as usize]
                )));
            }
        }
        Ok(())
    }
}

/// Work vectors for one refine, reusable across calls. Only the entries for
/// ranks below the input's block count are reset, which keeps each call `O(m)`.
#[derive(Debug, Clone, Default)]
pub struct RefineScratch {
    /// Most recent value seen in the new column, per input rank.
    id_val: Vec<u32>,
    id_val_init: Vec<bool>,
    /// Per-row index of its value among the distinct values of its block.
    sub_id: Vec<u32>,
    /// Per-rank number of value changes seen (distinct values minus one).
    new_count: Vec<u32>,
    /// Per-rank sum of `new_count` over all lower ranks.
    num_new_id: Vec<u32>,
    /// Next free slot in the new order vector, per input rank.
    cursor: Vec<u32>,
}

impl RefineScratch {
    pub fn new(rows: usize) -> Self {
        let mut s = RefineScratch::default();
        s.ensure(rows);
        s
    }

    fn ensure(&mut self, rows: usize) {
        if self.sub_id.len() < rows {
            self.id_val.resize(rows, 0);
            self.id_val_init.resize(rows, false);
            self.sub_id.resize(rows, 0);
            self.new_count.resize(rows, 0);
            self.num_new_id.resize(rows, 0);
            self.cursor.resize(rows, 0);
        }
    }
}

/// Shared matrix, presort and scratch, with a running count of refine calls.
#[derive(Debug)]
pub struct Refiner<'a> {
    matrix: &'a DataMatrix,
    presort: &'a ColumnPresort,
    scratch: RefineScratch,
    calls: u64,
}

impl<'a> Refiner<'a> {
    pub fn new(matrix: &'a DataMatrix, presort: &'a ColumnPresort) -> Result<Self> {
        if presort.rows() != matrix.rows() {
            return Err(Error::RankVectorLengthMismatch {
                expected: matrix.rows(),
                found: presort.rows(),
            });
        }
        if presort.cols() != matrix.cols() {
            return Err(Error::ColumnOutOfRange {
                column: presort.cols(),
                cols: matrix.cols(),
            });
        }
        Ok(Refiner {
            matrix,
            presort,
            scratch: RefineScratch::new(matrix.rows()),
            calls: 0,
        })
    }

    pub fn matrix(&self) -> &'a DataMatrix {
        self.matrix
    }

    /// Number of refine passes run so far.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    fn check(&self, col: usize, ranking: &RankingVector) -> Result<()> {
        self.matrix.check_column(col)?;
        if ranking.len() != self.matrix.rows() {
            return Err(Error::RankVectorLengthMismatch {
                expected: self.matrix.rows(),
                found: ranking.len(),
            });
        }
        Ok(())
    }

    /// Refines `src` by column `col`, writing the result into `dst`.
    pub fn refine_into(&mut self, col: usize, src: &RankingVector, dst: &mut RankingVector) -> Result<()> {
        self.check(col, src)?;
        let added = self.scan(col, src, None);
        let s = &self.scratch;
        dst.ranks.clear();
        dst.ranks.extend(
            src.ranks
                .iter()
                .zip(&s.sub_id)
                .map(|(&r, &sub)| r + s.num_new_id[r as usize] + sub),
        );
        dst.num_blocks = src.num_blocks + added;
        Ok(())
    }

    pub fn refine(&mut self, col: usize, src: &RankingVector) -> Result<RankingVector> {
        let mut dst = RankingVector::zeros(0);
        self.refine_into(col, src, &mut dst)?;
        Ok(dst)
    }

    /// Refines a consistent `(ranking, partition)` pair by column `col`.
    pub fn refine_augmented(
        &mut self,
        col: usize,
        ranking: &RankingVector,
        partition: &OrderedPartition,
    ) -> Result<(RankingVector, OrderedPartition)> {
        self.check(col, ranking)?;
        partition.validate(ranking)?;
        let mut out_l = RankingVector::zeros(0);
        let mut out_p = OrderedPartition::trivial(0);
        self.refine_augmented_unchecked(col, ranking, partition, &mut out_l, &mut out_p);
        Ok((out_l, out_p))
    }

    /// As [`Refiner::refine_augmented`] but trusts that the inputs agree.
    /// Inconsistent input may panic.
    pub(crate) fn refine_augmented_unchecked(
        &mut self,
        col: usize,
        src_l: &RankingVector,
        src_p: &OrderedPartition,
        dst_l: &mut RankingVector,
        dst_p: &mut OrderedPartition,
    ) {
        let m = self.matrix.rows();
        dst_p.order.clear();
        dst_p.order.resize(m, 0);
        let added = self.scan(col, src_l, Some((src_p, &mut dst_p.order)));

        let s = &self.scratch;
        dst_l.ranks.clear();
        dst_l.ranks.resize(m, 0);
        dst_l.num_blocks = src_l.num_blocks + added;
        dst_p.partition.clear();
        let mut prev = None;
        for (t, &row) in dst_p.order.iter().enumerate() {
            let old = src_l.ranks[row as usize];
            let new = old + s.num_new_id[old as usize] + s.sub_id[row as usize];
            dst_l.ranks[row as usize] = new;
            if prev != Some(new) {
                prev = Some(new);
                dst_p.partition.push(t as u32);
            }
        }
    }

    /// The refine pass shared by both variants. Fills `sub_id` and
    /// `num_new_id`, optionally scatters rows into a new order vector, and
    /// returns the number of blocks added.
    fn scan(
        &mut self,
        col: usize,
        src: &RankingVector,
        mut reorder: Option<(&OrderedPartition, &mut Vec<u32>)>,
    ) -> usize {
        self.calls += 1;
        let blocks = src.num_blocks;
        let values = self.matrix.column(col);
        let by_value = self.presort.column(col);
        let s = &mut self.scratch;
        s.ensure(src.len());

        s.id_val_init[..blocks].fill(false);
        s.new_count[..blocks].fill(0);
        if let Some((p, _)) = &reorder {
            s.cursor[..blocks].copy_from_slice(&p.partition);
        }

        for &row in by_value {
            let row = row as usize;
            let rank = src.ranks[row] as usize;
            let value = values[row];
            if let Some((_, order)) = reorder.as_mut() {
                order[s.cursor[rank] as usize] = row as u32;
                s.cursor[rank] += 1;
            }
            if !s.id_val_init[rank] {
                s.id_val_init[rank] = true;
                s.id_val[rank] = value;
            } else if s.id_val[rank] != value {
                s.id_val[rank] = value;
                s.new_count[rank] += 1;
            }
            s.sub_id[row] = s.new_count[rank];
        }

        if blocks == 0 {
            return 0;
        }
        // Backward partial sums: num_new_id[r] = sum of new_count[..r].
        let total: u32 = s.new_count[..blocks].iter().sum();
        let top = blocks - 1;
        s.num_new_id[top] = total - s.new_count[top];
        for r in (1..top).rev() {
            s.num_new_id[r] = s.num_new_id[r + 1] - s.new_count[r];
        }
        s.num_new_id[0] = 0;
        total as usize
    }

    /// Ranks the rows restricted to `seq`, one refine per column.
    pub fn lex_sort(&mut self, seq: &[usize]) -> Result<RankingVector> {
        for &c in seq {
            self.matrix.check_column(c)?;
        }
        let mut current = RankingVector::zeros(self.matrix.rows());
        let mut next = RankingVector::zeros(0);
        for &c in seq {
            self.refine_into(c, &current, &mut next)?;
            std::mem::swap(&mut current, &mut next);
        }
        Ok(current)
    }
}

/// Refines `ranking` by appending column `col` to its sort key.
pub fn refine(
    matrix: &DataMatrix,
    presort: &ColumnPresort,
    col: usize,
    ranking: &RankingVector,
) -> Result<RankingVector> {
    Refiner::new(matrix, presort)?.refine(col, ranking)
}

/// Refines a ranking together with its order and partition vectors.
pub fn refine_augmented(
    matrix: &DataMatrix,
    presort: &ColumnPresort,
    col: usize,
    ranking: &RankingVector,
    partition: &OrderedPartition,
) -> Result<(RankingVector, OrderedPartition)> {
    Refiner::new(matrix, presort)?.refine_augmented(col, ranking, partition)
}

/// Ranking of `matrix` restricted to the column sequence `seq`.
pub fn lex_sort(matrix: &DataMatrix, presort: &ColumnPresort, seq: &[usize]) -> Result<RankingVector> {
    Refiner::new(matrix, presort)?.lex_sort(seq)
}

/// Order vector and partition for a ranking, by counting sort. `O(m)`.
pub fn ordered_partition(ranking: &RankingVector) -> OrderedPartition {
    let mut starts = vec![0u32; ranking.num_blocks() + 1];
    for &r in ranking.ranks() {
        starts[r as usize + 1] += 1;
    }
    for b in 1..starts.len() {
        starts[b] += starts[b - 1];
    }
    starts.pop();
    let mut cursor = starts.clone();
    let mut order = vec![0u32; ranking.len()];
    for (row, &r) in ranking.ranks().iter().enumerate() {
        order[cursor[r as usize] as usize] = row as u32;
        cursor[r as usize] += 1;
    }
    OrderedPartition::new(order, starts)
}

/// True iff `finer` keeps every strict inequality of `coarser`:
/// `coarser[j] < coarser[k]` implies `finer[j] < finer[k]`.
pub fn is_refinement(coarser: &RankingVector, finer: &RankingVector) -> Result<bool> {
    if coarser.len() != finer.len() {
        return Err(Error::LengthMismatch {
            left: coarser.len(),
            right: finer.len(),
        });
    }
    let blocks = coarser.num_blocks();
    let mut lo = vec![u32::MAX; blocks];
    let mut hi = vec![0u32; blocks];
    for (&c, &f) in coarser.ranks().iter().zip(finer.ranks()) {
        let c = c as usize;
        lo[c] = lo[c].min(f);
        hi[c] = hi[c].max(f);
    }
    Ok((1..blocks).all(|b| hi[b - 1] < lo[b]))
}
