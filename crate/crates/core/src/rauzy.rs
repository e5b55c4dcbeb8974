//! Best-predictor error rates β_ℓ and γ_ℓ of finite words.
//!
//! `γ_ℓ(w)` is the smallest fraction of mismatches any table
//! `f : {0,1}^ℓ → {0,1}` makes when it guesses `w[i]` from the ℓ symbols
//! before it (`i ∈ {ℓ,…,|w|−1}`); `β_ℓ(w)` is the same with the ℓ symbols
//! after it (`i ∈ {0,…,|w|−ℓ−1}`). Both have `|w|−ℓ` positions.
//!
//! The optimum is attained by taking, for each context, the majority of the
//! symbols that follow (or precede) it, so both values reduce to sums of
//! `min(c(u0), c(u1))` over counts of `(ℓ+1)`-blocks.

use std::ops::Add;

use num_traits::Zero;

use crate::bitseq::{block_counts, BlockCounts, Word, MAX_BLOCK_LENGTH};
use crate::error::{Error, Result};
use crate::exact::{rat_int, to_f64, Rational};

/// Where the context sits relative to the predicted symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContextSide {
    /// Context follows the symbol: `β_ℓ`.
    After,
    /// Context precedes the symbol: `γ_ℓ`.
    Before,
}

/// Mismatch count over `positions` predictions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RauzyValue {
    pub mismatches: u64,
    pub positions: u64,
}

impl RauzyValue {
    /// `mismatches / positions` as an exact fraction.
    pub fn value(&self) -> Rational {
        rat_int(self.mismatches) / rat_int(self.positions)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value())
    }
}

/// Prediction table for one context length and side. `table[u]` is the
/// symbol predicted for the context whose block encoding is `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictorTable {
    context_length: usize,
    side: ContextSide,
    table: Vec<u8>,
}

impl PredictorTable {
    pub fn new(context_length: usize, side: ContextSide, table: Vec<u8>) -> Result<Self> {
        if context_length == 0 || context_length > 24 || table.len() != 1usize << context_length {
            return Err(Error::InvalidParameter(format!(
                "predictor table for ℓ={context_length} needs 2^ℓ entries, got {}",
                table.len()
            )));
        }
        if table.iter().any(|&s| s > 1) {
            return Err(Error::InvalidParameter("predicted symbols must be 0 or 1".into()));
        }
        Ok(PredictorTable {
            context_length,
            side,
            table,
        })
    }

    pub fn context_length(&self) -> usize {
        self.context_length
    }

    pub fn side(&self) -> ContextSide {
        self.side
    }

    pub fn predict(&self, context: u64) -> u8 {
        self.table[context as usize]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.table
    }

    /// Applies the table to every position of `w` and counts mismatches.
    pub fn mismatches(&self, w: &Word) -> Result<u64> {
        let ell = self.context_length;
        check_ell(w, ell)?;
        let n = w.len();
        let miss = match self.side {
            ContextSide::Before => (ell..n).filter(|&i| self.predict(w.block(i - ell, ell)) != w.get(i)).count(),
            ContextSide::After => (0..n - ell)
                .filter(|&i| self.predict(w.block(i + 1, ell)) != w.get(i))
                .count(),
        };
        Ok(miss as u64)
    }
}

fn check_ell(w: &Word, ell: usize) -> Result<()> {
    if ell == 0 || ell >= w.len() || ell + 1 > MAX_BLOCK_LENGTH {
        return Err(Error::BlockLength {
            ell,
            len: w.len(),
            min: 1,
            max: w.len().saturating_sub(1).min(MAX_BLOCK_LENGTH - 1),
        });
    }
    Ok(())
}

/// Indices into an `(ℓ+1)`-block table of the two blocks that pair context
/// `u` with target symbol 0 and target symbol 1.
#[inline]
pub(crate) fn target_pair(context: u64, ell: usize, side: ContextSide) -> (u64, u64) {
    match side {
        ContextSide::Before => (context, context | (1u64 << ell)),
        ContextSide::After => (context << 1, (context << 1) | 1),
    }
}

/// `Σ_u min(t(u,0), t(u,1))` over all `2^ℓ` contexts of an `(ℓ+1)`-block
/// table given by `lookup`.
pub(crate) fn min_pair_sum<T, F>(ell: usize, side: ContextSide, lookup: F) -> T
where
    T: Ord + Zero + Add<Output = T>,
    F: Fn(u64) -> T,
{
    (0..1u64 << ell).fold(T::zero(), |acc, u| {
        let (i0, i1) = target_pair(u, ell, side);
        acc + std::cmp::min(lookup(i0), lookup(i1))
    })
}

/// `β_ℓ` or `γ_ℓ` from the counts of all `(ℓ+1)`-blocks of a word.
pub fn rauzy_from_counts(counts: &BlockCounts, side: ContextSide) -> Result<RauzyValue> {
    let ell = counts.block_length() - 1;
    if ell == 0 || counts.total() == 0 {
        return Err(Error::InvalidParameter(
            "need counts of blocks of length ≥ 2 over a non-empty word".into(),
        ));
    }
    let mismatches = if ell <= 24 {
        min_pair_sum(ell, side, |k| counts.get(k))
    } else {
        sparse_min_pair_sum(counts, ell, side)
    };
    Ok(RauzyValue {
        mismatches,
        positions: counts.total(),
    })
}

fn sparse_min_pair_sum(counts: &BlockCounts, ell: usize, side: ContextSide) -> u64 {
    let mut seen = std::collections::BTreeSet::new();
    let mut total = 0;
    for (k, _) in counts.iter_nonzero() {
        let context = match side {
            ContextSide::Before => k & crate::bitseq::mask(ell),
            ContextSide::After => k >> 1,
        };
        if seen.insert(context) {
            let (i0, i1) = target_pair(context, ell, side);
            total += counts.get(i0).min(counts.get(i1));
        }
    }
    total
}

pub fn rauzy_ell(w: &Word, ell: usize, side: ContextSide) -> Result<RauzyValue> {
    check_ell(w, ell)?;
    rauzy_from_counts(&block_counts(w, ell + 1)?, side)
}

/// `γ_ℓ(w)`: best error rate predicting a symbol from the ℓ before it.
pub fn gamma_ell(w: &Word, ell: usize) -> Result<RauzyValue> {
    rauzy_ell(w, ell, ContextSide::Before)
}

/// `β_ℓ(w)`: best error rate predicting a symbol from the ℓ after it.
pub fn beta_ell(w: &Word, ell: usize) -> Result<RauzyValue> {
    rauzy_ell(w, ell, ContextSide::After)
}

/// Majority-vote predictor attaining the optimum. Ties, including contexts
/// that never occur, predict 0.
pub fn best_predictor(w: &Word, ell: usize, side: ContextSide) -> Result<PredictorTable> {
    check_ell(w, ell)?;
    if ell > 24 {
        return Err(Error::InvalidParameter("predictor tables are limited to ℓ ≤ 24".into()));
    }
    let counts = block_counts(w, ell + 1)?;
    let table = (0..1u64 << ell)
        .map(|u| {
            let (i0, i1) = target_pair(u, ell, side);
            u8::from(counts.get(i1) > counts.get(i0))
        })
        .collect();
    PredictorTable::new(ell, side, table)
}

/// Exhaustive minimum over all `2^(2^ℓ)` prediction tables, `ℓ ≤ 3`.
pub fn brute_force_rauzy(w: &Word, ell: usize, side: ContextSide) -> Result<RauzyValue> {
    if ell > 3 {
        return Err(Error::InvalidParameter(format!(
            "brute force is limited to ℓ ≤ 3, got {ell}"
        )));
    }
    check_ell(w, ell)?;
    let n = w.len();
    let contexts = 1usize << ell;
    let mut best = u64::MAX;
    for f in 0u64..1u64 << contexts {
        let predict = |ctx: usize| ((f >> ctx) & 1) as u8;
        let mut miss = 0u64;
        match side {
            ContextSide::Before => {
                for i in ell..n {
                    let ctx = (0..ell).fold(0usize, |acc, j| acc | ((w.get(i - ell + j) as usize) << j));
                    miss += u64::from(predict(ctx) != w.get(i));
                }
            }
            ContextSide::After => {
                for i in 0..n - ell {
                    let ctx = (0..ell).fold(0usize, |acc, j| acc | ((w.get(i + 1 + j) as usize) << j));
                    miss += u64::from(predict(ctx) != w.get(i));
                }
            }
        }
        best = best.min(miss);
    }
    Ok(RauzyValue {
        mismatches: best,
        positions: (n - ell) as u64,
    })
}
