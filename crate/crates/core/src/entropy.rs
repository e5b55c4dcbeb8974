//! Non-aligned block entropy and the empirical window distribution.
//!
//! For a word `w` of length `n` and `ℓ < n`, picking one of the `n−ℓ`
//! windows of length `ℓ+1` uniformly at random gives dependent bits
//! `X_0,…,X_ℓ` with `p(a_0…a_ℓ) = occ(w, a_0…a_ℓ)/(n−ℓ)`. Block entropy,
//! its conditional form and the error profiles in [`crate::bounds`] are all
//! read off this one table.
//!
//! Probabilities are exact (integer counts over a common denominator);
//! entropies are `f64` in bits.

use num_traits::{Signed, Zero};

use crate::bitseq::{block_counts, mask, BlockCounts, Word};
use crate::error::{Error, Result};
use crate::exact::{rat_int, to_f64, Rational};

/// Largest `ℓ+1` for which the window distribution is materialized.
pub const MAX_WINDOW: usize = 24;

/// `−c/t · log₂(c/t)` with `0·log 0 = 0`.
#[inline]
fn plogp(count: u64, total: u64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let p = count as f64 / total as f64;
    -p * p.log2()
}

/// Shannon entropy (bits) of the distribution `counts / total`.
pub fn entropy_from_counts<I: IntoIterator<Item = u64>>(counts: I, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    counts.into_iter().map(|c| plogp(c, total)).sum()
}

/// `η(α) = −α log₂ α − (1−α) log₂(1−α)`, with `η(0) = η(1) = 0`.
pub fn binary_entropy(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("η needs α ∈ [0,1], got {alpha}")));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(alpha) + term(1.0 - alpha))
}

pub fn binary_entropy_exact(alpha: &Rational) -> Result<f64> {
    if alpha.is_negative() || *alpha > Rational::from_integer(1.into()) {
        return Err(Error::InvalidParameter(format!("η needs α ∈ [0,1], got {alpha}")));
    }
    if alpha.is_zero() || *alpha == Rational::from_integer(1.into()) {
        return Ok(0.0);
    }
    binary_entropy(to_f64(alpha))
}

/// `η(c1 / (c0 + c1))` computed from integer counts.
#[inline]
pub(crate) fn binary_entropy_counts(c0: u64, c1: u64) -> f64 {
    entropy_from_counts([c0, c1], c0 + c1)
}

/// `h_ℓ(w) = −(1/ℓ) Σ_u f_u log₂ f_u`, `f_u = occ(w,u)/(|w|−ℓ+1)`.
pub fn block_entropy_h(w: &Word, ell: usize) -> Result<f64> {
    Ok(block_entropy_from_counts(&block_counts(w, ell)?))
}

pub fn block_entropy_from_counts(counts: &BlockCounts) -> f64 {
    let ell = counts.block_length();
    entropy_from_counts(counts.iter_nonzero().map(|(_, c)| c), counts.total()) / ell as f64
}

/// Joint law of the `ℓ+1` window bits. `count(b)/denominator` is the exact
/// probability of the window whose block encoding is `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalBlockDistribution {
    n: usize,
    ell: usize,
    counts: Vec<u64>,
    denominator: u64,
}

impl EmpiricalBlockDistribution {
    pub fn from_word(w: &Word, ell: usize) -> Result<Self> {
        if ell + 1 > w.len() || ell + 1 > MAX_WINDOW {
            return Err(Error::BlockLength {
                ell,
                len: w.len(),
                min: 0,
                max: w.len().saturating_sub(1).min(MAX_WINDOW - 1),
            });
        }
        Self::from_counts(&block_counts(w, ell + 1)?, w.len())
    }

    /// Wraps counts of `(ℓ+1)`-blocks of a word of length `n`.
    pub fn from_counts(counts: &BlockCounts, n: usize) -> Result<Self> {
        let window = counts.block_length();
        if window > MAX_WINDOW || counts.total() != (n + 1 - window) as u64 {
            return Err(Error::InvalidParameter(format!(
                "counts of {window}-blocks do not describe a word of length {n}"
            )));
        }
        let table = (0..1u64 << window).map(|k| counts.get(k)).collect();
        Ok(EmpiricalBlockDistribution {
            n,
            ell: window - 1,
            counts: table,
            denominator: counts.total(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of windows, `n − ℓ`.
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn count(&self, block: u64) -> u64 {
        self.counts[block as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn prob(&self, block: u64) -> Rational {
        rat_int(self.count(block)) / rat_int(self.denominator)
    }

    /// Counts of the sub-block `X_start … X_{start+len−1}`, indexed by its
    /// encoding.
    pub fn marginal_counts(&self, start: usize, len: usize) -> Vec<u64> {
        assert!(start + len <= self.ell + 1, "coordinates out of range");
        let mut out = vec![0u64; 1usize << len];
        let m = mask(len);
        for (k, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                out[((k as u64 >> start) & m) as usize] += c;
            }
        }
        out
    }

    /// The same windows with coordinate 0 moved to the last slot: the law
    /// of `(X_1,…,X_ℓ,X_0)`. Predicting the last coordinate of the rotated
    /// law is predicting a symbol from the ℓ symbols after it.
    pub fn rotate_first_to_last(&self) -> Self {
        let ell = self.ell;
        let mut counts = vec![0u64; self.counts.len()];
        for (k, &c) in self.counts.iter().enumerate() {
            let k = k as u64;
            let rotated = (k >> 1) | ((k & 1) << ell);
            counts[rotated as usize] = c;
        }
        EmpiricalBlockDistribution { counts, ..self.clone() }
    }
}

pub fn empirical_distribution(w: &Word, ell: usize) -> Result<EmpiricalBlockDistribution> {
    EmpiricalBlockDistribution::from_word(w, ell)
}

/// `H(X_0,…,X_ℓ)`.
pub fn joint_entropy(d: &EmpiricalBlockDistribution) -> f64 {
    entropy_from_counts(d.counts.iter().copied(), d.denominator)
}

/// `H(X_ℓ | X_0,…,X_{ℓ−1}) = Σ_ā p(ā)·η(p(1|ā))`.
pub fn conditional_entropy_last(d: &EmpiricalBlockDistribution) -> f64 {
    conditional_entropy_window(d, d.ell, 0).expect("coordinates in range")
}

/// `H(X_i | X_0,…,X_{i−1})`; `i = 0` gives the entropy of `X_0`.
pub fn conditional_entropy_at(d: &EmpiricalBlockDistribution, i: usize) -> Result<f64> {
    conditional_entropy_window(d, i, 0)
}

/// `H(X_target | X_from,…,X_{target−1})`, `from ≤ target ≤ ℓ`.
pub fn conditional_entropy_window(d: &EmpiricalBlockDistribution, target: usize, from: usize) -> Result<f64> {
    if target > d.ell || from > target {
        return Err(Error::InvalidParameter(format!(
            "coordinates {from}..={target} outside 0..={}",
            d.ell
        )));
    }
    let ctx_len = target - from;
    let m = d.marginal_counts(from, ctx_len + 1);
    let total = d.denominator as f64;
    let h = (0..1usize << ctx_len)
        .map(|ctx| {
            let (c0, c1) = (m[ctx], m[ctx | (1 << ctx_len)]);
            if c0 + c1 == 0 {
                0.0
            } else {
                (c0 + c1) as f64 / total * binary_entropy_counts(c0, c1)
            }
        })
        .sum();
    Ok(h)
}

/// Largest atom-wise gap between the laws of two equal-width sub-blocks
/// `X_{i−j..i}` and `X_{k−j..k}` (width `j+1`), over all `i, k ∈ [j, ℓ]`.
pub fn max_shift_gap(d: &EmpiricalBlockDistribution, width: usize) -> Result<Rational> {
    if width == 0 || width > d.ell + 1 {
        return Err(Error::InvalidParameter(format!("sub-block width {width} out of range")));
    }
    let laws: Vec<Vec<u64>> = (0..=d.ell + 1 - width).map(|s| d.marginal_counts(s, width)).collect();
    let mut worst = 0u64;
    for a in &laws {
        for b in &laws {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max(x.abs_diff(*y));
            }
        }
    }
    Ok(rat_int(worst) / rat_int(d.denominator))
}

/// `2ℓ/(n−ℓ)`, the bound on [`max_shift_gap`].
pub fn shift_bound(d: &EmpiricalBlockDistribution) -> Rational {
    rat_int(2 * d.ell as u64) / rat_int(d.denominator)
}

/// Finite-`n` snapshot of block entropy against conditional block entropy.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalConvergence {
    pub n: usize,
    pub ell: usize,
    pub ell_prime: usize,
    /// `H(X_0…X_ℓ)/(ℓ+1)`
    pub normalized_joint: f64,
    /// `H(X_ℓ | X_0…X_{ℓ−1})`
    pub conditional: f64,
    /// `H(X_0…X_{ℓ'})/(ℓ'+1)`
    pub normalized_joint_prime: f64,
    /// `conditional − normalized_joint`; tends to ≤ 0 as n grows.
    pub lower_gap: f64,
    /// `normalized_joint_prime − conditional`; tends to ≤ ℓ/(ℓ'+1) as n grows.
    pub upper_gap: f64,
}

pub fn conditional_convergence(x: &Word, ell: usize, ell_prime: usize) -> Result<ConditionalConvergence> {
    if ell_prime < ell {
        return Err(Error::InvalidParameter(format!("need ℓ' ≥ ℓ, got ℓ={ell}, ℓ'={ell_prime}")));
    }
    let d = empirical_distribution(x, ell)?;
    let dp = empirical_distribution(x, ell_prime)?;
    let normalized_joint = joint_entropy(&d) / (ell + 1) as f64;
    let conditional = conditional_entropy_last(&d);
    let normalized_joint_prime = joint_entropy(&dp) / (ell_prime + 1) as f64;
    Ok(ConditionalConvergence {
        n: x.len(),
        ell,
        ell_prime,
        normalized_joint,
        conditional,
        normalized_joint_prime,
        lower_gap: conditional - normalized_joint,
        upper_gap: normalized_joint_prime - conditional,
    })
}
