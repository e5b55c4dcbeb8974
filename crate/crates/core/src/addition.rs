//! Addition of binary expansions and the carry-augmented window law.
//!
//! A word `b₀b₁…b_{n−1}` is read as the fraction `0.b₀b₁…`, so position 0
//! is the most significant bit and carries travel towards lower indices.
//! Prefix sums assume carry-in 0 beyond the last position and are taken
//! modulo 1.

use std::collections::BTreeMap;

use crate::bitseq::{mask, Word};
use crate::entropy::{block_entropy_h, entropy_from_counts};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumResult {
    pub sum: Word,
    /// Carry out of position 0 (the integer part dropped by the mod-1 sum).
    pub overflow: u8,
    /// Length of the trailing run of 1s in `sum`; only these positions can
    /// change if a carry arrives from beyond the prefix.
    pub uncertainty_span: usize,
    /// `carries[i]` is the carry entering position `i` from position `i+1`.
    carries: Vec<u8>,
}

impl SumResult {
    pub fn carry_into(&self, i: usize) -> u8 {
        self.carries[i]
    }
}

pub fn add_prefixes(u: &Word, v: &Word) -> Result<SumResult> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    let n = u.len();
    let mut carries = vec![0u8; n];
    let mut digits = vec![0u8; n];
    let mut carry = 0u8;
    for i in (0..n).rev() {
        carries[i] = carry;
        let s = u.get(i) + v.get(i) + carry;
        digits[i] = s & 1;
        carry = s >> 1;
    }
    let sum = Word::from_symbols(&digits)?;
    let uncertainty_span = digits.iter().rev().take_while(|&&d| d == 1).count();
    Ok(SumResult {
        sum,
        overflow: carry,
        uncertainty_span,
        carries,
    })
}

/// `(ℓ+1)`-bit sum of two windows read most-significant-first, with carry
/// `d` entering the last position. Blocks use the crate's encoding (bit `j`
/// is window position `j`).
pub fn window_sum(a: u64, b: u64, carry_in: u8, width: usize) -> u64 {
    let mut out = 0u64;
    let mut carry = carry_in as u64;
    for j in (0..width).rev() {
        let s = ((a >> j) & 1) + ((b >> j) & 1) + carry;
        out |= (s & 1) << j;
        carry = s >> 1;
    }
    out
}

/// Which variables of the carry table to keep when marginalizing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Keep {
    pub z: bool,
    pub x: bool,
    pub y: bool,
    pub carry: bool,
}

/// Joint counts of `(z-window, x-window, y-window, carry)` over the `n−ℓ`
/// windows of length `ℓ+1`, where `carry` is the actual carry entering the
/// window's last position during the prefix addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarryJointDistribution {
    pub n: usize,
    pub ell: usize,
    counts: BTreeMap<(u64, u64, u64, u8), u64>,
    denominator: u64,
}

impl CarryJointDistribution {
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn support(&self) -> impl Iterator<Item = (&(u64, u64, u64, u8), &u64)> {
        self.counts.iter()
    }

    /// Every tuple with positive count satisfies `z = x + y + carry` on the
    /// window.
    pub fn is_consistent(&self) -> bool {
        let width = self.ell + 1;
        self.counts
            .keys()
            .all(|&(z, x, y, d)| window_sum(x, y, d, width) == z)
    }

    pub fn marginal(&self, keep: Keep) -> BTreeMap<(u64, u64, u64, u8), u64> {
        let mut out = BTreeMap::new();
        for (&(z, x, y, d), &c) in &self.counts {
            let key = (
                if keep.z { z } else { 0 },
                if keep.x { x } else { 0 },
                if keep.y { y } else { 0 },
                if keep.carry { d } else { 0 },
            );
            *out.entry(key).or_insert(0) += c;
        }
        out
    }

    /// Entropy (bits) of the kept variables.
    pub fn entropy(&self, keep: Keep) -> f64 {
        entropy_from_counts(self.marginal(keep).into_values(), self.denominator)
    }
}

pub fn carry_joint(x: &Word, y: &Word, ell: usize) -> Result<CarryJointDistribution> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    let width = ell + 1;
    if width > n || width > 21 {
        return Err(Error::BlockLength {
            ell,
            len: n,
            min: 0,
            max: n.saturating_sub(1).min(20),
        });
    }
    let s = add_prefixes(x, y)?;
    let mut counts = BTreeMap::new();
    for i in 0..n - ell {
        let key = (
            s.sum.block(i, width),
            x.block(i, width),
            y.block(i, width),
            s.carry_into(i + ell),
        );
        *counts.entry(key).or_insert(0u64) += 1;
    }
    debug_assert!(counts.keys().all(|&(z, _, _, _)| z <= mask(width)));
    Ok(CarryJointDistribution {
        n,
        ell,
        counts,
        denominator: (n - ell) as u64,
    })
}

/// Entropies read off one carry table.
#[derive(Clone, Debug, PartialEq)]
pub struct CarryEntropies {
    pub z: f64,
    pub x: f64,
    pub y: f64,
    pub carry: f64,
    pub xyc: f64,
    pub zxyc: f64,
}

impl CarryEntropies {
    pub fn of(d: &CarryJointDistribution) -> Self {
        let only = |z, x, y, carry| Keep { z, x, y, carry };
        CarryEntropies {
            z: d.entropy(only(true, false, false, false)),
            x: d.entropy(only(false, true, false, false)),
            y: d.entropy(only(false, false, true, false)),
            carry: d.entropy(only(false, false, false, true)),
            xyc: d.entropy(only(false, true, true, true)),
            zxyc: d.entropy(only(true, true, true, true)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubadditivityRow {
    pub ell: usize,
    pub h_x: f64,
    pub h_y: f64,
    pub h_sum: f64,
    /// `h_x + h_y − h_sum`
    pub slack: f64,
    /// `H(C)/(ℓ+1)` from the carry table at parameter ℓ
    pub carry_penalty: f64,
}

pub fn subadditivity_report(x: &Word, y: &Word, ells: &[usize]) -> Result<Vec<SubadditivityRow>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let z = add_prefixes(x, y)?.sum;
    ells.iter()
        .map(|&ell| {
            let h_x = block_entropy_h(x, ell)?;
            let h_y = block_entropy_h(y, ell)?;
            let h_sum = block_entropy_h(&z, ell)?;
            let joint = carry_joint(x, y, ell)?;
            let h_c = joint.entropy(Keep {
                carry: true,
                ..Keep::default()
            });
            Ok(SubadditivityRow {
                ell,
                h_x,
                h_y,
                h_sum,
                slack: h_x + h_y - h_sum,
                carry_penalty: h_c / (ell + 1) as f64,
            })
        })
        .collect()
}

pub const SUBADDITIVITY_HEADER: &str = "ell,h_x,h_y,h_sum,slack,carry_penalty";

pub fn write_subadditivity_csv<W: std::io::Write>(rows: &[SubadditivityRow], mut out: W) -> std::io::Result<()> {
    use crate::bounds::fmt_sig;
    writeln!(out, "{SUBADDITIVITY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.ell,
            fmt_sig(r.h_x),
            fmt_sig(r.h_y),
            fmt_sig(r.h_sum),
            fmt_sig(r.slack),
            fmt_sig(r.carry_penalty)
        )?;
    }
    Ok(())
}
