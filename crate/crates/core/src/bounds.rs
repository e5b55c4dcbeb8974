//! Finite-word sandwich `2γ_ℓ ≤ H(X_ℓ | X_0…X_{ℓ−1}) ≤ η(γ_ℓ)` and
//! prefix convergence tables.
//!
//! With `e(ā) = min(p(0|ā), p(1|ā))` the per-context error probability,
//! `γ_ℓ(w) = Σ p(ā)e(ā)` and `H(X_ℓ | ā) = Σ p(ā)η(e(ā))`. The left
//! inequality is `2e ≤ η(e)` on `[0, 1/2]`, the right one is Jensen.

use std::io::Write;

use crate::bitseq::{BlockCounter, Word};
use crate::entropy::{binary_entropy, binary_entropy_counts, block_entropy_from_counts, conditional_entropy_last, EmpiricalBlockDistribution};
use crate::error::{Error, Result};
use crate::exact::{rat_int, to_f64, Rational};
use crate::rauzy::{rauzy_from_counts, ContextSide, RauzyValue};

/// Float slack on inequalities that hold exactly over the reals.
pub const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextError {
    pub context: u64,
    /// `p(ā)`
    pub probability: Rational,
    /// `e(ā)`
    pub error: Rational,
    target_counts: (u64, u64),
}

/// Per-context probabilities and error probabilities, for contexts with
/// `p(ā) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorProfile {
    pub ell: usize,
    pub n: usize,
    pub side: ContextSide,
    pub entries: Vec<ContextError>,
}

impl ErrorProfile {
    /// Reads the profile off a window distribution. For
    /// [`ContextSide::After`] the first coordinate is the predicted one.
    pub fn from_distribution(d: &EmpiricalBlockDistribution, side: ContextSide) -> Self {
        let oriented;
        let d = match side {
            ContextSide::Before => d,
            ContextSide::After => {
                oriented = d.rotate_first_to_last();
                &oriented
            }
        };
        let ell = d.ell();
        let denom = d.denominator();
        let entries = (0..1u64 << ell)
            .filter_map(|ctx| {
                let c0 = d.count(ctx);
                let c1 = d.count(ctx | (1 << ell));
                let seen = c0 + c1;
                (seen > 0).then(|| ContextError {
                    context: ctx,
                    probability: rat_int(seen) / rat_int(denom),
                    error: rat_int(c0.min(c1)) / rat_int(seen),
                    target_counts: (c0, c1),
                })
            })
            .collect();
        ErrorProfile {
            ell,
            n: d.n(),
            side,
            entries,
        }
    }

    /// `Σ p(ā)·e(ā)`.
    pub fn error_rate(&self) -> Rational {
        self.entries.iter().map(|e| &e.probability * &e.error).sum()
    }

    /// `Σ p(ā)·η(e(ā))`, which is the conditional entropy of the predicted
    /// coordinate given the context.
    pub fn conditional_entropy(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| to_f64(&e.probability) * binary_entropy_counts(e.target_counts.0, e.target_counts.1))
            .sum()
    }
}

pub fn error_profile(w: &Word, ell: usize) -> Result<ErrorProfile> {
    error_profile_with(w, ell, ContextSide::Before)
}

pub fn error_profile_with(w: &Word, ell: usize, side: ContextSide) -> Result<ErrorProfile> {
    let d = EmpiricalBlockDistribution::from_word(w, ell)?;
    Ok(ErrorProfile::from_distribution(&d, side))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub ell: usize,
    pub n: usize,
    pub gamma: Rational,
    pub beta: Rational,
    /// `H(X_ℓ | X_0…X_{ℓ−1})`
    pub hc: f64,
    /// Conditional entropy of the first window symbol given the rest.
    pub hc_beta: f64,
    pub eta_gamma: f64,
    pub eta_beta: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub lower_ok_beta: bool,
    pub upper_ok_beta: bool,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok && self.lower_ok_beta && self.upper_ok_beta
    }
}

pub fn verify_sandwich(w: &Word, ell: usize) -> Result<SandwichReport> {
    let d = EmpiricalBlockDistribution::from_word(w, ell)?;
    let fwd = ErrorProfile::from_distribution(&d, ContextSide::Before);
    let bwd = ErrorProfile::from_distribution(&d, ContextSide::After);
    let gamma = fwd.error_rate();
    let beta = bwd.error_rate();
    let hc = fwd.conditional_entropy();
    let hc_beta = bwd.conditional_entropy();
    let eta_gamma = binary_entropy(to_f64(&gamma))?;
    let eta_beta = binary_entropy(to_f64(&beta))?;
    Ok(SandwichReport {
        ell,
        n: w.len(),
        lower_ok: 2.0 * to_f64(&gamma) <= hc + SANDWICH_SLACK,
        upper_ok: hc <= eta_gamma + SANDWICH_SLACK,
        lower_ok_beta: 2.0 * to_f64(&beta) <= hc_beta + SANDWICH_SLACK,
        upper_ok_beta: hc_beta <= eta_beta + SANDWICH_SLACK,
        gamma,
        beta,
        hc,
        hc_beta,
        eta_gamma,
        eta_beta,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ell: usize,
    pub beta: RauzyValue,
    pub gamma: RauzyValue,
    /// `h_ℓ` of the prefix
    pub h: f64,
    /// `H(X_ℓ | X_0…X_{ℓ−1})` of the prefix
    pub hc: f64,
}

/// Rows `(n, ℓ, β_ℓ, γ_ℓ, h_ℓ, ĥᶜ_ℓ)` for every prefix length in `ns` and
/// every `ℓ` in `ells`. Each `ℓ` is one streaming pass over the longest
/// prefix; intermediate lengths are snapshots of the running counters.
/// Rows are ordered by `n`, then by the order of `ells`.
pub fn convergence_table(x: &Word, ells: &[usize], ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let lanes: Vec<Vec<ConvergenceRow>> = ells
        .iter()
        .map(|&ell| convergence_lane(x, ell, ns))
        .collect::<Result<_>>()?;
    Ok(interleave(lanes, ns.len()))
}

pub(crate) fn interleave(lanes: Vec<Vec<ConvergenceRow>>, rows_per_lane: usize) -> Vec<ConvergenceRow> {
    let mut iters: Vec<_> = lanes.into_iter().map(|l| l.into_iter()).collect();
    let mut out = Vec::new();
    for _ in 0..rows_per_lane {
        for it in iters.iter_mut() {
            out.extend(it.next());
        }
    }
    out
}

/// One `ℓ` column of [`convergence_table`].
pub fn convergence_lane(x: &Word, ell: usize, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    check_schedule(x, &[ell], ns)?;
    let mut order: Vec<usize> = (0..ns.len()).collect();
    order.sort_by_key(|&i| ns[i]);
    let mut short = BlockCounter::new(ell)?;
    let mut long = BlockCounter::new(ell + 1)?;
    let mut rows: Vec<Option<ConvergenceRow>> = vec![None; ns.len()];
    let mut pos = 0;
    for i in order {
        let n = ns[i];
        while pos < n {
            let s = x.get(pos);
            short.push(s);
            long.push(s);
            pos += 1;
        }
        let d = EmpiricalBlockDistribution::from_counts(long.counts(), n)?;
        rows[i] = Some(ConvergenceRow {
            n,
            ell,
            beta: rauzy_from_counts(long.counts(), ContextSide::After)?,
            gamma: rauzy_from_counts(long.counts(), ContextSide::Before)?,
            h: block_entropy_from_counts(short.counts()),
            hc: conditional_entropy_last(&d),
        });
    }
    Ok(rows.into_iter().map(|r| r.expect("every row filled")).collect())
}

pub(crate) fn check_schedule(x: &Word, ells: &[usize], ns: &[usize]) -> Result<()> {
    let (Some(&min_n), Some(&max_n)) = (ns.iter().min(), ns.iter().max()) else {
        return Err(Error::InvalidParameter("empty prefix-length schedule".into()));
    };
    if max_n > x.len() {
        return Err(Error::InvalidParameter(format!(
            "prefix length {max_n} exceeds sequence length {}",
            x.len()
        )));
    }
    for &ell in ells {
        if ell == 0 || ell >= min_n || ell + 1 > crate::entropy::MAX_WINDOW {
            return Err(Error::BlockLength {
                ell,
                len: min_n,
                min: 1,
                max: (min_n.saturating_sub(1)).min(crate::entropy::MAX_WINDOW - 1),
            });
        }
    }
    Ok(())
}

/// Decimal rendering with 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const CSV_HEADER: &str = "n,ell,beta,gamma,h,hc";

/// Writes rows as CSV; with `exact` two more columns carry `β_ℓ` and `γ_ℓ`
/// as `p/q`.
pub fn write_csv<W: Write>(rows: &[ConvergenceRow], exact: bool, mut out: W) -> std::io::Result<()> {
    if exact {
        writeln!(out, "{CSV_HEADER},beta_exact,gamma_exact")?;
    } else {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for r in rows {
        write!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.ell,
            fmt_sig(r.beta.to_f64()),
            fmt_sig(r.gamma.to_f64()),
            fmt_sig(r.h),
            fmt_sig(r.hc)
        )?;
        if exact {
            write!(out, ",{},{}", r.beta.value(), r.gamma.value())?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// One JSON object per row.
pub fn write_jsonl<W: Write>(rows: &[ConvergenceRow], mut out: W) -> std::io::Result<()> {
    for r in rows {
        writeln!(
            out,
            "{{\"n\":{},\"ell\":{},\"beta\":{},\"gamma\":{},\"h\":{},\"hc\":{},\"beta_exact\":\"{}\",\"gamma_exact\":\"{}\"}}",
            r.n,
            r.ell,
            fmt_sig(r.beta.to_f64()),
            fmt_sig(r.gamma.to_f64()),
            fmt_sig(r.h),
            fmt_sig(r.hc),
            r.beta.value(),
            r.gamma.value()
        )?;
    }
    Ok(())
}
