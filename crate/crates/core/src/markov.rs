//! Exact analysis of symbol-labeled Markov chains.
//!
//! A chain on states `0..m` carries two non-negative rational matrices
//! `P⁽⁰⁾`, `P⁽¹⁾`; `P⁽ᵇ⁾[i][j]` is the probability of moving from `i` to `j`
//! while emitting `b`. Their sum must be row-stochastic.
//!
//! The cylinder measure of a word is `μ([w]) = π · P⁽ʷ⁰⁾ ⋯ P⁽ʷᵏ⁻¹⁾ · 1`, one
//! transition per symbol, so the measures of all words of a given length
//! sum to one. Frequencies of the words of length `ℓ+1` in a generic
//! sequence give the limit values of `β_ℓ` and `γ_ℓ`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::ops::Index;
use std::path::Path;

use num_traits::{One, Zero};

use crate::bitseq::Word;
use crate::error::{Error, Result};
use crate::exact::{is_nonnegative, parse_rational, solve, Rational};
use crate::rauzy::{min_pair_sum, ContextSide};

/// Text of the bundled four-state chain whose generic sequences have
/// `β ≠ γ`.
pub const COUNTEREXAMPLE_CHAIN: &str = include_str!("../assets/counterexample.chain");

/// Largest `ℓ` accepted by [`exact_beta`]/[`exact_gamma`].
pub const MAX_EXACT_ELL: usize = 20;

/// Default state cap for [`snake_chain`].
pub const DEFAULT_SNAKE_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMarkovChain {
    states: usize,
    emit: [Vec<Vec<Rational>>; 2],
}

impl LabeledMarkovChain {
    /// Validates shape, non-negativity and exact row sums.
    pub fn new(p0: Vec<Vec<Rational>>, p1: Vec<Vec<Rational>>) -> Result<Self> {
        let m = p0.len();
        if m == 0 {
            return Err(Error::InvalidChain("chain needs at least one state".into()));
        }
        if p1.len() != m || p0.iter().chain(&p1).any(|row| row.len() != m) {
            return Err(Error::InvalidChain(format!("both matrices must be {m}×{m}")));
        }
        for (i, (r0, r1)) in p0.iter().zip(&p1).enumerate() {
            if let Some(bad) = r0.iter().chain(r1).find(|p| !is_nonnegative(p)) {
                return Err(Error::InvalidChain(format!("negative probability {bad} in row {i}")));
            }
            let sum: Rational = r0.iter().chain(r1).sum();
            if !sum.is_one() {
                return Err(Error::InvalidChain(format!("row {i} sums to {sum}, not 1")));
            }
        }
        Ok(LabeledMarkovChain { states: m, emit: [p0, p1] })
    }

    /// Builds a chain from `(from, to, symbol, probability)` transitions;
    /// a repeated `(from, to, symbol)` is an error.
    pub fn from_transitions<I>(states: usize, transitions: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u8, Rational)>,
    {
        let mut mats = [
            vec![vec![Rational::zero(); states]; states],
            vec![vec![Rational::zero(); states]; states],
        ];
        let mut seen = std::collections::BTreeSet::new();
        for (from, to, sym, p) in transitions {
            if from >= states || to >= states || sym > 1 {
                return Err(Error::InvalidChain(format!("transition {from}->{to}:{sym} out of range")));
            }
            if !seen.insert((from, to, sym)) {
                return Err(Error::InvalidChain(format!("duplicate transition {from}->{to}:{sym}")));
            }
            mats[sym as usize][from][to] = p;
        }
        let [p0, p1] = mats;
        Self::new(p0, p1)
    }

    /// Parses the text format: `states m`, then one `from to symbol p/q`
    /// line per transition. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut states = None;
        let mut transitions = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let syntax = |msg: String| Error::ChainSyntax { line: line_no, msg };
            match (states, fields.as_slice()) {
                (None, ["states", m]) => {
                    let m: usize = m.parse().map_err(|_| syntax(format!("bad state count {m:?}")))?;
                    states = Some(m);
                }
                (None, _) => return Err(syntax("expected `states m` header".into())),
                (Some(_), [from, to, sym, prob]) => {
                    let from: usize = from.parse().map_err(|_| syntax(format!("bad state {from:?}")))?;
                    let to: usize = to.parse().map_err(|_| syntax(format!("bad state {to:?}")))?;
                    let sym: u8 = match *sym {
                        "0" => 0,
                        "1" => 1,
                        other => return Err(syntax(format!("symbol must be 0 or 1, got {other:?}"))),
                    };
                    let p = parse_rational(prob)
                        .ok_or_else(|| syntax(format!("probability must be an exact fraction p/q, got {prob:?}")))?;
                    transitions.push((from, to, sym, p));
                }
                (Some(_), _) => return Err(syntax("expected `from to symbol p/q`".into())),
            }
        }
        let states = states.ok_or(Error::ChainSyntax {
            line: 0,
            msg: "missing `states m` header".into(),
        })?;
        Self::from_transitions(states, transitions)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical text form; [`LabeledMarkovChain::parse`] reads it back.
    pub fn to_text(&self) -> String {
        let mut s = format!("states {}\n", self.states);
        for (from, to, sym, p) in self.transitions() {
            let _ = writeln!(s, "{from} {to} {sym} {p}");
        }
        s
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn emission(&self, symbol: u8) -> &[Vec<Rational>] {
        &self.emit[symbol as usize]
    }

    pub fn transition(&self, from: usize, to: usize, symbol: u8) -> &Rational {
        &self.emit[symbol as usize][from][to]
    }

    /// Non-zero transitions ordered by `(from, to, symbol)`.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, u8, &Rational)> + '_ {
        (0..self.states).flat_map(move |i| {
            (0..self.states).flat_map(move |j| {
                (0..2u8).filter_map(move |b| {
                    let p = &self.emit[b as usize][i][j];
                    (!p.is_zero()).then_some((i, j, b, p))
                })
            })
        })
    }

    /// `θ_{i,b}`: probability of emitting `b` from state `i`.
    pub fn theta(&self, state: usize, symbol: u8) -> Rational {
        self.emit[symbol as usize][state].iter().sum()
    }

    /// `P⁽⁰⁾ + P⁽¹⁾`.
    pub fn combined(&self) -> Vec<Vec<Rational>> {
        self.emit[0]
            .iter()
            .zip(&self.emit[1])
            .map(|(r0, r1)| r0.iter().zip(r1).map(|(a, b)| a + b).collect())
            .collect()
    }

    /// Whether the two transitions leaving each state carry distinct symbols,
    /// i.e. the next state is a function of the current state and symbol.
    pub fn is_deterministic_labeling(&self) -> bool {
        (0..self.states).all(|i| (0..2).all(|b| self.emit[b][i].iter().filter(|p| !p.is_zero()).count() <= 1))
    }

    /// Strong connectivity of the support of `P⁽⁰⁾ + P⁽¹⁾`.
    pub fn is_irreducible(&self) -> bool {
        let p = self.combined();
        let m = self.states;
        let reach = |forward: bool| {
            let mut seen = vec![false; m];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(i) = queue.pop_front() {
                for j in 0..m {
                    let edge = if forward { &p[i][j] } else { &p[j][i] };
                    if !edge.is_zero() && !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryDistribution(Vec<Rational>);

impl StationaryDistribution {
    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }
}

impl Index<usize> for StationaryDistribution {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

/// Exact solution of `π(P⁽⁰⁾+P⁽¹⁾) = π`, `Σπ = 1`.
pub fn stationary_distribution(c: &LabeledMarkovChain) -> Result<StationaryDistribution> {
    if !c.is_irreducible() {
        return Err(Error::Reducible);
    }
    let m = c.states();
    let p = c.combined();
    // (Pᵀ − I) πᵀ = 0 with the last equation replaced by Σπ = 1.
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut v = p[j][i].clone();
                    if i == j {
                        v -= Rational::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    a[m - 1] = vec![Rational::one(); m];
    let mut b = vec![Rational::zero(); m];
    b[m - 1] = Rational::one();
    Ok(StationaryDistribution(solve(&a, &b)?))
}

fn step(v: &[Rational], mat: &[Vec<Rational>]) -> Vec<Rational> {
    let m = v.len();
    let mut out = vec![Rational::zero(); m];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..m {
            let p = &mat[i][j];
            if !p.is_zero() {
                out[j] += vi * p;
            }
        }
    }
    out
}

/// `μ([w]) = π · P⁽ʷ⁰⁾ ⋯ P⁽ʷᵏ⁻¹⁾ · 1`; `μ([ε]) = 1`.
pub fn cylinder_measure(c: &LabeledMarkovChain, pi: &StationaryDistribution, w: &Word) -> Rational {
    let mut v = pi.as_slice().to_vec();
    for s in w.iter() {
        v = step(&v, c.emission(s));
    }
    v.into_iter().sum()
}

/// `μ([u])` for every `u ∈ {0,1}^k`, indexed by block encoding (bit `j` is
/// symbol `j`).
pub fn word_frequencies(c: &LabeledMarkovChain, pi: &StationaryDistribution, k: usize) -> Result<Vec<Rational>> {
    if k > MAX_EXACT_ELL + 1 {
        return Err(Error::InvalidParameter(format!("word length {k} above cap {}", MAX_EXACT_ELL + 1)));
    }
    let mut out = vec![Rational::zero(); 1usize << k];
    fn walk(
        c: &LabeledMarkovChain,
        v: Vec<Rational>,
        depth: usize,
        k: usize,
        code: usize,
        out: &mut [Rational],
    ) {
        if depth == k {
            out[code] = v.into_iter().sum();
            return;
        }
        for s in 0..2u8 {
            let next = step(&v, c.emission(s));
            if next.iter().all(Zero::is_zero) {
                continue;
            }
            walk(c, next, depth + 1, k, code | ((s as usize) << depth), out);
        }
    }
    walk(c, pi.as_slice().to_vec(), 0, k, 0, &mut out);
    Ok(out)
}

fn exact_rauzy(c: &LabeledMarkovChain, pi: &StationaryDistribution, ell: usize, side: ContextSide) -> Result<Rational> {
    if ell == 0 || ell > MAX_EXACT_ELL {
        return Err(Error::InvalidParameter(format!("ℓ must be in 1..={MAX_EXACT_ELL}, got {ell}")));
    }
    let alpha = word_frequencies(c, pi, ell + 1)?;
    Ok(min_pair_sum(ell, side, |k| alpha[k as usize].clone()))
}

/// `Σ_{u∈{0,1}^ℓ} min(μ[0u], μ[1u])`: the value of `β_ℓ` on generic sequences.
pub fn exact_beta(c: &LabeledMarkovChain, pi: &StationaryDistribution, ell: usize) -> Result<Rational> {
    exact_rauzy(c, pi, ell, ContextSide::After)
}

/// `Σ_{u∈{0,1}^ℓ} min(μ[u0], μ[u1])`: the value of `γ_ℓ` on generic sequences.
pub fn exact_gamma(c: &LabeledMarkovChain, pi: &StationaryDistribution, ell: usize) -> Result<Rational> {
    exact_rauzy(c, pi, ell, ContextSide::Before)
}

/// `Σ_i π_i · min(θ_{i,0}, θ_{i,1})`, a lower bound on the limit of `γ_ℓ`.
pub fn snake_lower_bound(c: &LabeledMarkovChain, pi: &StationaryDistribution) -> Rational {
    (0..c.states())
        .map(|i| &pi[i] * std::cmp::min(c.theta(i, 0), c.theta(i, 1)))
        .sum()
}

/// Chain on length-`k` state paths, with the path each state stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakeChain {
    pub chain: LabeledMarkovChain,
    pub paths: Vec<Vec<usize>>,
}

impl SnakeChain {
    /// `π_{q₁…q_k} = π_{q₁} · P[q₁][q₂] ⋯ P[q_{k−1}][q_k]`.
    pub fn stationary_closed_form(&self, base: &LabeledMarkovChain, pi: &StationaryDistribution) -> Vec<Rational> {
        let p = base.combined();
        self.paths
            .iter()
            .map(|path| {
                path.windows(2)
                    .fold(pi[path[0]].clone(), |acc, e| acc * &p[e[0]][e[1]])
            })
            .collect()
    }
}

pub fn snake_chain(c: &LabeledMarkovChain, k: usize) -> Result<SnakeChain> {
    snake_chain_with_cap(c, k, DEFAULT_SNAKE_CAP)
}

/// Snake chain of order `k`: states are paths `q₁…q_k` of non-zero
/// probability, and `q₁…q_k → q₂…q_k q'` copies both labeled transitions
/// `q_k → q'` of the original chain.
pub fn snake_chain_with_cap(c: &LabeledMarkovChain, k: usize, cap: usize) -> Result<SnakeChain> {
    if k == 0 {
        return Err(Error::InvalidParameter("snake order must be ≥ 1".into()));
    }
    let m = c.states();
    let p = c.combined();
    let mut paths: Vec<Vec<usize>> = (0..m).map(|q| vec![q]).collect();
    for _ in 1..k {
        let mut next = Vec::new();
        for path in &paths {
            let last = *path.last().expect("non-empty path");
            for q in 0..m {
                if !p[last][q].is_zero() {
                    if next.len() == cap {
                        return Err(Error::StateExplosion { cap });
                    }
                    let mut ext = path.clone();
                    ext.push(q);
                    next.push(ext);
                }
            }
        }
        paths = next;
    }
    if paths.len() > cap {
        return Err(Error::StateExplosion { cap });
    }
    let index: BTreeMap<&[usize], usize> = paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let s = paths.len();
    let mut mats = [
        vec![vec![Rational::zero(); s]; s],
        vec![vec![Rational::zero(); s]; s],
    ];
    for (from, path) in paths.iter().enumerate() {
        let last = *path.last().expect("non-empty path");
        for q in 0..m {
            if p[last][q].is_zero() {
                continue;
            }
            let mut succ: Vec<usize> = path[1..].to_vec();
            succ.push(q);
            let to = index[succ.as_slice()];
            for b in 0..2u8 {
                mats[b as usize][from][to] = c.transition(last, q, b).clone();
            }
        }
    }
    let [p0, p1] = mats;
    Ok(SnakeChain {
        chain: LabeledMarkovChain::new(p0, p1)?,
        paths,
    })
}

/// The bundled four-state chain.
pub fn counterexample_chain() -> LabeledMarkovChain {
    LabeledMarkovChain::parse(COUNTEREXAMPLE_CHAIN).expect("bundled chain is valid")
}
