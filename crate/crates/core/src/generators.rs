//! Reference sequence families.
//!
//! Random generators draw from SplitMix64 seeded directly with the user
//! seed (state = seed). A biased bit uses one 53-bit draw `r = x >> 11`
//! and a threshold `t = ⌈α·2^53⌉`: the result is 0 iff `r < t`. Markov
//! walks use the same rule on cumulative transition probabilities, with
//! the outgoing transitions of a state ordered by `(symbol, target)`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::bitseq::{write_bits, Word};
use crate::entropy::binary_entropy_exact;
use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::markov::{counterexample_chain, stationary_distribution, LabeledMarkovChain};

const UNIT_BITS: u32 = 53;

/// Seeded stream of 53-bit uniform integers.
#[derive(Clone, Debug)]
pub struct UniformStream {
    rng: SplitMix64,
}

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        UniformStream {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 2^53)`.
    pub fn next_unit(&mut self) -> u64 {
        self.rng.next_u64() >> (64 - UNIT_BITS)
    }
}

/// `⌈p · 2^53⌉` clamped to `[0, 2^53]`; a draw `r` falls below `p` iff
/// `r < threshold`.
pub fn threshold53(p: &Rational) -> u64 {
    if !p.is_positive() {
        return 0;
    }
    let scaled = p * Rational::from_integer(BigInt::one() << UNIT_BITS);
    let t = scaled.ceil().to_integer();
    t.to_u64().unwrap_or(u64::MAX).min(1u64 << UNIT_BITS)
}

fn check_probability(name: &str, p: &Rational) -> Result<()> {
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::InvalidParameter(format!("{name} must lie in [0,1], got {p}")));
    }
    Ok(())
}

/// First `n` bits of `1 10 11 100 101 …`, the binary numerals of
/// `1, 2, 3, …` concatenated.
pub fn champernowne(n: usize) -> Word {
    let mut w = Word::with_capacity(n);
    let mut k: u64 = 1;
    while w.len() < n {
        let bits = 64 - k.leading_zeros();
        for j in (0..bits).rev() {
            if w.len() == n {
                break;
            }
            w.push(((k >> j) & 1) as u8);
        }
        k += 1;
    }
    w
}

/// Rotation word `x_k = ⌊(k+1)θ + ρ⌋ − ⌊kθ + ρ⌋`.
pub fn sturmian(theta: f64, rho: f64, n: usize) -> Word {
    (0..n)
        .map(|k| {
            let k = k as f64;
            (((k + 1.0) * theta + rho).floor() - (k * theta + rho).floor()) as u8
        })
        .collect()
}

/// Smallest denominator `q ≤ 2^16` with `θ·q` an integer, if any. A slope
/// found here yields an eventually periodic rotation word.
pub fn rational_slope(theta: f64) -> Option<(u64, u64)> {
    (1..=1u64 << 16).find_map(|q| {
        let p = theta * q as f64;
        (p.fract() == 0.0).then_some((p as u64, q))
    })
}

/// `n` independent bits with `P(0) = α`.
pub fn bernoulli(alpha: &Rational, n: usize, seed: u64) -> Result<Word> {
    check_probability("α", alpha)?;
    let mut stream = UniformStream::new(seed);
    Ok(bernoulli_from(&mut stream, threshold53(alpha), n))
}

fn bernoulli_from(stream: &mut UniformStream, threshold: u64, n: usize) -> Word {
    (0..n).map(|_| u8::from(stream.next_unit() >= threshold)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WalkStart {
    #[default]
    First,
    State(usize),
    /// Initial state drawn from the stationary distribution.
    Stationary,
}

struct Outgoing {
    thresholds: Vec<u64>,
    moves: Vec<(u8, usize)>,
}

fn cumulative_thresholds<'a>(probs: impl Iterator<Item = &'a Rational>) -> Vec<u64> {
    let mut acc = Rational::zero();
    probs
        .map(|p| {
            acc += p;
            threshold53(&acc)
        })
        .collect()
}

fn pick(thresholds: &[u64], r: u64) -> usize {
    thresholds
        .iter()
        .position(|&t| r < t)
        .unwrap_or(thresholds.len() - 1)
}

/// Labels of an `n`-step sampled trajectory.
pub fn markov_walk(c: &LabeledMarkovChain, n: usize, seed: u64, start: WalkStart) -> Result<Word> {
    let m = c.states();
    let table: Vec<Outgoing> = (0..m)
        .map(|i| {
            let mut out: Vec<(u8, usize, &Rational)> = Vec::new();
            for b in 0..2u8 {
                for j in 0..m {
                    let p = c.transition(i, j, b);
                    if !p.is_zero() {
                        out.push((b, j, p));
                    }
                }
            }
            Outgoing {
                thresholds: cumulative_thresholds(out.iter().map(|t| t.2)),
                moves: out.iter().map(|&(b, j, _)| (b, j)).collect(),
            }
        })
        .collect();
    if let Some(i) = table.iter().position(|o| o.moves.is_empty()) {
        return Err(Error::InvalidChain(format!("state {i} has no outgoing transition")));
    }
    let mut stream = UniformStream::new(seed);
    let mut state = match start {
        WalkStart::First => 0,
        WalkStart::State(s) if s < m => s,
        WalkStart::State(s) => return Err(Error::InvalidParameter(format!("start state {s} out of range"))),
        WalkStart::Stationary => {
            let pi = stationary_distribution(c)?;
            pick(&cumulative_thresholds(pi.as_slice().iter()), stream.next_unit())
        }
    };
    let mut w = Word::with_capacity(n);
    for _ in 0..n {
        let o = &table[state];
        let (sym, next) = o.moves[pick(&o.thresholds, stream.next_unit())];
        w.push(sym);
        state = next;
    }
    Ok(w)
}

/// Walk on the bundled four-state chain from state 0.
pub fn counterexample_walk(n: usize, seed: u64) -> Word {
    markov_walk(&counterexample_chain(), n, seed, WalkStart::First).expect("bundled chain is valid")
}

/// Parameters of the interleaving that reaches `h ≈ 2α` with `γ = α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpParams {
    pub alpha: Rational,
    pub epsilon: Rational,
    pub p: u64,
    pub q: u64,
    /// Bias `P(0)` of the Bernoulli track.
    pub alpha_prime: Rational,
}

impl SharpParams {
    /// `q = ⌈1/ε⌉ + 1`, `p = ⌊2qα⌋`, `α' = qα − p/2 ∈ [0, 1/2)`.
    pub fn choose(alpha: &Rational, epsilon: &Rational) -> Result<Self> {
        if alpha.is_negative() || *alpha > rat(1, 2) {
            return Err(Error::InvalidParameter(format!("α must lie in [0,1/2], got {alpha}")));
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidParameter(format!("ε must be positive, got {epsilon}")));
        }
        let q_big: num_bigint::BigInt = epsilon.recip().ceil().to_integer() + 1;
        let q = q_big
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter("ε too small".into()))?;
        let q_rat = Rational::from_integer(q_big);
        let p_big = (Rational::from_integer(2.into()) * &q_rat * alpha).floor().to_integer();
        let p = p_big.to_u64().expect("0 ≤ p ≤ q");
        let alpha_prime = &q_rat * alpha - Rational::from_integer(p_big) / Rational::from_integer(2.into());
        if alpha_prime.is_negative() || alpha_prime >= rat(1, 2) {
            return Err(Error::InvalidParameter(format!("no admissible split for α={alpha}, ε={epsilon}")));
        }
        Ok(SharpParams {
            alpha: alpha.clone(),
            epsilon: epsilon.clone(),
            p,
            q,
            alpha_prime,
        })
    }

    /// `p/(2q) + α'/q`, which equals `α`.
    pub fn reconstructed_alpha(&self) -> Rational {
        let q = Rational::from_integer(self.q.into());
        Rational::from_integer(self.p.into()) / (Rational::from_integer(2.into()) * &q) + &self.alpha_prime / q
    }

    /// `η(α')/q`, which stays below `ε`.
    pub fn entropy_excess(&self) -> f64 {
        binary_entropy_exact(&self.alpha_prime).expect("α' in range") / self.q as f64
    }

    /// Limit block entropy `p/q + η(α')/q`.
    pub fn limit_entropy(&self) -> f64 {
        self.p as f64 / self.q as f64 + self.entropy_excess()
    }
}

/// `x_k = y_k` for `k mod q < p`, `x_k = z` for `k mod q = p`, `0`
/// otherwise, with `y` the Champernowne word and `z` a Bernoulli(α') stream
/// consumed one draw per period.
pub fn sharp_sequence(alpha: &Rational, epsilon: &Rational, n: usize, seed: u64) -> Result<(Word, SharpParams)> {
    let params = SharpParams::choose(alpha, epsilon)?;
    let y = champernowne(n);
    let mut stream = UniformStream::new(seed);
    let t = threshold53(&params.alpha_prime);
    let (p, q) = (params.p as usize, params.q as usize);
    let w = (0..n)
        .map(|k| {
            let r = k % q;
            if r < p {
                y.get(k)
            } else if r == p {
                u8::from(stream.next_unit() >= t)
            } else {
                0
            }
        })
        .collect();
    Ok((w, params))
}

/// Everything needed to regenerate a sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Champernowne { n: usize },
    Sturmian { theta: f64, rho: f64, n: usize },
    Bernoulli { alpha: Rational, n: usize, seed: u64 },
    Markov { chain: LabeledMarkovChain, source: String, n: usize, seed: u64, start: WalkStart },
    Sharp { alpha: Rational, epsilon: Rational, n: usize, seed: u64 },
    Counterexample { n: usize, seed: u64 },
}

/// A generated word plus `key=value` metadata.
#[derive(Clone, Debug)]
pub struct Generated {
    pub word: Word,
    pub meta: Vec<(String, String)>,
}

impl GeneratorSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorSpec::Champernowne { .. } => "champernowne",
            GeneratorSpec::Sturmian { .. } => "sturmian",
            GeneratorSpec::Bernoulli { .. } => "bernoulli",
            GeneratorSpec::Markov { .. } => "markov",
            GeneratorSpec::Sharp { .. } => "sharp",
            GeneratorSpec::Counterexample { .. } => "counterexample",
        }
    }

    pub fn generate(&self) -> Result<Generated> {
        let mut meta = vec![("kind".to_string(), self.kind().to_string())];
        let mut kv = |k: &str, v: String| meta.push((k.to_string(), v));
        let word = match self {
            GeneratorSpec::Champernowne { n } => {
                kv("length", n.to_string());
                champernowne(*n)
            }
            GeneratorSpec::Sturmian { theta, rho, n } => {
                kv("length", n.to_string());
                kv("theta", format!("{theta:?}"));
                kv("rho", format!("{rho:?}"));
                match rational_slope(*theta) {
                    Some((p, q)) => {
                        kv("eventually_periodic", "true".into());
                        kv("slope", format!("{p}/{q}"));
                    }
                    None => kv("eventually_periodic", "false".into()),
                }
                sturmian(*theta, *rho, *n)
            }
            GeneratorSpec::Bernoulli { alpha, n, seed } => {
                kv("length", n.to_string());
                kv("seed", seed.to_string());
                kv("alpha", alpha.to_string());
                bernoulli(alpha, *n, *seed)?
            }
            GeneratorSpec::Markov { chain, source, n, seed, start } => {
                kv("length", n.to_string());
                kv("seed", seed.to_string());
                kv("chain", source.clone());
                kv(
                    "start",
                    match start {
                        WalkStart::First => "0".into(),
                        WalkStart::State(s) => s.to_string(),
                        WalkStart::Stationary => "stationary".into(),
                    },
                );
                markov_walk(chain, *n, *seed, *start)?
            }
            GeneratorSpec::Sharp { alpha, epsilon, n, seed } => {
                kv("length", n.to_string());
                kv("seed", seed.to_string());
                let (w, sp) = sharp_sequence(alpha, epsilon, *n, *seed)?;
                kv("alpha", sp.alpha.to_string());
                kv("epsilon", sp.epsilon.to_string());
                kv("p", sp.p.to_string());
                kv("q", sp.q.to_string());
                kv("alpha_prime", sp.alpha_prime.to_string());
                kv("limit_entropy", format!("{:.12}", sp.limit_entropy()));
                w
            }
            GeneratorSpec::Counterexample { n, seed } => {
                kv("length", n.to_string());
                kv("seed", seed.to_string());
                counterexample_walk(*n, *seed)
            }
        };
        Ok(Generated { word, meta })
    }
}

impl Generated {
    pub fn meta_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    /// Writes the bit stream to `path` and the metadata to `path.meta`.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<PathBuf> {
        let path = path.as_ref();
        write_bits(path, &self.word)?;
        let mut meta_path = path.as_os_str().to_owned();
        meta_path.push(".meta");
        let meta_path = PathBuf::from(meta_path);
        std::fs::write(&meta_path, self.meta_text())?;
        Ok(meta_path)
    }
}

/// Fraction of zeros in `w`.
pub fn zero_frequency(w: &Word) -> f64 {
    if w.is_empty() {
        return 0.0;
    }
    (w.len() - w.count_ones()) as f64 / w.len() as f64
}

/// Golden-ratio slope `(√5 − 1)/2`.
pub fn golden_slope() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}
