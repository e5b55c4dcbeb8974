//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use blockdim::addition::{add_prefixes, carry_joint, CarryEntropies};
use blockdim::bitseq::{block_counts, Word};
use blockdim::bounds::{verify_sandwich, SANDWICH_SLACK};
use blockdim::entropy::{block_entropy_h, conditional_entropy_at, conditional_entropy_last, empirical_distribution, joint_entropy};
use blockdim::exact::{rat, to_f64, Rational};
use blockdim::generators::{bernoulli, champernowne, counterexample_walk, golden_slope, sharp_sequence, sturmian, UniformStream};
use blockdim::markov::{counterexample_chain, exact_beta, exact_gamma, snake_lower_bound, stationary_distribution, word_frequencies};
use blockdim::rauzy::{beta_ell, brute_force_rauzy, gamma_ell, ContextSide};

const MILLION: usize = 1_000_000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn random_word(stream: &mut UniformStream, len: usize) -> Word {
    let mut w = Word::with_capacity(len);
    while w.len() < len {
        let bits = stream.next_u64();
        for j in 0..64.min(len - w.len()) {
            w.push(((bits >> j) & 1) as u8);
        }
    }
    w
}

fn uniform_below(stream: &mut UniformStream, lo: usize, hi: usize) -> usize {
    lo + (stream.next_u64() % (hi - lo + 1) as u64) as usize
}

fn exact_counterexample() -> Outcome {
    let start = Instant::now();
    let c = counterexample_chain();
    let pi = stationary_distribution(&c).unwrap();
    let pi_ok = pi.as_slice() == [rat(5, 24), rat(1, 4), rat(7, 24), rat(1, 4)];
    let bound = snake_lower_bound(&c, &pi);
    let beta6 = exact_beta(&c, &pi, 6).unwrap();
    let elapsed = start.elapsed();
    outcome(
        pi_ok && bound == rat(11, 24) && beta6 == rat(9503, 20736) && elapsed < Duration::from_secs(10),
        format!("pi ok={pi_ok}, snake bound {bound}, beta_6 {beta6}, {elapsed:.2?}"),
    )
}

fn separation() -> Outcome {
    let c = counterexample_chain();
    let pi = stationary_distribution(&c).unwrap();
    let beta6 = exact_beta(&c, &pi, 6).unwrap();
    let gammas: Vec<Rational> = (1..=6).map(|l| exact_gamma(&c, &pi, l).unwrap()).collect();
    let min_gamma = gammas.iter().min().unwrap().clone();
    outcome(
        beta6 < rat(11, 24) && gammas.iter().all(|g| *g >= rat(11, 24)),
        format!("beta_6 = {beta6} < 11/24 <= min gamma_l = {min_gamma}"),
    )
}

fn sandwich_suite() -> Outcome {
    let mut stream = UniformStream::new(3);
    let (mut checks, mut violations) = (0, 0);
    for _ in 0..1000 {
        let len = uniform_below(&mut stream, 64, 4096);
        // Mix uniform words with biased ones so small γ is exercised too.
        let w = if stream.next_u64().is_multiple_of(2) {
            random_word(&mut stream, len)
        } else {
            let alpha = rat(uniform_below(&mut stream, 1, 15) as i64, 16);
            bernoulli(&alpha, len, stream.next_u64()).unwrap()
        };
        for ell in 1..=6 {
            let r = verify_sandwich(&w, ell).unwrap();
            // The error rate inside the report must be the Rauzy value itself.
            let identity = r.gamma == gamma_ell(&w, ell).unwrap().value() && r.beta == beta_ell(&w, ell).unwrap().value();
            checks += 2;
            if !(r.lower_ok && r.upper_ok && identity) {
                violations += 1;
            }
            if !(r.lower_ok_beta && r.upper_ok_beta) {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{checks} checks (gamma and beta sides), {violations} violations, slack {SANDWICH_SLACK:e}"))
}

fn oracle_equivalence() -> Outcome {
    let mut compared = 0usize;
    let mut mismatches = 0usize;
    let mut check = |w: &Word, ell: usize| {
        for side in [ContextSide::Before, ContextSide::After] {
            let fast = match side {
                ContextSide::Before => gamma_ell(w, ell).unwrap(),
                ContextSide::After => beta_ell(w, ell).unwrap(),
            };
            compared += 1;
            if fast != brute_force_rauzy(w, ell, side).unwrap() {
                mismatches += 1;
            }
        }
    };
    for len in 2..=12usize {
        for bits in 0u64..(1 << len) {
            let w: Word = (0..len).map(|j| ((bits >> j) & 1) as u8).collect();
            for ell in [1, 2] {
                if ell < len {
                    check(&w, ell);
                }
            }
        }
    }
    let mut stream = UniformStream::new(4);
    for _ in 0..1000 {
        let len = uniform_below(&mut stream, 4, 64);
        check(&random_word(&mut stream, len), 3);
    }
    outcome(mismatches == 0, format!("{compared} comparisons, {mismatches} mismatches"))
}

fn chain_rule_identities() -> Outcome {
    let mut stream = UniformStream::new(5);
    let (mut worst_chain, mut worst_block) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let len = uniform_below(&mut stream, 16, 2048);
        let w = random_word(&mut stream, len);
        let ell = uniform_below(&mut stream, 1, 6);
        let d = empirical_distribution(&w, ell).unwrap();
        let joint = joint_entropy(&d);
        let chain: f64 = (0..=ell).map(|i| conditional_entropy_at(&d, i).unwrap()).sum();
        worst_chain = worst_chain.max((joint - chain).abs());
        let scaled = (ell + 1) as f64 * block_entropy_h(&w, ell + 1).unwrap();
        worst_block = worst_block.max((scaled - joint).abs());
    }
    outcome(
        worst_chain <= 1e-10 && worst_block <= 1e-12,
        format!("max chain-rule gap {worst_chain:.3e}, max (l+1)h_(l+1) gap {worst_block:.3e}"),
    )
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let c = counterexample_chain();
    let pi = stationary_distribution(&c).unwrap();
    let walk = counterexample_walk(MILLION, 7);
    let b = beta_ell(&walk, 6).unwrap().to_f64();
    let g = gamma_ell(&walk, 6).unwrap().to_f64();
    let freqs = word_frequencies(&c, &pi, 7).unwrap();
    let counts = block_counts(&walk, 7).unwrap();
    let worst = (0..freqs.len())
        .map(|u| (counts.get(u as u64) as f64 / counts.total() as f64 - to_f64(&freqs[u])).abs())
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let beta_gap = (b - 9503.0 / 20736.0).abs();
    outcome(
        beta_gap <= 0.01 && g >= 11.0 / 24.0 - 0.01 && worst <= 0.002 && elapsed < Duration::from_secs(60),
        format!("|beta_6 - exact| = {beta_gap:.5}, gamma_6 = {g:.5}, max 7-word deviation {worst:.5}, {elapsed:.2?}"),
    )
}

fn normality_witness() -> Outcome {
    let x = champernowne(MILLION);
    let h = block_entropy_h(&x, 8).unwrap();
    let g = gamma_ell(&x, 8).unwrap().to_f64();
    outcome(h >= 0.95 && g >= 0.40, format!("h_8 = {h:.5}, gamma_8 = {g:.5}"))
}

fn determinism_witness() -> Outcome {
    let x = sturmian(golden_slope(), 0.0, MILLION);
    let bad: Vec<usize> = (1..=10).filter(|&l| block_counts(&x, l).unwrap().distinct() != l + 1).collect();
    let h = block_entropy_h(&x, 8).unwrap();
    let limit = 9f64.log2() / 8.0 + 0.01;
    outcome(
        bad.is_empty() && h <= limit,
        format!("factor count l+1 for l = 1..10 (bad: {bad:?}), h_8 = {h:.5} <= {limit:.5}"),
    )
}

#[derive(Clone, Copy, Debug)]
enum Family {
    Champernowne,
    Sturmian,
    Bernoulli,
    Walk,
}

fn draw(stream: &mut UniformStream) -> (Family, Word) {
    let family = [Family::Champernowne, Family::Sturmian, Family::Bernoulli, Family::Walk][(stream.next_u64() % 4) as usize];
    let seed = stream.next_u64();
    let w = match family {
        Family::Champernowne => champernowne(MILLION),
        Family::Sturmian => sturmian(golden_slope(), (seed >> 11) as f64 / (1u64 << 53) as f64, MILLION),
        Family::Bernoulli => bernoulli(&rat(1, 3), MILLION, seed).unwrap(),
        Family::Walk => counterexample_walk(MILLION, seed),
    };
    (family, w)
}

fn subadditivity() -> Outcome {
    let mut stream = UniformStream::new(9);
    let (mut failures, mut worst_upper, mut worst_lower, mut worst_identity) = (Vec::new(), f64::MIN, f64::MIN, 0.0f64);
    for pair in 0..20 {
        let (fx, x) = draw(&mut stream);
        let (fy, y) = draw(&mut stream);
        let z = add_prefixes(&x, &y).unwrap().sum;
        let (hx, hy, hz) = (
            block_entropy_h(&x, 6).unwrap(),
            block_entropy_h(&y, 6).unwrap(),
            block_entropy_h(&z, 6).unwrap(),
        );
        let upper = hz - (hx + hy);
        let lower = (hx - hy) - hz;
        worst_upper = worst_upper.max(upper);
        worst_lower = worst_lower.max(lower);
        let e = CarryEntropies::of(&carry_joint(&x, &y, 6).unwrap());
        let identity = (e.zxyc - e.xyc).abs();
        worst_identity = worst_identity.max(identity);
        if upper > 0.02 || lower > 0.02 || identity > 1e-9 {
            failures.push(format!("pair {pair} ({fx:?}+{fy:?})"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "20 pairs, max h(x+y)-h(x)-h(y) = {worst_upper:.4}, max h(x)-h(y)-h(x+y) = {worst_lower:.4}, max carry identity gap {worst_identity:.2e}{}",
            if failures.is_empty() { String::new() } else { format!(", failing: {}", failures.join(", ")) }
        ),
    )
}

fn sharpness() -> Outcome {
    let epsilon = rat(1, 20);
    let mut passed = true;
    let mut parts = Vec::new();
    for (a, b) in [(1, 8), (1, 4), (3, 8)] {
        let alpha = rat(a, b);
        let (w, params) = sharp_sequence(&alpha, &epsilon, MILLION, 1).unwrap();
        let g = gamma_ell(&w, 8).unwrap().to_f64();
        let h = block_entropy_h(&w, 8).unwrap();
        let hc = conditional_entropy_last(&empirical_distribution(&w, 8).unwrap());
        let af = to_f64(&alpha);
        let identity = params.reconstructed_alpha() == alpha;
        let ok = identity && (g - af).abs() <= 0.03 && h <= 2.0 * af + 0.05 + 0.03;
        passed &= ok;
        parts.push(format!(
            "alpha {alpha} (p={}, q={}): gamma_8 {g:.4}, h_8 {h:.4} vs limit {:.4}, hc_8 {hc:.4}, identity {identity}",
            params.p,
            params.q,
            2.0 * af + 0.08
        ));
    }
    outcome(passed, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact counterexample constants", exact_counterexample),
        ("beta/gamma separation", separation),
        ("finite-word sandwich suite", sandwich_suite),
        ("brute-force oracle equivalence", oracle_equivalence),
        ("chain rule and block entropy identities", chain_rule_identities),
        ("Monte Carlo walk vs exact", monte_carlo),
        ("normality witness (Champernowne)", normality_witness),
        ("determinism witness (Sturmian)", determinism_witness),
        ("subadditivity under addition", subadditivity),
        ("sharpness construction", sharpness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2}: {}  {name}: {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
