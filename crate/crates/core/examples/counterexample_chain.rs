//! Exact analysis of the bundled four-state chain: stationary law, limit
//! values of β_ℓ and γ_ℓ, the last-state lower bound on γ, and how that
//! bound behaves on snake chains of increasing order.
//!
//!     cargo run --release --example counterexample_chain [-- path/to/file.chain]

use blockdim::exact::to_f64;
use blockdim::markov::{
    counterexample_chain, cylinder_measure, exact_beta, exact_gamma, snake_chain, snake_lower_bound, stationary_distribution,
    LabeledMarkovChain,
};

fn main() -> blockdim::Result<()> {
    let chain = match std::env::args().nth(1) {
        Some(path) => LabeledMarkovChain::read(path)?,
        None => counterexample_chain(),
    };
    print!("{}", chain.to_text());
    let pi = stationary_distribution(&chain)?;
    println!("\nstationary: {:?}", pi.as_slice().iter().map(|p| p.to_string()).collect::<Vec<_>>());
    println!("mu([0]) = {}", cylinder_measure(&chain, &pi, &"0".parse()?));
    let bound = snake_lower_bound(&chain, &pi);
    println!("last-state bound on gamma: {bound}");

    println!("\n{:>3} {:>14} {:>14}", "ell", "beta", "gamma");
    for ell in 1..=8 {
        let (b, g) = (exact_beta(&chain, &pi, ell)?, exact_gamma(&chain, &pi, ell)?);
        println!("{ell:>3} {:>14.10} {:>14.10}   {b}", to_f64(&b), to_f64(&g));
    }

    // Remembering more of the path can only sharpen the bound, and every
    // bound stays below the limit of γ_ℓ. Numerically only.
    println!("\nsnake order, states, bound:");
    for k in 1..=5 {
        let s = snake_chain(&chain, k)?;
        let ps = stationary_distribution(&s.chain)?;
        let b = snake_lower_bound(&s.chain, &ps);
        println!("  k={k}  {:>4}  {b} ({:.10})", s.paths.len(), to_f64(&b));
    }
    Ok(())
}
