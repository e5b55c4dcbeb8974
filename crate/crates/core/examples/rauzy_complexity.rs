//! Best-predictor error rates β_ℓ and γ_ℓ of short words, the table that
//! attains γ, and a check against exhaustive search.
//!
//!     cargo run --example rauzy_complexity -- 0010011101001110

use blockdim::bitseq::Word;
use blockdim::rauzy::{beta_ell, best_predictor, brute_force_rauzy, gamma_ell, ContextSide};

fn main() -> blockdim::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "0010011101001110".into());
    let w: Word = text.parse()?;
    println!("word {w} (length {})", w.len());
    println!("{:>3} {:>10} {:>10}", "ell", "beta", "gamma");
    for ell in 1..w.len().min(8) {
        let (b, g) = (beta_ell(&w, ell)?, gamma_ell(&w, ell)?);
        println!("{ell:>3} {:>10} {:>10}", b.value().to_string(), g.value().to_string());
        if ell <= 3 {
            assert_eq!(g, brute_force_rauzy(&w, ell, ContextSide::Before)?);
            assert_eq!(b, brute_force_rauzy(&w, ell, ContextSide::After)?);
        }
    }

    let table = best_predictor(&w, 2, ContextSide::Before)?;
    println!("\nbest ℓ=2 predictor from the preceding symbols:");
    for (ctx, guess) in table.as_slice().iter().enumerate() {
        println!("  after {}{} guess {guess}", ctx & 1, (ctx >> 1) & 1);
    }
    println!("  mismatches: {}", table.mismatches(&w)?);
    Ok(())
}
