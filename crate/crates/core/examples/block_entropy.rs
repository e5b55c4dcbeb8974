//! Sliding-window block entropy h_ℓ and the conditional entropy of the next
//! symbol, for a few sequence families.
//!
//!     cargo run --release --example block_entropy

use blockdim::entropy::{block_entropy_h, conditional_entropy_at, conditional_entropy_last, empirical_distribution, joint_entropy};
use blockdim::exact::rat;
use blockdim::generators::{bernoulli, champernowne, golden_slope, sturmian};

fn main() -> blockdim::Result<()> {
    let n = 200_000;
    let families = [
        ("champernowne", champernowne(n)),
        ("sturmian", sturmian(golden_slope(), 0.0, n)),
        ("bernoulli(1/4)", bernoulli(&rat(1, 4), n, 11)?),
    ];
    println!("{:<16} {:>3} {:>8} {:>8}", "family", "ell", "h_ell", "H(next|ell)");
    for (name, x) in &families {
        for ell in [1, 4, 8, 12] {
            let d = empirical_distribution(x, ell)?;
            println!("{name:<16} {ell:>3} {:>8.5} {:>8.5}", block_entropy_h(x, ell)?, conditional_entropy_last(&d));
        }
    }

    // The joint entropy of a window splits into conditional entropies.
    let d = empirical_distribution(&families[0].1, 5)?;
    let parts: Vec<f64> = (0..=5).map(|i| conditional_entropy_at(&d, i)).collect::<Result<_, _>>()?;
    println!("\nchain rule on Champernowne windows of 6:");
    println!("  H(X_0..X_5) = {:.6}", joint_entropy(&d));
    println!("  sum of H(X_i | X_0..X_(i-1)) = {:.6}  {:?}", parts.iter().sum::<f64>(), parts.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>());
    Ok(())
}
