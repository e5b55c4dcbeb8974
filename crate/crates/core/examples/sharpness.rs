//! The interleaving of a normal word, a biased coin and zeros whose γ is α
//! while its entropy stays near 2α. At small ℓ the window does not yet
//! see the period, so h_ℓ carries extra phase entropy; the table shows it
//! draining as ℓ grows.
//!
//!     cargo run --release --example sharpness -- 1/8 1/20

use blockdim::entropy::{block_entropy_h, conditional_entropy_last, empirical_distribution};
use blockdim::exact::{parse_rational, to_f64};
use blockdim::generators::sharp_sequence;
use blockdim::rauzy::gamma_ell;

fn main() -> blockdim::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha = parse_rational(&args.next().unwrap_or_else(|| "1/8".into())).expect("alpha as p/q");
    let epsilon = parse_rational(&args.next().unwrap_or_else(|| "1/20".into())).expect("epsilon as p/q");
    let (x, params) = sharp_sequence(&alpha, &epsilon, 2_000_000, 1)?;
    println!(
        "alpha={} epsilon={} -> p={} q={} alpha'={}   identity holds: {}",
        params.alpha,
        params.epsilon,
        params.p,
        params.q,
        params.alpha_prime,
        params.reconstructed_alpha() == alpha
    );
    println!("limit entropy {:.5}, target bound 2*alpha+epsilon = {:.5}", params.limit_entropy(), 2.0 * to_f64(&alpha) + to_f64(&epsilon));
    println!("{:>4} {:>9} {:>9} {:>9}", "ell", "gamma", "h_ell", "hc");
    for ell in [4, 8, 16, 24, 32, 48] {
        let hc = if ell <= 23 {
            format!("{:.5}", conditional_entropy_last(&empirical_distribution(&x, ell)?))
        } else {
            "-".into()
        };
        println!("{ell:>4} {:>9.5} {:>9.5} {hc:>9}", gamma_ell(&x, ell)?.to_f64(), block_entropy_h(&x, ell)?);
    }
    Ok(())
}
