//! The finite-word chain 2γ_ℓ ≤ H(X_ℓ | context) ≤ η(γ_ℓ), checked on each
//! sequence family in both prediction directions, plus the per-context error
//! profile that produces it.
//!
//!     cargo run --release --example sandwich_bounds

use blockdim::bounds::{error_profile, verify_sandwich};
use blockdim::exact::{rat, to_f64};
use blockdim::generators::{bernoulli, champernowne, counterexample_walk, golden_slope, sturmian};

fn main() -> blockdim::Result<()> {
    let n = 100_000;
    let families = [
        ("champernowne", champernowne(n)),
        ("sturmian", sturmian(golden_slope(), 0.0, n)),
        ("bernoulli(1/10)", bernoulli(&rat(1, 10), n, 2)?),
        ("chain walk", counterexample_walk(n, 3)),
    ];
    println!("{:<16} {:>3} {:>9} {:>9} {:>9} {:>6}", "family", "ell", "2*gamma", "hc", "eta(gam)", "ok");
    for (name, x) in &families {
        for ell in [1, 3, 6] {
            let r = verify_sandwich(x, ell)?;
            println!(
                "{name:<16} {ell:>3} {:>9.5} {:>9.5} {:>9.5} {:>6}",
                2.0 * to_f64(&r.gamma),
                r.hc,
                r.eta_gamma,
                r.holds()
            );
        }
    }

    let profile = error_profile(&families[3].1, 2)?;
    println!("\nerror profile of the chain walk, ℓ = 2 (context read oldest first):");
    for e in &profile.entries {
        let ctx: String = (0..2).map(|j| char::from(b'0' + ((e.context >> j) & 1) as u8)).collect();
        println!("  {ctx}  p = {:.4}  e = {:.4}", to_f64(&e.probability), to_f64(&e.error));
    }
    println!("  sum p*e = {} = gamma_2", profile.error_rate());
    Ok(())
}
