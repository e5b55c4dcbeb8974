//! Streams a long prefix once per ℓ and prints the `n,ell,beta,gamma,h,hc`
//! table at geometrically spaced prefix lengths.
//!
//!     cargo run --release --example convergence -- champernowne 1000000

use blockdim::bounds::{convergence_table, write_csv};
use blockdim::generators::{champernowne, counterexample_walk, golden_slope, sturmian};

fn main() -> blockdim::Result<()> {
    let mut args = std::env::args().skip(1);
    let family = args.next().unwrap_or_else(|| "champernowne".into());
    let n: usize = args.next().map(|s| s.parse().expect("length")).unwrap_or(1_000_000);
    let x = match family.as_str() {
        "sturmian" => sturmian(golden_slope(), 0.0, n),
        "walk" => counterexample_walk(n, 1),
        _ => champernowne(n),
    };
    let mut ns = Vec::new();
    let mut m = 1000;
    while m < n {
        ns.push(m);
        m *= 10;
    }
    ns.push(n);
    let rows = convergence_table(&x, &[2, 4, 8], &ns)?;
    write_csv(&rows, false, std::io::stdout().lock())?;
    Ok(())
}
