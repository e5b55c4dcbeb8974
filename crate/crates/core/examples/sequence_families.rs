//! Every generator, with its metadata sidecar written to a temporary
//! directory, plus a short look at each word.
//!
//!     cargo run --release --example sequence_families

use blockdim::exact::rat;
use blockdim::generators::{golden_slope, zero_frequency, GeneratorSpec, WalkStart};
use blockdim::markov::counterexample_chain;
use blockdim::rauzy::gamma_ell;

fn main() -> blockdim::Result<()> {
    let n = 100_000;
    let specs = vec![
        GeneratorSpec::Champernowne { n },
        GeneratorSpec::Sturmian { theta: golden_slope(), rho: 0.0, n },
        GeneratorSpec::Bernoulli { alpha: rat(1, 3), n, seed: 1 },
        GeneratorSpec::Markov {
            chain: counterexample_chain(),
            source: "bundled".into(),
            n,
            seed: 1,
            start: WalkStart::Stationary,
        },
        GeneratorSpec::Sharp { alpha: rat(1, 4), epsilon: rat(1, 20), n, seed: 1 },
        GeneratorSpec::Counterexample { n, seed: 1 },
    ];
    let dir = std::env::temp_dir().join("blockdim-families");
    std::fs::create_dir_all(&dir)?;
    for spec in specs {
        let g = spec.generate()?;
        let path = dir.join(format!("{}.bits", spec.kind()));
        g.write(&path)?;
        let head: String = g.word.slice(0, 40).to_string();
        println!(
            "{:<15} {head}…  P(0)={:.4}  gamma_4={:.4}",
            spec.kind(),
            zero_frequency(&g.word),
            gamma_ell(&g.word, 4)?.to_f64()
        );
    }
    println!("\nfiles and .meta sidecars in {}", dir.display());
    Ok(())
}
