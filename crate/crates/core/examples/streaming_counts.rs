//! Incremental block counting: feed a stream symbol by symbol and read the
//! counts, γ and h of the prefix seen so far without rescanning.
//!
//!     cargo run --release --example streaming_counts

use blockdim::bitseq::{block_counts, BlockCounter};
use blockdim::entropy::block_entropy_from_counts;
use blockdim::generators::UniformStream;
use blockdim::rauzy::{rauzy_from_counts, ContextSide};

fn main() -> blockdim::Result<()> {
    let ell = 5;
    let mut counter = BlockCounter::new(ell + 1)?;
    let mut short = BlockCounter::new(ell)?;
    let mut rng = UniformStream::new(2024);
    let mut seen = blockdim::bitseq::Word::new();
    for checkpoint in [1_000usize, 10_000, 100_000, 1_000_000] {
        while counter.scanned() < checkpoint {
            let bit = (rng.next_u64() >> 63) as u8;
            counter.push(bit);
            short.push(bit);
            seen.push(bit);
        }
        let gamma = rauzy_from_counts(counter.counts(), ContextSide::Before)?;
        println!(
            "n={checkpoint:>8}  distinct {}-blocks {:>3}  gamma_{ell} {:.5}  h_{ell} {:.5}",
            ell + 1,
            counter.counts().distinct(),
            gamma.to_f64(),
            block_entropy_from_counts(short.counts())
        );
    }
    assert_eq!(counter.counts(), &block_counts(&seen, ell + 1)?);
    println!("streamed counts equal a full rescan");
    Ok(())
}
