//! Adds two sequences as binary fractions, then compares the entropy of the
//! sum with the summands and reads the carry table.
//!
//!     cargo run --release --example addition

use blockdim::addition::{add_prefixes, carry_joint, subadditivity_report, write_subadditivity_csv, CarryEntropies};
use blockdim::generators::{champernowne, golden_slope, sturmian};

fn main() -> blockdim::Result<()> {
    let small = add_prefixes(&"0110".parse()?, &"0011".parse()?)?;
    println!("0.0110 + 0.0011 = 0.{} (overflow {}, last {} digits may still change)", small.sum, small.overflow, small.uncertainty_span);

    let n = 500_000;
    let x = champernowne(n);
    let y = sturmian(golden_slope(), 0.25, n);
    println!("\nnormal + Sturmian:");
    write_subadditivity_csv(&subadditivity_report(&x, &y, &[2, 4, 6, 8])?, std::io::stdout().lock())?;

    let e = CarryEntropies::of(&carry_joint(&x, &y, 6)?);
    println!("\ncarry table at ℓ = 6: H(C) = {:.5}, H(X,Y,C) = {:.5}, H(Z,X,Y,C) = {:.5}", e.carry, e.xyc, e.zxyc);
    Ok(())
}
