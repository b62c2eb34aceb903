//! Quasi-perfect nonexistence: the B[0,k](km) criterion and interval
//! lifting for B[-(k-1),k](m), cross-checked against the exact maximum.
//!
//!     cargo run --example quasi_perfect

use splitter_sets::quasiperfect::{lift_interval, no_quasi_b0k_km, QuasiConclusion};
use splitter_sets::splitter_core::max_splitter_bruteforce;
use splitter_sets::Interval;

fn main() -> splitter_sets::Result<()> {
    // B[0,3](18): m = 6 > k = 3 and 3 | 6, so no quasi-perfect set exists.
    let verdict = no_quasi_b0k_km(3, 6);
    println!("{}", verdict.reason);
    let (max, _) = max_splitter_bruteforce(18, Interval::new(0, 3)?, 100)?;
    println!("exact maximum over Z_18: {max} < floor(17/3) = 5");
    assert!(verdict.conclusion == QuasiConclusion::Nonexistent && max < 5);

    // Interval lifting: every B[-1,2](15) set is a B[-2,2](15) set because
    // 2 is coprime to 15, and the floor gap kills the quasi-perfect size.
    let verdict = lift_interval(2, 15);
    println!("{}", verdict.reason);
    let (max, _) = max_splitter_bruteforce(15, Interval::new(1, 2)?, 100)?;
    println!("exact maximum over Z_15: {max} < floor(14/3) = 4");

    // When the floor gap closes the argument says nothing.
    let verdict = lift_interval(2, 9);
    println!("{}", verdict.reason);
    Ok(())
}
