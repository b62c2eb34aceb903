//! The exhaustive oracles that everything else is tested against: exact
//! cover for perfect sets, branch and bound for maximum size, and full
//! enumeration.
//!
//!     cargo run --example oracles

use splitter_sets::splitter_core::{
    for_each_perfect, max_splitter_bruteforce, perfect_exists_bruteforce, verify_splitter,
    Interval,
};

fn main() -> splitter_sets::Result<()> {
    // Existence with a witness.
    let interval = Interval::new(2, 2)?;
    let set = perfect_exists_bruteforce(13, interval, 600)?.expect("exists");
    println!(
        "perfect B[-2,2](13) witness: {:?} ({:?})",
        set.elements,
        verify_splitter(&set)?
    );

    // Full enumeration.
    let mut count = 0usize;
    for_each_perfect(13, interval, &mut |b| {
        println!("  solution: {b:?}");
        count += 1;
        true
    });
    println!("{count} perfect B[-2,2](13) sets in total");

    // Maximum size when no perfect set exists: B[0,2](7) tops out at 2.
    let (max, best) = max_splitter_bruteforce(7, Interval::new(0, 2)?, 600)?;
    println!(
        "max B[0,2](7) size: {max}, witness {:?} ({:?})",
        best.elements,
        verify_splitter(&best)?
    );

    // Oracles refuse moduli beyond their bound instead of running forever.
    assert!(perfect_exists_bruteforce(100_000, interval, 600).is_err());
    Ok(())
}
