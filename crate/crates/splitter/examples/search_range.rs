//! Sweep a range of primes for a family and report the admissible ones,
//! in parallel but with deterministic, ascending output.
//!
//!     cargo run --release --example search_range

use rayon::prelude::*;
use splitter_sets::num_core::is_prime;
use splitter_sets::splitter_core::{classify, Classification};
use splitter_sets::{check_family, Decision, GroupCtx, Interval};

fn main() -> splitter_sets::Result<()> {
    let interval = Interval::new(3, 5)?;
    let span = interval.span() as u64;
    let (lo, hi) = (10_000u64, 80_000u64);

    let candidates: Vec<u64> = (lo..=hi)
        .filter(|&q| {
            (q - 1) % span == 0
                && classify(q, interval) == Classification::Nonsingular
                && is_prime(q)
        })
        .collect();
    println!(
        "{} candidate primes with {span} | q-1 in [{lo}, {hi}]",
        candidates.len()
    );

    let mut hits: Vec<u64> = candidates
        .par_iter()
        .filter(|&&q| {
            let ctx = GroupCtx::new(q).unwrap();
            check_family(&ctx, interval).unwrap().decision == Decision::Exists
        })
        .copied()
        .collect();
    hits.sort_unstable();
    println!("perfect B[-3,5](q) sets exist for q in {hits:?}");
    Ok(())
}
