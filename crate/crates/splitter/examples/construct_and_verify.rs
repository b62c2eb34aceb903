//! Construct an explicit perfect splitter set and verify it independently.
//!
//!     cargo run --example construct_and_verify

use splitter_sets::splitter_core::verify_splitter;
use splitter_sets::{construct_perfect, GroupCtx, Interval};

fn main() -> splitter_sets::Result<()> {
    // B[-3,5](12721): 1590 elements, the full positive case of a family
    // whose multiplier count (8) is a prime power.
    let ctx = GroupCtx::new(12721)?;
    let set = construct_perfect(&ctx, Interval::new(3, 5)?)?;
    println!(
        "perfect B[-3,5](12721) set with {} elements, starts {:?}",
        set.elements.len(),
        &set.elements[..6]
    );
    println!("verified: {:?}", verify_splitter(&set)?);

    // A symmetric family, constructed through the halved group Z_{(q-1)/2}.
    let ctx = GroupCtx::new(421)?;
    let set = construct_perfect(&ctx, Interval::new(3, 3)?)?;
    println!(
        "perfect B[-3,3](421) set with {} elements: {:?} ...",
        set.elements.len(),
        &set.elements[..8]
    );
    println!("verified: {:?}", verify_splitter(&set)?);

    // Constructions always re-verify internally; asking for a nonexistent
    // family reports why instead of producing a set.
    let ctx = GroupCtx::new(11)?;
    match construct_perfect(&ctx, Interval::new(2, 2)?) {
        Err(e) => println!("B[-2,2](11): {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
