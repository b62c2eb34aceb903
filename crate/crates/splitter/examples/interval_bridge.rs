//! The bridge between symmetric and shifted intervals: a perfect
//! B[-k,k](q) set is a perfect B[-(k-1),k+1](q) set exactly when the unit
//! -k/(k+1) maps the set onto itself.
//!
//!     cargo run --example interval_bridge

use splitter_sets::existence::bridge_k_to_kplus1;
use splitter_sets::splitter_core::for_each_perfect;
use splitter_sets::{construct_perfect, GroupCtx, Interval, SplitterSet};

fn main() -> splitter_sets::Result<()> {
    let q = 29;
    let ctx = GroupCtx::new(q)?;
    let symmetric = Interval::new(2, 2)?;

    let mut sets: Vec<Vec<u64>> = Vec::new();
    for_each_perfect(q, symmetric, &mut |b| {
        sets.push(b.to_vec());
        true
    });
    println!("{} perfect B[-2,2]({q}) sets", sets.len());

    let mut bridged = 0usize;
    for elements in &sets {
        let set = SplitterSet::new(q, symmetric, elements.clone())?;
        if bridge_k_to_kplus1(&ctx, 2, &set)? {
            bridged += 1;
            println!("  {elements:?} is -2/3-stable, hence also perfect B[-1,3]({q})");
        }
    }
    println!("{bridged} of {} sets cross over to B[-1,3]({q})", sets.len());
    println!("(none do here: ord(-3/2) is even modulo {q}, so B[-1,3]({q}) is empty)");

    // The positive direction: a perfect B[-1,3](149) set is in particular a
    // perfect B[-2,2](149) set, and the bridge recognizes it as -2/3-stable.
    let q = 149;
    let ctx = GroupCtx::new(q)?;
    let shifted = construct_perfect(&ctx, Interval::new(1, 3)?)?;
    let as_symmetric = SplitterSet::new(q, Interval::new(2, 2)?, shifted.elements.clone())?;
    assert!(bridge_k_to_kplus1(&ctx, 2, &as_symmetric)?);
    println!(
        "B[-1,3]({q}) set {:?}... is a -2/3-stable perfect B[-2,2]({q}) set",
        &shifted.elements[..6]
    );
    Ok(())
}
