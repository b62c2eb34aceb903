//! Decide whether perfect splitter sets exist, family by family, and print
//! the certificate of quantities each rule inspected.
//!
//!     cargo run --example check_family

use splitter_sets::{check_family, Decision, GroupCtx, Interval};

fn main() -> splitter_sets::Result<()> {
    // A classic positive case: B[-3,3](421).
    let ctx = GroupCtx::new(421)?;
    let verdict = check_family(&ctx, Interval::new(3, 3)?)?;
    println!("B[-3,3](421): {:?} via rule {}", verdict.decision, verdict.rule);
    for (name, value) in &verdict.certificate {
        println!("  {name} = {value}");
    }

    // A near miss: B[-4,4](97) exists but B[-3,5](97) does not, because
    // -4/5 is a primitive root modulo 97 and its order cannot be odd.
    let ctx = GroupCtx::new(97)?;
    for (k1, k2) in [(4u32, 4u32), (3, 5)] {
        let verdict = check_family(&ctx, Interval::new(k1, k2)?)?;
        println!(
            "B[-{k1},{k2}](97): {:?} via rule {}",
            verdict.decision, verdict.rule
        );
    }

    // Families without a closed form fall back to the exact reduction or,
    // for composite multiplier counts, a bounded exact-cover search.
    let ctx = GroupCtx::new(13)?;
    let verdict = check_family(&ctx, Interval::new(0, 6)?)?;
    println!("B[0,6](13): {:?} via rule {}", verdict.decision, verdict.rule);
    assert_ne!(verdict.decision, Decision::Undecided);
    Ok(())
}
