//! Nonexistence criteria for quasi-perfect splitter sets, and the floor-gap
//! arithmetic behind them.

use crate::num_core::{factorize, gcd};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiConclusion {
    Nonexistent,
    NoConclusion,
}

/// Outcome of a quasi-perfect nonexistence check. The criteria prove
/// nonexistence only; when the hypotheses fail nothing follows.
#[derive(Clone, Debug)]
pub struct QuasiVerdict {
    pub applicable: bool,
    pub conclusion: QuasiConclusion,
    pub reason: String,
}

impl QuasiVerdict {
    fn no_conclusion(reason: String) -> Self {
        QuasiVerdict {
            applicable: false,
            conclusion: QuasiConclusion::NoConclusion,
            reason,
        }
    }
}

/// No quasi-perfect `B[0,k](km)` set exists when `m > k` and `k | m`.
pub fn no_quasi_b0k_km(k: u64, m: u64) -> QuasiVerdict {
    if k < 2 || m <= k || m % k != 0 {
        return QuasiVerdict::no_conclusion(format!(
            "hypothesis needs m > k and k | m; got k={k}, m={m}"
        ));
    }
    QuasiVerdict {
        applicable: true,
        conclusion: QuasiConclusion::Nonexistent,
        reason: format!(
            "no quasi-perfect B[0,{k}]({}) set: m={m} > k={k} and {k} | {m}",
            k * m
        ),
    }
}

/// Every `B[-(k-1),k](m)` set is also a `B[-k,k](m)` set when `k` has a
/// prime divisor coprime to `m`. If additionally
/// `floor((m-1)/(2k-1)) > floor((m-1)/(2k))`, the `[-k,k]` size cap rules
/// out quasi-perfect `B[-(k-1),k](m)` sets.
pub fn lift_interval(k: u64, m: u64) -> QuasiVerdict {
    if k < 1 || m < 2 {
        return QuasiVerdict::no_conclusion(format!("needs k >= 1 and m >= 2; got k={k}, m={m}"));
    }
    let witness = factorize(k).primes().find(|&p| gcd(p, m) == 1);
    let q = match witness {
        Some(q) => q,
        None => {
            return QuasiVerdict::no_conclusion(format!(
                "every prime divisor of k={k} divides m={m}"
            ))
        }
    };
    let lo = (m - 1) / (2 * k);
    let hi = (m - 1) / (2 * k - 1);
    if hi > lo {
        QuasiVerdict {
            applicable: true,
            conclusion: QuasiConclusion::Nonexistent,
            reason: format!(
                "no quasi-perfect B[-{},{k}]({m}) set: prime {q} | {k} is coprime to {m} \
                 and floor(({m}-1)/{}) = {hi} > {lo} = floor(({m}-1)/{})",
                k - 1,
                2 * k - 1,
                2 * k
            ),
        }
    } else {
        QuasiVerdict {
            applicable: true,
            conclusion: QuasiConclusion::NoConclusion,
            reason: format!(
                "lifting applies (prime {q}) but floor(({m}-1)/{}) = {hi} = floor(({m}-1)/{})",
                2 * k - 1,
                2 * k
            ),
        }
    }
}

/// The floor gap `floor((m-1)/(2k-1)) > floor((m-1)/(2k))` holds exactly
/// when `m >= 4k^2 - 2k + 1` or `m = 2k(t+1) - s` for some
/// `0 <= s <= t <= 2k - 2`. Both sides are computed and must agree.
pub fn floor_gap_characterization(k: u64, m: u64) -> bool {
    let gap = (m - 1) / (2 * k - 1) > (m - 1) / (2 * k);
    let closed_form = m >= 4 * k * k - 2 * k + 1 || {
        let mut found = false;
        't: for t in 0..=2 * k - 2 {
            for s in 0..=t {
                if m == 2 * k * (t + 1) - s {
                    found = true;
                    break 't;
                }
            }
        }
        found
    };
    assert_eq!(
        gap, closed_form,
        "floor-gap characterization mismatch at k={k}, m={m}"
    );
    gap
}
