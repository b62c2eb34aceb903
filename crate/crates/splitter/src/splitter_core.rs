//! Splitter sets themselves: intervals of multipliers, verification by
//! exact occupancy, singular/nonsingular classification, and brute-force
//! oracles for existence and maximum size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num_core::gcd;

/// The multiplier interval `[-k1, k2]`, acting through the nonzero values
/// `-k1, ..., -1, 1, ..., k2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub k1: u32,
    pub k2: u32,
}

impl Interval {
    pub fn new(k1: u32, k2: u32) -> Result<Self> {
        if k2 == 0 || k2 < k1 {
            return Err(Error::PreconditionNotMet(format!(
                "interval [-{k1},{k2}] needs 0 <= k1 <= k2 and k2 >= 1"
            )));
        }
        Ok(Interval { k1, k2 })
    }

    /// Number of nonzero multipliers, `k1 + k2`.
    pub fn span(&self) -> u32 {
        self.k1 + self.k2
    }

    /// The nonzero multipliers reduced modulo `n`, negatives as `n - j`.
    pub fn multipliers(&self, n: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.span() as usize);
        for j in 1..=self.k1 as u64 {
            out.push(n - j % n);
        }
        for j in 1..=self.k2 as u64 {
            out.push(j % n);
        }
        out
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k1 == 0 {
            write!(f, "[0,{}]", self.k2)
        } else {
            write!(f, "[-{},{}]", self.k1, self.k2)
        }
    }
}

/// Whether any multiplier shares a factor with the modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Nonsingular,
    Singular,
}

/// How a verified splitter set relates to the counting bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    /// `|B| = (n - 1) / span`, every nonzero residue covered.
    Perfect,
    /// `|B| = floor((n - 1) / span)` with `span` not dividing `n - 1`.
    QuasiPerfect,
    /// A valid splitter set below the counting bound.
    Partial,
}

/// A candidate or verified splitter set `B[-k1,k2](n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitterSet {
    pub modulus: u64,
    pub k1: u32,
    pub k2: u32,
    pub elements: Vec<u64>,
}

impl SplitterSet {
    pub fn new(modulus: u64, interval: Interval, elements: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::PreconditionNotMet(format!(
                "modulus {modulus} is too small"
            )));
        }
        for &b in &elements {
            if b == 0 || b >= modulus {
                return Err(Error::InvalidResidue {
                    value: b,
                    modulus,
                });
            }
        }
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != elements.len() {
            return Err(Error::DuplicateElements(modulus));
        }
        Ok(SplitterSet {
            modulus,
            k1: interval.k1,
            k2: interval.k2,
            elements,
        })
    }

    pub fn interval(&self) -> Interval {
        Interval {
            k1: self.k1,
            k2: self.k2,
        }
    }
}

/// Nonsingular iff no multiplier `j in [1, max(k1,k2)]` shares a factor
/// with `n`; equivalently `gcd(n, k1! k2!) = 1`.
pub fn classify(n: u64, interval: Interval) -> Classification {
    let top = interval.k1.max(interval.k2) as u64;
    for j in 2..=top {
        if gcd(n, j) > 1 {
            return Classification::Singular;
        }
    }
    Classification::Nonsingular
}

/// Verifies the splitter property by exact occupancy: all products
/// `lambda * b mod n` must be distinct and nonzero. On success the kind
/// (perfect / quasi-perfect / partial) is reported.
pub fn verify_splitter(set: &SplitterSet) -> Result<Kind> {
    let n = set.modulus;
    let interval = set.interval();
    let span = interval.span() as u64;
    let mults = interval.multipliers(n);
    let mut seen = vec![false; n as usize];
    for &b in &set.elements {
        for &m in &mults {
            let prod = ((m as u128 * b as u128) % n as u128) as u64;
            if prod == 0 {
                return Err(Error::NotAFactorization(format!(
                    "product {m} * {b} vanishes modulo {n}"
                )));
            }
            if seen[prod as usize] {
                return Err(Error::NotAFactorization(format!(
                    "product {prod} is hit twice modulo {n}"
                )));
            }
            seen[prod as usize] = true;
        }
    }
    let size = set.elements.len() as u64;
    if span * size == n - 1 {
        Ok(Kind::Perfect)
    } else if size == (n - 1) / span && (n - 1) % span != 0 {
        Ok(Kind::QuasiPerfect)
    } else {
        Ok(Kind::Partial)
    }
}

/// Is `set` a perfect splitter set? Convenience wrapper over `verify_splitter`.
pub fn is_perfect(set: &SplitterSet) -> bool {
    matches!(verify_splitter(set), Ok(Kind::Perfect))
}

/// Exact-cover search for a perfect `B[-k1,k2](n)`. The search is
/// deterministic, so the first witness found is reproducible across runs.
pub fn perfect_exists_bruteforce(
    n: u64,
    interval: Interval,
    bound: u64,
) -> Result<Option<SplitterSet>> {
    if n > bound {
        return Err(Error::OracleBoundExceeded { n, bound });
    }
    let span = interval.span() as u64;
    if n < 2 || (n - 1) % span != 0 {
        return Ok(None);
    }
    let mut witness = None;
    for_each_perfect(n, interval, &mut |b| {
        witness = Some(b.to_vec());
        false
    });
    Ok(witness.map(|elements| SplitterSet {
        modulus: n,
        k1: interval.k1,
        k2: interval.k2,
        elements,
    }))
}

/// Enumerates all perfect `B[-k1,k2](n)` in a deterministic order, invoking
/// `visit` for each sorted element list; return `false` from `visit` to stop.
pub fn for_each_perfect(n: u64, interval: Interval, visit: &mut dyn FnMut(&[u64]) -> bool) {
    let span = interval.span() as u64;
    if n < 2 || (n - 1) % span != 0 {
        return;
    }
    let mults = interval.multipliers(n);
    // block[s] = products of s with each multiplier, or None if the block
    // is degenerate (a repeat or a zero) and s can never belong to B.
    let mut blocks: Vec<Option<Vec<u64>>> = vec![None; n as usize];
    // cover_lists[r] = candidates s whose block contains r, ascending.
    let mut cover_lists: Vec<Vec<u64>> = vec![Vec::new(); n as usize];
    for s in 1..n {
        let mut block: Vec<u64> = mults
            .iter()
            .map(|&m| ((m as u128 * s as u128) % n as u128) as u64)
            .collect();
        let mut sorted = block.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != block.len() || sorted[0] == 0 {
            continue;
        }
        block.sort_unstable();
        for &r in &block {
            cover_lists[r as usize].push(s);
        }
        blocks[s as usize] = Some(block);
    }
    let mut covered = vec![false; n as usize];
    covered[0] = true;
    let mut chosen: Vec<u64> = Vec::with_capacity(((n - 1) / span) as usize);

    struct Search<'a> {
        blocks: &'a [Option<Vec<u64>>],
        cover_lists: &'a [Vec<u64>],
    }
    impl Search<'_> {
        fn rec(
            &self,
            covered: &mut [bool],
            chosen: &mut Vec<u64>,
            visit: &mut dyn FnMut(&[u64]) -> bool,
        ) -> bool {
            // Branch on the uncovered residue with the fewest compatible
            // blocks (fail-first): a residue with no compatible block kills
            // the branch immediately, and forced choices are taken first.
            let mut best: Option<(usize, usize)> = None;
            for r in 0..covered.len() {
                if covered[r] {
                    continue;
                }
                let count = self.cover_lists[r]
                    .iter()
                    .filter(|&&s| {
                        self.blocks[s as usize]
                            .as_ref()
                            .unwrap()
                            .iter()
                            .all(|&x| !covered[x as usize])
                    })
                    .count();
                if count == 0 {
                    return true;
                }
                if best.is_none_or(|(c, _)| count < c) {
                    best = Some((count, r));
                    if count == 1 {
                        break;
                    }
                }
            }
            let r = match best {
                None => {
                    let mut b = chosen.clone();
                    b.sort_unstable();
                    return visit(&b);
                }
                Some((_, r)) => r,
            };
            for &s in &self.cover_lists[r] {
                let block = self.blocks[s as usize].as_ref().unwrap();
                if block.iter().any(|&x| covered[x as usize]) {
                    continue;
                }
                for &x in block {
                    covered[x as usize] = true;
                }
                chosen.push(s);
                let keep_going = self.rec(covered, chosen, visit);
                chosen.pop();
                for &x in block {
                    covered[x as usize] = false;
                }
                if !keep_going {
                    return false;
                }
            }
            true
        }
    }
    let search = Search {
        blocks: &blocks,
        cover_lists: &cover_lists,
    };
    search.rec(&mut covered, &mut chosen, visit);
}

/// Maximum size of any (not necessarily perfect) `B[-k1,k2](n)` splitter
/// set, by branch and bound. A witness of maximum size is returned.
pub fn max_splitter_bruteforce(
    n: u64,
    interval: Interval,
    bound: u64,
) -> Result<(usize, SplitterSet)> {
    if n > bound {
        return Err(Error::OracleBoundExceeded { n, bound });
    }
    if n < 2 {
        return Err(Error::PreconditionNotMet(format!(
            "modulus {n} is too small"
        )));
    }
    let span = interval.span() as usize;
    let mults = interval.multipliers(n);
    let mut blocks: Vec<Option<Vec<u64>>> = vec![None; n as usize];
    for s in 1..n {
        let mut block: Vec<u64> = mults
            .iter()
            .map(|&m| ((m as u128 * s as u128) % n as u128) as u64)
            .collect();
        block.sort_unstable();
        block.dedup();
        if block.len() == span && block[0] != 0 {
            blocks[s as usize] = Some(block);
        }
    }
    let mut cover_lists: Vec<Vec<u64>> = vec![Vec::new(); n as usize];
    for (s, block) in blocks.iter().enumerate() {
        if let Some(block) = block {
            for &r in block {
                cover_lists[r as usize].push(s as u64);
            }
        }
    }
    // Branch on the smallest unresolved residue: either some block covers
    // it, or it stays uncovered forever. Each final configuration is reached
    // exactly once, and giving up a residue immediately weakens the
    // free-count bound, which prunes hard.
    const OPEN: u8 = 0;
    const COVERED: u8 = 1;
    const EXCLUDED: u8 = 2;
    struct Search<'a> {
        blocks: &'a [Option<Vec<u64>>],
        cover_lists: &'a [Vec<u64>],
        span: usize,
        best: Vec<u64>,
    }
    impl Search<'_> {
        /// Residues that some conflict-free block can still cover; open but
        /// uncoverable residues contribute nothing to the upper bound.
        fn coverable(&self, status: &[u8]) -> usize {
            (0..status.len())
                .filter(|&r| {
                    status[r] == OPEN
                        && self.cover_lists[r].iter().any(|&s| {
                            self.blocks[s as usize]
                                .as_ref()
                                .unwrap()
                                .iter()
                                .all(|&x| status[x as usize] == OPEN)
                        })
                })
                .count()
        }

        fn rec(&mut self, status: &mut [u8], chosen: &mut Vec<u64>) {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            if chosen.len() + self.coverable(status) / self.span <= self.best.len() {
                return;
            }
            let r = match status.iter().position(|&c| c == OPEN) {
                None => return,
                Some(r) => r,
            };
            for &s in &self.cover_lists[r] {
                let block = self.blocks[s as usize].as_ref().unwrap();
                if block.iter().any(|&x| status[x as usize] != OPEN) {
                    continue;
                }
                for &x in block {
                    status[x as usize] = COVERED;
                }
                chosen.push(s);
                self.rec(status, chosen);
                chosen.pop();
                for &x in block {
                    status[x as usize] = OPEN;
                }
            }
            status[r] = EXCLUDED;
            self.rec(status, chosen);
            status[r] = OPEN;
        }
    }
    let mut search = Search {
        blocks: &blocks,
        cover_lists: &cover_lists,
        span,
        best: Vec::new(),
    };
    let mut status = vec![OPEN; n as usize];
    status[0] = EXCLUDED;
    search.rec(&mut status, &mut Vec::new());
    let mut best = search.best;
    best.sort_unstable();
    let size = best.len();
    Ok((
        size,
        SplitterSet {
            modulus: n,
            k1: interval.k1,
            k2: interval.k2,
            elements: best,
        },
    ))
}
