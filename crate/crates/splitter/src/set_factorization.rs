//! Direct factors of `Z_N`: deciding whether a prime-power-sized subset has
//! a complementer factor, building the labeling and the explicit complement,
//! stable subgroups, and an exact-cover brute-force oracle.

use std::collections::HashMap;

use crate::cyclotomic::{cyclotomic_divides, MaskPoly};
use crate::error::{Error, Result};
use crate::num_core::{factorize, valuation};

/// Base-`p` labeling of a direct factor `A`, witnessing the digit and offset
/// conditions at levels `i_1 < ... < i_n`.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub p: u64,
    /// Strictly increasing levels within `[1, v_p(N)]`.
    pub levels: Vec<u32>,
    /// `table[b]` is the element labeled by the base-`p` digits of `b`,
    /// most significant digit = `b_1`.
    pub table: Vec<u64>,
}

impl Labeling {
    pub fn n(&self) -> usize {
        self.levels.len()
    }

    fn digit_of(x: u64, p: u64, level: u32) -> u64 {
        (x / p.pow(level - 1)) % p
    }

    /// Digits `b_1 .. b_n` of a table index.
    fn label_digits(&self, mut idx: usize) -> Vec<u64> {
        let n = self.n();
        let mut digits = vec![0u64; n];
        for j in (0..n).rev() {
            digits[j] = (idx as u64) % self.p;
            idx /= self.p as usize;
        }
        digits
    }

    /// Checks the digit and offset conditions on every entry.
    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        let n = self.n();
        if self.table.len() != (p as usize).pow(n as u32) {
            return Err(Error::Internal("labeling table has wrong size".into()));
        }
        for (idx, &elem) in self.table.iter().enumerate() {
            let digits = self.label_digits(idx);
            for (j, &level) in self.levels.iter().enumerate() {
                if Self::digit_of(elem, p, level) != digits[j] {
                    return Err(Error::Internal(format!(
                        "digit condition fails at element {elem}, level {level}"
                    )));
                }
                // Zeroing b_j and every later digit must shift by b_j * p^{i_j-1}.
                let mut base_idx = idx;
                let mut scale = 1usize;
                for jj in (j..n).rev() {
                    base_idx -= (digits[jj] as usize) * scale;
                    scale *= p as usize;
                }
                let base = self.table[base_idx];
                let pij = p.pow(level);
                let expect = (base + digits[j] * p.pow(level - 1)) % pij;
                if elem % pij != expect {
                    return Err(Error::Internal(format!(
                        "offset condition fails at element {elem}, level {level}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Chains `C_1, ..., C_{n+1}` and their sumset, the complementer factor.
#[derive(Clone, Debug)]
pub struct ComplementFactor {
    pub chains: Vec<Vec<u64>>,
    pub elements: Vec<u64>,
}

/// Outcome of the direct-factor test.
#[derive(Clone, Debug)]
pub struct FactorVerdict {
    pub is_factor: bool,
    /// `M_A`: levels `j` with `Phi_{p^j} | f_A`.
    pub levels: Vec<u32>,
    pub labeling: Option<Labeling>,
}

/// Decides whether `A` (of size `p^n`) is a direct factor of `Z_N`,
/// `N = p^a m` with `p` coprime to `m`: exactly when `Phi_{p^j} | f_A` for
/// `n` distinct levels `j <= a`. On success the witnessing labeling is
/// returned.
pub fn direct_factor_test(a_set: &[u64], n_modulus: u64, p: u64) -> Result<FactorVerdict> {
    let a = valuation(n_modulus, p);
    if a == 0 {
        return Err(Error::PreconditionNotMet(format!(
            "{p} does not divide the modulus {n_modulus}"
        )));
    }
    let size = a_set.len() as u64;
    let n = valuation(size, p);
    if size != p.pow(n) || n == 0 {
        return Err(Error::SizeNotPrimePower { size, p });
    }
    if n > a {
        return Err(Error::SizeNotPrimePower { size, p });
    }
    let mut sorted = a_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != a_set.len() || sorted.iter().any(|&x| x >= n_modulus) {
        return Err(Error::DuplicateElements(n_modulus));
    }

    let mask = MaskPoly::mask_of(n_modulus, a_set);
    let levels: Vec<u32> = (1..=a).filter(|&j| cyclotomic_divides(&mask, p, j)).collect();
    if levels.len() > n as usize {
        // Would contradict Phi(1)-counting: |M_A| <= v_p(|A|).
        return Err(Error::Internal(format!(
            "|M_A| = {} exceeds v_p(|A|) = {n}",
            levels.len()
        )));
    }
    if levels.len() < n as usize {
        return Ok(FactorVerdict {
            is_factor: false,
            levels,
            labeling: None,
        });
    }
    let table = build_labels(a_set, &levels, p)?;
    let labeling = Labeling {
        p,
        levels: levels.clone(),
        table,
    };
    labeling.validate()?;
    Ok(FactorVerdict {
        is_factor: true,
        levels,
        labeling: Some(labeling),
    })
}

/// Recursive peeling: split `A mod p^{i_n}` into progressions, label the
/// digit-0 representatives by recursion, then extend by the last digit.
fn build_labels(elems: &[u64], levels: &[u32], p: u64) -> Result<Vec<u64>> {
    let n = levels.len();
    if n == 0 {
        debug_assert_eq!(elems.len(), 1);
        return Ok(vec![elems[0]]);
    }
    let i_n = levels[n - 1];
    let lower = p.pow(i_n - 1);
    // Group by residue mod p^{i_n - 1}, bucket by the i_n-th digit.
    let mut groups: HashMap<u64, Vec<Vec<u64>>> = HashMap::new();
    for &x in elems {
        let class = x % lower;
        let digit = (x / lower) % p;
        groups
            .entry(class)
            .or_insert_with(|| vec![Vec::new(); p as usize])[digit as usize]
            .push(x);
    }
    let mut pairs: Vec<(u64, Vec<Vec<u64>>)> = Vec::new();
    for (class, mut buckets) in groups {
        let c = buckets[0].len();
        if buckets.iter().any(|b| b.len() != c) {
            return Err(Error::Internal(format!(
                "progression structure broken in class {class} mod {lower}"
            )));
        }
        for b in &mut buckets {
            b.sort_unstable();
        }
        pairs.push((class, buckets));
    }
    // Representatives: digit-0 elements, smallest first within each class.
    let mut reps: Vec<u64> = Vec::with_capacity(elems.len() / p as usize);
    let mut partner: HashMap<u64, Vec<u64>> = HashMap::new();
    for (_, buckets) in &pairs {
        for t in 0..buckets[0].len() {
            let rep = buckets[0][t];
            reps.push(rep);
            partner.insert(rep, (0..p as usize).map(|d| buckets[d][t]).collect());
        }
    }
    let prefix = build_labels(&reps, &levels[..n - 1], p)?;
    let mut table = vec![0u64; prefix.len() * p as usize];
    for (idx, &rep) in prefix.iter().enumerate() {
        let row = &partner[&rep];
        for d in 0..p as usize {
            table[idx * p as usize + d] = row[d];
        }
    }
    Ok(table)
}

/// Builds the explicit complementer factor from a labeling:
/// `C_1 = [0, p^{i_1 - 1})`, `C_{j+1}` steps by `p^{i_j}` up to `p^{i_{j+1}-1}`,
/// and the last chain steps by `p^{i_n}` through all of `Z_N`.
pub fn build_complement(label: &Labeling, n_modulus: u64) -> Result<ComplementFactor> {
    let p = label.p;
    let levels = &label.levels;
    let n = levels.len();
    let mut chains: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    chains.push((0..p.pow(levels[0] - 1)).collect());
    for j in 1..n {
        let step = p.pow(levels[j - 1]);
        chains.push((0..p.pow(levels[j] - 1)).step_by(step as usize).collect());
    }
    let step = p.pow(levels[n - 1]);
    chains.push((0..n_modulus).step_by(step as usize).collect());

    let mut elements = vec![0u64];
    for chain in &chains {
        let mut next = Vec::with_capacity(elements.len() * chain.len());
        for &b in &elements {
            for &c in chain {
                next.push((b + c) % n_modulus);
            }
        }
        elements = next;
    }
    elements.sort_unstable();
    let expected = n_modulus / p.pow(levels.len() as u32);
    elements.dedup();
    if elements.len() as u64 != expected {
        return Err(Error::Internal(format!(
            "complement chains collide: got {} elements, expected {expected}",
            elements.len()
        )));
    }
    Ok(ComplementFactor { chains, elements })
}

/// Is `Z_N = A + B` a factorization? Exact occupancy check.
pub fn is_factorization(a_set: &[u64], b_set: &[u64], n_modulus: u64) -> bool {
    if a_set.len() as u64 * b_set.len() as u64 != n_modulus {
        return false;
    }
    let mut seen = vec![false; n_modulus as usize];
    for &a in a_set {
        for &b in b_set {
            let s = ((a + b) % n_modulus) as usize;
            if seen[s] {
                return false;
            }
            seen[s] = true;
        }
    }
    true
}

/// Exact-cover search for a complementer factor made of translates of `A`.
/// The search is deterministic, so the witness is reproducible across runs.
pub fn complement_exists_bruteforce(
    a_set: &[u64],
    n_modulus: u64,
    bound: u64,
) -> Result<Option<Vec<u64>>> {
    if n_modulus > bound {
        return Err(Error::OracleBoundExceeded {
            n: n_modulus,
            bound,
        });
    }
    if a_set.is_empty() || n_modulus % a_set.len() as u64 != 0 {
        return Ok(None);
    }
    let mut sorted = a_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != a_set.len() {
        return Err(Error::DuplicateElements(n_modulus));
    }
    let mut witness = None;
    for_each_complement(a_set, n_modulus, &mut |b| {
        witness = Some(b.to_vec());
        false
    });
    Ok(witness)
}

/// Enumerates complementer factors `B` (sets of translate offsets) in a
/// deterministic order, invoking `visit` for each sorted offset list;
/// return `false` to stop.
pub fn for_each_complement(
    a_set: &[u64],
    n_modulus: u64,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) {
    let n = n_modulus as usize;
    if a_set.is_empty() || n % a_set.len() != 0 {
        return;
    }
    let mut covered = vec![false; n];
    let mut chosen: Vec<u64> = Vec::with_capacity(n / a_set.len());
    fn rec(
        a_set: &[u64],
        n_modulus: u64,
        covered: &mut [bool],
        chosen: &mut Vec<u64>,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        // Branch on the uncovered residue with the fewest compatible
        // translates (fail-first): dead residues kill the branch at once
        // and forced translates are taken first.
        let compatible = |r: u64, covered: &[bool]| -> Vec<u64> {
            let mut ts: Vec<u64> = a_set
                .iter()
                .map(|&a| (r + n_modulus - a % n_modulus) % n_modulus)
                .collect();
            ts.sort_unstable();
            ts.dedup();
            ts.retain(|&t| {
                a_set
                    .iter()
                    .all(|&a| !covered[((t + a) % n_modulus) as usize])
            });
            ts
        };
        let mut best: Option<(Vec<u64>, u64)> = None;
        for r in 0..n_modulus {
            if covered[r as usize] {
                continue;
            }
            let ts = compatible(r, covered);
            if ts.is_empty() {
                return true;
            }
            let forced = ts.len() == 1;
            if best.as_ref().is_none_or(|(b, _)| ts.len() < b.len()) {
                best = Some((ts, r));
                if forced {
                    break;
                }
            }
        }
        let ts = match best {
            None => {
                let mut b = chosen.clone();
                b.sort_unstable();
                return visit(&b);
            }
            Some((ts, _)) => ts,
        };
        for t in ts {
            let block: Vec<usize> = a_set
                .iter()
                .map(|&a| ((t + a) % n_modulus) as usize)
                .collect();
            if block.iter().any(|&i| covered[i]) {
                continue;
            }
            for &i in &block {
                covered[i] = true;
            }
            chosen.push(t);
            let keep_going = rec(a_set, n_modulus, covered, chosen, visit);
            chosen.pop();
            for &i in &block {
                covered[i] = false;
            }
            if !keep_going {
                return false;
            }
        }
        true
    }
    rec(a_set, n_modulus, &mut covered, &mut chosen, visit);
}

/// Index `[Z_N : pi(B)]` of the stable subgroup of `B`. The periods of a
/// set form a subgroup, so it suffices to probe divisors of `N` ascending.
pub fn stable_subgroup(b_set: &[u64], n_modulus: u64) -> u64 {
    let mut member = vec![false; n_modulus as usize];
    for &b in b_set {
        member[(b % n_modulus) as usize] = true;
    }
    for d in factorize(n_modulus).divisors() {
        if b_set
            .iter()
            .all(|&b| member[((b + d) % n_modulus) as usize])
        {
            return d;
        }
    }
    n_modulus
}

/// Asserts the period theorem on a concrete factorization: with `|A| = p^n`
/// and `i_n = max M_A`, every period of `B` is divisible by `p^{i_n}`.
pub fn check_period_theorem(
    a_set: &[u64],
    b_set: &[u64],
    n_modulus: u64,
    p: u64,
) -> Result<bool> {
    if !is_factorization(a_set, b_set, n_modulus) {
        return Err(Error::NotAFactorization(format!(
            "A + B does not tile Z_{n_modulus}"
        )));
    }
    let mask = MaskPoly::mask_of(n_modulus, a_set);
    let a = valuation(n_modulus, p);
    let i_n = (1..=a)
        .filter(|&j| cyclotomic_divides(&mask, p, j))
        .max()
        .unwrap_or(0);
    let index = stable_subgroup(b_set, n_modulus);
    Ok(index % p.pow(i_n) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_direct_factor_examples() {
        let v = direct_factor_test(&[0, 1, 404, 2, 278], 420, 5).unwrap();
        assert!(v.is_factor);
        assert_eq!(v.levels, vec![1]);

        let v = direct_factor_test(&[0, 44, 39], 102, 3).unwrap();
        assert!(!v.is_factor);
        assert!(v.levels.is_empty());

        let v = direct_factor_test(&[0, 2], 4, 2).unwrap();
        assert!(v.is_factor);
        assert_eq!(v.levels, vec![2]);
    }

    #[test]
    fn direct_factor_rejects_bad_input() {
        assert!(direct_factor_test(&[0, 1, 2], 20, 3).is_err()); // 3 coprime to 20
        assert!(direct_factor_test(&[0, 1, 2], 12, 2).is_err()); // size not a 2-power
        assert!(direct_factor_test(&[0, 0], 12, 2).is_err()); // duplicates
        assert!(direct_factor_test(&[0, 1, 2, 3], 6, 2).is_err()); // n > a
    }

    #[test]
    fn complement_paper_example() {
        let a = [0u64, 1, 404, 2, 278];
        let v = direct_factor_test(&a, 420, 5).unwrap();
        let c = build_complement(v.labeling.as_ref().unwrap(), 420).unwrap();
        assert_eq!(c.elements.len(), 84);
        assert!(is_factorization(&a, &c.elements, 420));
    }

    #[test]
    fn complement_trivial_example() {
        let v = direct_factor_test(&[0, 2], 4, 2).unwrap();
        let c = build_complement(v.labeling.as_ref().unwrap(), 4).unwrap();
        assert_eq!(c.chains[0], vec![0, 1]);
        assert_eq!(c.elements, vec![0, 1]);
    }

    #[test]
    fn bruteforce_examples() {
        assert!(complement_exists_bruteforce(&[0, 1, 404, 2, 278], 420, 5000)
            .unwrap()
            .is_some());
        assert!(complement_exists_bruteforce(&[0, 44, 39], 102, 5000)
            .unwrap()
            .is_none());
        let b = complement_exists_bruteforce(&[0], 7, 5000).unwrap().unwrap();
        assert_eq!(b, (0..7).collect::<Vec<u64>>());
        assert!(complement_exists_bruteforce(&[0, 1], 10_000, 5000).is_err());
    }

    #[test]
    fn oracle_agrees_with_theorem_small_sweep() {
        // |A| in {2, 3, 4}; N small multiples; exhaustive subsets with 0.
        for n_modulus in [8u64, 12, 18] {
            for size in [2usize, 3, 4] {
                if n_modulus % size as u64 != 0 {
                    continue;
                }
                let p = match size {
                    2 | 4 => 2u64,
                    _ => 3,
                };
                if valuation(n_modulus, p) < valuation(size as u64, p) {
                    continue;
                }
                // sample subsets deterministically
                let mut seed = 0x2545f4914f6cdd1du64 ^ n_modulus ^ size as u64;
                for _ in 0..300 {
                    let mut a = vec![0u64];
                    while a.len() < size {
                        seed ^= seed << 13;
                        seed ^= seed >> 7;
                        seed ^= seed << 17;
                        let x = seed % n_modulus;
                        if !a.contains(&x) {
                            a.push(x);
                        }
                    }
                    let test = direct_factor_test(&a, n_modulus, p).unwrap();
                    let oracle = complement_exists_bruteforce(&a, n_modulus, 5000)
                        .unwrap()
                        .is_some();
                    assert_eq!(test.is_factor, oracle, "N={n_modulus} A={a:?}");
                    if let Some(label) = &test.labeling {
                        let c = build_complement(label, n_modulus).unwrap();
                        assert!(is_factorization(&a, &c.elements, n_modulus));
                        assert!(check_period_theorem(&a, &c.elements, n_modulus, p).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn labeling_elements_distinct_mod_top_level() {
        let v = direct_factor_test(&[0, 1, 404, 2, 278], 420, 5).unwrap();
        let label = v.labeling.unwrap();
        let top = 5u64.pow(*label.levels.last().unwrap());
        let mut residues: Vec<u64> = label.table.iter().map(|&x| x % top).collect();
        residues.sort_unstable();
        residues.dedup();
        assert_eq!(residues.len(), label.table.len());
    }

    #[test]
    fn stable_subgroup_examples() {
        let all: Vec<u64> = (0..12).collect();
        assert_eq!(stable_subgroup(&all, 12), 1);
        assert_eq!(stable_subgroup(&[0], 12), 12);
        let v = direct_factor_test(&[0, 1, 404, 2, 278], 420, 5).unwrap();
        let c = build_complement(v.labeling.as_ref().unwrap(), 420).unwrap();
        assert_eq!(stable_subgroup(&c.elements, 420) % 5, 0);
    }

    #[test]
    fn period_theorem_z4() {
        // A = {0,2}, B = {0,1}: [Z_4 : pi(B)] = 4, i_1 = 2, 2^2 | 4.
        assert!(check_period_theorem(&[0, 2], &[0, 1], 4, 2).unwrap());
        assert_eq!(stable_subgroup(&[0, 1], 4), 4);
        assert!(check_period_theorem(&[0, 2], &[0, 2], 4, 2).is_err());
    }
}
