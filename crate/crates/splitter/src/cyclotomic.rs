//! Mask polynomials of multisets in `Z_N` and exact divisibility by the
//! prime-power cyclotomic polynomials `Phi_{p^k}`.
//!
//! For a multiset `A` of residues the mask polynomial is
//! `f_A(x) = sum over A of x^i`, and sumsets multiply masks cyclically.
//! `Phi_{p^k} | f_A` exactly when, after folding the exponents modulo `p^k`,
//! the `p` coefficients within every residue class modulo `p^{k-1}` agree —
//! the alternating part in the root-of-unity basis vanishes. Everything here
//! is exact integer arithmetic; no floating-point evaluation at roots.

use crate::error::{Error, Result};
use crate::num_core::valuation;

/// Multiset of exponents in `Z_N`, stored as a length-`N` multiplicity row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskPoly {
    modulus: u64,
    coeffs: Vec<u32>,
}

impl MaskPoly {
    /// `f_A` for a multiset of residues modulo `N`.
    pub fn mask_of(modulus: u64, elements: &[u64]) -> Self {
        assert!(modulus >= 1);
        let mut coeffs = vec![0u32; modulus as usize];
        for &e in elements {
            assert!(e < modulus, "element {e} out of range for modulus {modulus}");
            coeffs[e as usize] += 1;
        }
        MaskPoly { modulus, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Total multiplicity `f_A(1) = |A|`.
    pub fn weight(&self) -> u64 {
        self.coeffs.iter().map(|&c| c as u64).sum()
    }

    /// Coefficients of `f_A mod (x^{p^k} - 1)`: exponents folded modulo `p^k`.
    pub fn fold(&self, pk: u64) -> Vec<u64> {
        let mut folded = vec![0u64; pk as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            folded[i % pk as usize] += c as u64;
        }
        folded
    }

    /// Cyclic convolution, the mask of the sumset-with-multiplicity.
    pub fn convolve(&self, other: &MaskPoly) -> MaskPoly {
        assert_eq!(self.modulus, other.modulus);
        let n = self.modulus as usize;
        let mut coeffs = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    coeffs[(i + j) % n] += a * b;
                }
            }
        }
        MaskPoly {
            modulus: self.modulus,
            coeffs,
        }
    }
}

/// Decomposition of a multiset modulo `p^k` into arithmetic progressions
/// with difference `p^{k-1}` and length `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApDecomposition {
    pub p: u64,
    pub k: u32,
    /// Progression starts, each in `[0, p^{k-1})`, with multiplicity.
    pub starts: Vec<u64>,
}

/// Does `Phi_{p^k}` divide `f_A` over the integers?
pub fn cyclotomic_divides(mask: &MaskPoly, p: u64, k: u32) -> bool {
    let pk = p.pow(k);
    let folded = mask.fold(pk);
    let block = (pk / p) as usize;
    (0..block).all(|a| {
        let c = folded[a];
        (1..p as usize).all(|j| folded[a + j * block] == c)
    })
}

/// Splits `A mod p^k` into `|A|/p` progressions, peeling greedily from the
/// minimal remaining exponent. Requires `cyclotomic_divides(mask, p, k)`.
pub fn ap_decompose(mask: &MaskPoly, p: u64, k: u32) -> Result<ApDecomposition> {
    if !cyclotomic_divides(mask, p, k) {
        return Err(Error::PreconditionNotMet(format!(
            "Phi_{{{p}^{k}}} does not divide the mask polynomial"
        )));
    }
    let pk = p.pow(k);
    let folded = mask.fold(pk);
    let block = pk / p;
    let mut starts = Vec::new();
    for a in 0..block {
        for _ in 0..folded[a as usize] {
            starts.push(a);
        }
    }
    debug_assert_eq!(starts.len() as u64 * p, mask.weight());
    Ok(ApDecomposition { p, k, starts })
}

impl ApDecomposition {
    /// The multiset covered by the progressions, sorted.
    pub fn recompose(&self) -> Vec<u64> {
        let pk = self.p.pow(self.k);
        let step = pk / self.p;
        let mut out = Vec::with_capacity(self.starts.len() * self.p as usize);
        for &s in &self.starts {
            for t in 0..self.p {
                out.push((s + t * step) % pk);
            }
        }
        out.sort_unstable();
        out
    }
}

/// For a factorization `Z_N = A + B` with `N = p^a m`, `p` coprime to `m`,
/// the level sets `M_A = {j <= a : Phi_{p^j} | f_A}` and `M_B` partition
/// `{1, ..., a}` with `|M_A| = v_p(|A|)`. Returns `(M_A, M_B)` or reports
/// the violation, which signals that the input was not a factorization.
pub fn divisor_partition(
    mask_a: &MaskPoly,
    mask_b: &MaskPoly,
    n: u64,
    p: u64,
) -> Result<(Vec<u32>, Vec<u32>)> {
    assert_eq!(mask_a.modulus(), n);
    assert_eq!(mask_b.modulus(), n);
    let a = valuation(n, p);
    let m_a: Vec<u32> = (1..=a).filter(|&j| cyclotomic_divides(mask_a, p, j)).collect();
    let m_b: Vec<u32> = (1..=a).filter(|&j| cyclotomic_divides(mask_b, p, j)).collect();
    let va = valuation(mask_a.weight().max(1), p);
    let vb = valuation(mask_b.weight().max(1), p);
    let disjoint = m_a.iter().all(|j| !m_b.contains(j));
    if m_a.len() as u32 != va || m_b.len() as u32 != vb || !disjoint
        || (m_a.len() + m_b.len()) as u32 != a
    {
        return Err(Error::NotAFactorization(format!(
            "divisor partition violated for p={p}: M_A={m_a:?} M_B={m_b:?} \
             v_p(|A|)={va} v_p(|B|)={vb} a={a}"
        )));
    }
    Ok((m_a, m_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_basics() {
        let m = MaskPoly::mask_of(6, &[0, 1, 2]);
        assert_eq!(m.coeffs(), &[1, 1, 1, 0, 0, 0]);
        assert_eq!(MaskPoly::mask_of(102, &[0, 44, 39]).weight(), 3);
        assert_eq!(MaskPoly::mask_of(5, &[]).weight(), 0);
    }

    #[test]
    fn divisibility_paper_examples() {
        // q = 421: ind_2 of {1..5} in Z_420; one element per class mod 5.
        let a = MaskPoly::mask_of(420, &[0, 1, 404, 2, 278]);
        assert!(cyclotomic_divides(&a, 5, 1));
        // q = 103: {0, 44, 39}; class counts mod 3 are (2, 0, 1).
        let a = MaskPoly::mask_of(102, &[0, 44, 39]);
        assert!(!cyclotomic_divides(&a, 3, 1));
        // Full block [0, p^k): f = (x^{p^k} - 1)/(x - 1).
        let a = MaskPoly::mask_of(27, &(0..27).collect::<Vec<_>>());
        assert!(cyclotomic_divides(&a, 3, 3));
    }

    #[test]
    fn divisibility_implies_weight_divisible() {
        // random-ish multisets
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..500 {
            let n = 4 + next() % 120;
            let len = (next() % 12) as usize;
            let elems: Vec<u64> = (0..len).map(|_| next() % n).collect();
            let mask = MaskPoly::mask_of(n, &elems);
            for (p, k) in [(2u64, 1u32), (2, 2), (3, 1), (5, 1)] {
                if cyclotomic_divides(&mask, p, k) && !elems.is_empty() {
                    assert_eq!(mask.weight() % p, 0, "n={n} elems={elems:?} p={p} k={k}");
                }
            }
        }
    }

    /// Independent oracle: exact long division of the folded polynomial by
    /// `Phi_{p^k}` over the integers.
    pub(crate) fn divides_by_long_division(mask: &MaskPoly, p: u64, k: u32) -> bool {
        let pk = p.pow(k) as usize;
        let block = pk / p as usize;
        // Phi coefficients: 1 at multiples of p^{k-1}, degree (p-1)p^{k-1}.
        let deg_phi = (p as usize - 1) * block;
        let mut rem: Vec<i64> = mask.fold(pk as u64).iter().map(|&c| c as i64).collect();
        for top in (deg_phi..pk).rev() {
            let c = rem[top];
            if c != 0 {
                for j in 0..p as usize {
                    rem[top - deg_phi + j * block] -= c;
                }
                debug_assert_eq!(rem[top], 0);
            }
        }
        rem.iter().all(|&c| c == 0)
    }

    #[test]
    fn divisibility_matches_long_division() {
        let mut seed = 0x853c49e6748fea9bu64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        let mut agree_true = 0;
        for _ in 0..1000 {
            let n = 8 + next() % 505; // N <= 512
            let len = (next() % 16) as usize;
            // bias toward progression-rich multisets so both verdicts appear
            let mut elems: Vec<u64> = Vec::new();
            for _ in 0..len {
                let base = next() % n;
                if next() % 2 == 0 {
                    let p = [2u64, 3, 5][(next() % 3) as usize];
                    let k = 1 + (next() % 2) as u32;
                    let pk = p.pow(k);
                    for t in 0..p {
                        elems.push((base + t * (pk / p)) % n);
                    }
                } else {
                    elems.push(base);
                }
            }
            let mask = MaskPoly::mask_of(n, &elems);
            for (p, k) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2), (5, 1)] {
                let fast = cyclotomic_divides(&mask, p, k);
                let slow = divides_by_long_division(&mask, p, k);
                assert_eq!(fast, slow, "n={n} p={p} k={k} elems={elems:?}");
                if fast {
                    agree_true += 1;
                }
            }
        }
        assert!(agree_true > 50, "test corpus never hit the divisible case");
    }

    #[test]
    fn decompose_paper_example() {
        let a = MaskPoly::mask_of(420, &[0, 1, 404, 2, 278]);
        let d = ap_decompose(&a, 5, 1).unwrap();
        assert_eq!(d.starts, vec![0]);
    }

    #[test]
    fn decompose_recompose_roundtrip() {
        // two disjoint APs mod 27 (p=3, k=3): starts 2 and 5
        let mut elems = Vec::new();
        for s in [2u64, 5] {
            for t in 0..3 {
                elems.push(s + 9 * t);
            }
        }
        let mask = MaskPoly::mask_of(27, &elems);
        let d = ap_decompose(&mask, 3, 3).unwrap();
        assert_eq!(d.starts, vec![2, 5]);
        let mut expect = elems.clone();
        expect.sort_unstable();
        assert_eq!(d.recompose(), expect);

        // single canonical block
        let mask = MaskPoly::mask_of(8, &[0, 4]);
        let d = ap_decompose(&mask, 2, 3).unwrap();
        assert_eq!(d.starts, vec![0]);
        assert!(ap_decompose(&MaskPoly::mask_of(8, &[0, 3]), 2, 3).is_err());
    }

    #[test]
    fn convolution_is_sumset_mask() {
        let a = MaskPoly::mask_of(12, &[0, 1, 5]);
        let b = MaskPoly::mask_of(12, &[0, 3, 7, 7]);
        let mut sums = Vec::new();
        for &x in &[0u64, 1, 5] {
            for &y in &[0u64, 3, 7, 7] {
                sums.push((x + y) % 12);
            }
        }
        assert_eq!(a.convolve(&b), MaskPoly::mask_of(12, &sums));
    }

    #[test]
    fn partition_examples() {
        // A = {0,1}, B = {0,2} in Z_4
        let a = MaskPoly::mask_of(4, &[0, 1]);
        let b = MaskPoly::mask_of(4, &[0, 2]);
        let (ma, mb) = divisor_partition(&a, &b, 4, 2).unwrap();
        assert_eq!((ma, mb), (vec![1], vec![2]));

        // A = {0}, B = Z_8
        let a = MaskPoly::mask_of(8, &[0]);
        let b = MaskPoly::mask_of(8, &(0..8).collect::<Vec<_>>());
        let (ma, mb) = divisor_partition(&a, &b, 8, 2).unwrap();
        assert_eq!((ma, mb), (vec![], vec![1, 2, 3]));

        // not a factorization
        let a = MaskPoly::mask_of(4, &[0, 1]);
        let b = MaskPoly::mask_of(4, &[0, 1]);
        assert!(divisor_partition(&a, &b, 4, 2).is_err());
    }
}
