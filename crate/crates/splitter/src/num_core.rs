//! Exact modular arithmetic over 64-bit-range moduli: primality testing,
//! factorization, primitive roots, discrete logarithms, multiplicative
//! orders, p-adic valuations and subgroup membership in `Z_q^x`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a ^ e mod m` by square-and-multiply.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo a prime `q`.
#[inline]
pub fn inv_mod_prime(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// Deterministic Miller-Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // This witness set decides primality for all 64-bit integers.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle-finding variant; n must be composite and odd.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// A positive integer together with its complete prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn new(n: u64) -> Self {
        factorize(n)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs in ascending prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(r, _)| r == p)
            .map_or(0, |&(_, e)| e)
    }

    /// All divisors of the value, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Complete prime factorization, deterministic for all `n < 2^63`.
pub fn factorize(n: u64) -> FactoredInteger {
    assert!(n >= 1, "factorize requires a positive integer");
    let mut counts: HashMap<u64, u32> = HashMap::new();
    let mut m = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while m % p == 0 {
            *counts.entry(p).or_insert(0) += 1;
            m /= p;
        }
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            *counts.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    let mut factors: Vec<(u64, u32)> = counts.into_iter().collect();
    factors.sort_unstable();
    FactoredInteger { value: n, factors }
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: u64, p: u64) -> u32 {
    assert!(n >= 1 && p >= 2);
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Does `g` generate `Z_q^x`?
pub fn is_primitive_root(q: u64, g: u64) -> bool {
    if g % q == 0 {
        return false;
    }
    let order = factorize(q - 1);
    let generates = order.primes().all(|r| pow_mod(g, (q - 1) / r, q) != 1);
    generates
}

/// The smallest primitive root modulo an odd prime `q`.
pub fn find_primitive_root(q: u64) -> Result<u64> {
    if q < 3 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let order = factorize(q - 1);
    let cofactors: Vec<u64> = order.primes().map(|r| (q - 1) / r).collect();
    (2..q)
        .find(|&g| cofactors.iter().all(|&c| pow_mod(g, c, q) != 1))
        .ok_or_else(|| Error::Internal(format!("no primitive root modulo {q}")))
}

/// A signed fraction viewed as an element of `Z_q^x`, e.g. `-3/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalUnit {
    num: i64,
    den: i64,
}

impl RationalUnit {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(num != 0 && den != 0, "rational unit must be nonzero");
        RationalUnit { num, den }
    }

    pub fn integer(n: i64) -> Self {
        RationalUnit::new(n, 1)
    }

    /// Canonical residue `num * den^-1 mod q` in `[1, q-1]`.
    pub fn residue(&self, q: u64) -> Result<u64> {
        let reduce = |v: i64| (v.rem_euclid(q as i64)) as u64;
        let n = reduce(self.num);
        let d = reduce(self.den);
        if n == 0 || d == 0 {
            return Err(Error::NotAUnit {
                value: self.to_string(),
                modulus: q,
            });
        }
        Ok(mul_mod(n, inv_mod_prime(d, q), q))
    }
}

impl From<i64> for RationalUnit {
    fn from(n: i64) -> Self {
        RationalUnit::integer(n)
    }
}

impl std::fmt::Display for RationalUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An odd prime `q` with a fixed primitive root `g` and the factored group
/// order `q - 1`; all index computations go through this context.
#[derive(Clone, Debug)]
pub struct GroupCtx {
    q: u64,
    g: u64,
    order: FactoredInteger,
    table: Option<Vec<u32>>,
}

impl GroupCtx {
    /// Context with the canonical (smallest) primitive root.
    pub fn new(q: u64) -> Result<Self> {
        let g = find_primitive_root(q)?;
        Ok(GroupCtx {
            q,
            g,
            order: factorize(q - 1),
            table: None,
        })
    }

    /// Context with a caller-chosen primitive root.
    pub fn with_root(q: u64, g: u64) -> Result<Self> {
        if q < 3 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if g == 0 || g >= q || !is_primitive_root(q, g) {
            return Err(Error::PreconditionNotMet(format!(
                "{g} is not a primitive root modulo {q}"
            )));
        }
        Ok(GroupCtx {
            q,
            g,
            order: factorize(q - 1),
            table: None,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn order(&self) -> &FactoredInteger {
        &self.order
    }

    /// Builds a full index table (`x -> ind_g(x)`), trading `O(q)` memory
    /// for constant-time discrete logs. Only sensible for moderate `q`.
    pub fn precompute_index_table(&mut self) {
        if self.table.is_some() {
            return;
        }
        assert!(self.q <= u32::MAX as u64, "index table requires q < 2^32");
        let mut table = vec![0u32; self.q as usize];
        let mut x = 1u64;
        for e in 0..self.q - 1 {
            table[x as usize] = e as u32;
            x = mul_mod(x, self.g, self.q);
        }
        self.table = Some(table);
    }

    pub fn has_index_table(&self) -> bool {
        self.table.is_some()
    }

    /// `ind_g(x)`: the minimal `e >= 0` with `g^e = x (mod q)`.
    ///
    /// Pohlig-Hellman over the factored order with baby-step/giant-step per
    /// prime, unless the index table is present.
    pub fn discrete_log(&self, x: u64) -> Result<u64> {
        let q = self.q;
        if x % q == 0 {
            return Err(Error::NotAUnit {
                value: x.to_string(),
                modulus: q,
            });
        }
        let x = x % q;
        if let Some(table) = &self.table {
            return Ok(table[x as usize] as u64);
        }
        let n = q - 1;
        let mut residue = 0u64;
        let mut modulus = 1u64;
        for &(r, e) in self.order.factors() {
            let pe = r.pow(e);
            let d = self.dlog_prime_power(x, r, e, pe);
            // CRT: combine d mod pe into the running residue.
            let inc = (d + pe - residue % pe) % pe;
            let step = mul_mod(
                inc,
                inv_mod_prime_power(modulus % pe, r, e, pe),
                pe,
            );
            residue += modulus * step;
            modulus *= pe;
        }
        debug_assert_eq!(modulus, n);
        Ok(residue)
    }

    /// Solves `ind_g(x) mod r^e` digit by digit in the order-`r^e` subgroup.
    fn dlog_prime_power(&self, x: u64, r: u64, e: u32, pe: u64) -> u64 {
        let q = self.q;
        let n = q - 1;
        let g_sub = pow_mod(self.g, n / pe, q); // order pe
        let y = pow_mod(x, n / pe, q);
        let h = pow_mod(g_sub, pe / r, q); // order r
        let bsgs = Bsgs::new(h, r, q);
        let g_inv = inv_mod_prime(g_sub, q);
        let mut d = 0u64;
        let mut rj = 1u64;
        for j in 0..e {
            let partial = mul_mod(y, pow_mod(g_inv, d, q), q);
            let c = pow_mod(partial, pe / rj / r, q);
            let digit = bsgs.solve(c);
            d += digit * rj;
            rj *= r;
            let _ = j;
        }
        d
    }

    /// Canonical residue of a rational unit.
    pub fn residue(&self, x: RationalUnit) -> Result<u64> {
        x.residue(self.q)
    }

    /// `ind_g` of a rational unit.
    pub fn ind(&self, x: RationalUnit) -> Result<u64> {
        self.discrete_log(self.residue(x)?)
    }

    /// Smallest `t >= 1` with `x^t = 1 (mod q)`.
    pub fn mult_order(&self, x: RationalUnit) -> Result<u64> {
        let r = self.residue(x)?;
        let mut t = self.q - 1;
        for p in self.order.primes() {
            while t % p == 0 && pow_mod(r, t / p, self.q) == 1 {
                t /= p;
            }
        }
        Ok(t)
    }

    /// Index `[Z_q^x : <gens>]`, the gcd of the generators' indices with `q-1`.
    /// The empty generator set yields the trivial subgroup, index `q - 1`.
    pub fn subgroup_index(&self, gens: &[RationalUnit]) -> Result<u64> {
        let mut d = self.q - 1;
        for &x in gens {
            d = gcd(d, self.ind(x)?);
        }
        Ok(d)
    }

    /// Membership in the subgroup generated by `gens`: the index must
    /// divide `ind_g(x)`.
    pub fn in_subgroup(&self, x: RationalUnit, gens: &[RationalUnit]) -> Result<bool> {
        let d = self.subgroup_index(gens)?;
        Ok(self.ind(x)? % d == 0)
    }

    /// Is `x` an `e`-th power residue? Requires `e | q - 1`; the verdict is
    /// independent of the primitive root.
    pub fn is_power_residue(&self, x: RationalUnit, e: u64) -> Result<bool> {
        if e == 0 || (self.q - 1) % e != 0 {
            return Err(Error::ExponentNotDividing {
                e,
                order: self.q - 1,
            });
        }
        Ok(self.ind(x)? % e == 0)
    }
}

/// Inverse of `a` modulo the prime power `r^e` (gcd(a, r) = 1).
fn inv_mod_prime_power(a: u64, r: u64, e: u32, pe: u64) -> u64 {
    // Euler: a^(phi(pe) - 1) mod pe.
    let phi = pe / r * (r - 1);
    let _ = e;
    pow_mod(a % pe, phi - 1, pe)
}

/// Baby-step/giant-step table for a fixed base of known small order.
struct Bsgs {
    baby: HashMap<u64, u64>,
    giant: u64,
    m: u64,
    q: u64,
}

impl Bsgs {
    fn new(base: u64, order: u64, q: u64) -> Self {
        let m = (order as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut x = 1u64;
        for j in 0..m {
            baby.entry(x).or_insert(j);
            x = mul_mod(x, base, q);
        }
        let giant = inv_mod_prime(pow_mod(base, m, q), q);
        Bsgs { baby, giant, m, q }
    }

    fn solve(&self, target: u64) -> u64 {
        let mut y = target;
        for i in 0..=self.m {
            if let Some(&j) = self.baby.get(&y) {
                return i * self.m + j;
            }
            y = mul_mod(y, self.giant, self.q);
        }
        unreachable!("target not in the subgroup generated by the base")
    }
}
