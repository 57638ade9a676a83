//! Modular arithmetic over odd primes and prime powers, prime generation,
//! and bulk inverse tables.
//!
//! All values are canonical least nonnegative residues held in `u64` with
//! `u128` intermediates, so a modulus is accepted as long as it fits in a
//! `u64`. Primality testing is deterministic (Miller–Rabin with the known
//! complete witness set for 64-bit inputs).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Largest exponent a [`ModContext`] may carry. The mod-p^3 evaluations need
/// Fermat quotients to exponent 3, which in turn read powers mod p^4; nothing
/// in scope needs more.
pub const MAX_EXPONENT: u32 = 4;

/// Errors from context construction and non-invertible divisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModMathError {
    /// The claimed prime failed the deterministic primality check.
    NotPrime(u64),
    /// Contexts are restricted to odd primes.
    EvenPrime,
    /// Exponent outside `1..=MAX_EXPONENT`.
    BadExponent(u32),
    /// `p^e` does not fit in a `u64`.
    ModulusOverflow { p: u64, e: u32 },
    /// Inversion of a residue divisible by `p`.
    NotInvertible { value: u64, modulus: u64 },
}

impl fmt::Display for ModMathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModMathError::NotPrime(p) => write!(f, "{p} is not prime"),
            ModMathError::EvenPrime => {
                write!(f, "p = 2 is not supported; contexts need an odd prime")
            }
            ModMathError::BadExponent(e) => write!(f, "exponent {e} outside 1..={MAX_EXPONENT}"),
            ModMathError::ModulusOverflow { p, e } => write!(f, "{p}^{e} overflows u64"),
            ModMathError::NotInvertible { value, modulus } => {
                write!(f, "{value} is not invertible mod {modulus}")
            }
        }
    }
}

/// `(a + b) mod m`.
#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    (((a as u128) + (b as u128)) % (m as u128)) as u64
}

/// `(a - b) mod m`, canonical.
#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

/// `(a * b) mod m` via a 128-bit intermediate.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % (m as u128)) as u64
}

/// `base^exp mod m` by binary exponentiation. `m` must be nonzero.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut base = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        exp >>= 1;
        if exp > 0 {
            base = mul_mod(base, base, m);
        }
    }
    acc
}

/// Modular inverse by extended Euclid. `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin for `u64`. The witness set
/// {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is exact below 3.3 * 10^24,
/// which covers every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// All primes in `[lo, hi]`, ascending, by a segmented sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    // Base primes up to sqrt(hi) by a plain sieve.
    let root = hi.isqrt() + 1;
    let mut base_sieve = vec![true; (root + 1) as usize];
    base_sieve[0] = false;
    if root >= 1 {
        base_sieve[1] = false;
    }
    let mut base = Vec::new();
    for i in 2..=root {
        if base_sieve[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                base_sieve[j as usize] = false;
                j += i;
            }
        }
    }
    let mut out = Vec::new();
    const SEG: u64 = 1 << 18;
    let mut seg_lo = lo;
    let mut mark = vec![true; SEG as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + SEG - 1).min(hi);
        let len = (seg_hi - seg_lo + 1) as usize;
        mark[..len].fill(true);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let mut j = seg_lo.div_ceil(p) * p;
            if j < p * p {
                j = p * p;
            }
            while j <= seg_hi {
                mark[(j - seg_lo) as usize] = false;
                j += p;
            }
        }
        for (i, &is_p) in mark[..len].iter().enumerate() {
            let n = seg_lo + i as u64;
            if is_p && n >= 2 {
                out.push(n);
            }
        }
        seg_lo = seg_hi + 1;
    }
    out
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i8 {
    debug_assert!(p % 2 == 1 && p > 2);
    let a = (a.rem_euclid(p as i64)) as u64;
    if a == 0 {
        return 0;
    }
    let e = pow_mod(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

/// Inverse table for `1..p`: entry `j` holds `j^-1 mod p`, entry 0 is unused.
/// Built with the linear-time recurrence `inv[j] = -(p/j) * inv[p mod j]`,
/// so the whole table costs O(p) multiplications.
pub fn batch_inverses(p: u64) -> Vec<u64> {
    debug_assert!(p >= 3 && is_prime(p), "batch_inverses needs a prime p >= 3");
    let mut inv = vec![0u64; p as usize];
    inv[1] = 1;
    for j in 2..p {
        inv[j as usize] = mul_mod(p - p / j, inv[(p % j) as usize], p);
    }
    inv
}

/// A prime-power modulus `p^e` with `p` an odd prime and `1 <= e <= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModContext {
    p: u64,
    e: u32,
    modulus: u64,
}

impl ModContext {
    pub fn new(p: u64, e: u32) -> Result<Self, ModMathError> {
        if p == 2 {
            return Err(ModMathError::EvenPrime);
        }
        if !is_prime(p) {
            return Err(ModMathError::NotPrime(p));
        }
        if e == 0 || e > MAX_EXPONENT {
            return Err(ModMathError::BadExponent(e));
        }
        let mut modulus: u64 = 1;
        for _ in 0..e {
            modulus = modulus
                .checked_mul(p)
                .ok_or(ModMathError::ModulusOverflow { p, e })?;
        }
        Ok(ModContext { p, e, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn exponent(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Canonical residue of a nonnegative integer.
    #[inline]
    pub fn residue(&self, value: u64) -> Residue {
        Residue {
            value: value % self.modulus,
            ctx: *self,
        }
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn residue_signed(&self, value: i128) -> Residue {
        Residue {
            value: value.rem_euclid(self.modulus as i128) as u64,
            ctx: *self,
        }
    }
}

impl fmt::Display for ModContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "mod {}", self.p)
        } else {
            write!(f, "mod {}^{}", self.p, self.e)
        }
    }
}

/// A canonical residue tied to its [`ModContext`]. Arithmetic between
/// residues of different contexts is a programming error and panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residue {
    value: u64,
    ctx: ModContext,
}

impl Residue {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn context(&self) -> ModContext {
        self.ctx
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// `self^exp` in the context.
    pub fn pow(&self, exp: u64) -> Residue {
        Residue {
            value: pow_mod(self.value, exp, self.ctx.modulus),
            ctx: self.ctx,
        }
    }

    /// Multiplicative inverse; residues divisible by `p` are rejected.
    pub fn inverse(&self) -> Result<Residue, ModMathError> {
        inv_mod(self.value, self.ctx.modulus)
            .map(|value| Residue {
                value,
                ctx: self.ctx,
            })
            .ok_or(ModMathError::NotInvertible {
                value: self.value,
                modulus: self.ctx.modulus,
            })
    }
}

fn assert_same_ctx(a: &Residue, b: &Residue) {
    assert!(
        a.ctx == b.ctx,
        "residue contexts differ: {} vs {}",
        a.ctx,
        b.ctx
    );
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        assert_same_ctx(&self, &rhs);
        Residue {
            value: add_mod(self.value, rhs.value, self.ctx.modulus),
            ctx: self.ctx,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        assert_same_ctx(&self, &rhs);
        Residue {
            value: sub_mod(self.value, rhs.value, self.ctx.modulus),
            ctx: self.ctx,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        assert_same_ctx(&self, &rhs);
        Residue {
            value: mul_mod(self.value, rhs.value, self.ctx.modulus),
            ctx: self.ctx,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: sub_mod(0, self.value, self.ctx.modulus),
            ctx: self.ctx,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.ctx)
    }
}

/// `base^exp` in the residue's context. Thin functional form of
/// [`Residue::pow`].
pub fn mod_pow(base: Residue, exp: u64) -> Residue {
    base.pow(exp)
}

/// Functional form of [`Residue::inverse`].
pub fn mod_inverse(a: Residue) -> Result<Residue, ModMathError> {
    a.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_mod_fermat_little() {
        let ctx = ModContext::new(5, 1).unwrap();
        assert_eq!(ctx.residue(2).pow(4).value(), 1);
        let any = ModContext::new(13, 2).unwrap();
        assert_eq!(any.residue(3).pow(0).value(), 1);
    }

    #[test]
    fn pow_mod_wieferich_1093() {
        // 2^1092 = 1 mod 1093^2: the defining property of the first
        // Wieferich prime.
        let ctx = ModContext::new(1093, 2).unwrap();
        assert_eq!(ctx.residue(2).pow(1092).value(), 1);
    }

    #[test]
    fn inverse_small_cases() {
        let ctx = ModContext::new(13, 1).unwrap();
        assert_eq!(ctx.residue(1).inverse().unwrap().value(), 1);
        assert_eq!(ctx.residue(5).inverse().unwrap().value(), 8);
        assert_eq!(
            ctx.residue(13).inverse(),
            Err(ModMathError::NotInvertible {
                value: 0,
                modulus: 13
            })
        );
    }

    #[test]
    fn batch_inverses_p13_entries() {
        let t = batch_inverses(13);
        assert_eq!(&t[2..=6], &[7, 9, 10, 8, 11]);
        assert_eq!(t[1], 1);
        assert_eq!(t[12], 12);
    }

    #[test]
    fn batch_inverses_p5_exhaustive() {
        assert_eq!(batch_inverses(5)[1..], [1, 3, 2, 4]);
    }

    #[test]
    fn batch_inverses_products() {
        for p in [3u64, 7, 101, 1093] {
            let t = batch_inverses(p);
            for j in 1..p {
                assert_eq!(mul_mod(j, t[j as usize], p), 1, "j={j} p={p}");
            }
        }
    }

    #[test]
    fn batch_inverses_sum_vanishes() {
        // Pairing j with p - j: the inverses are a permutation of 1..p,
        // so they sum to p(p-1)/2 = 0 mod p for p >= 3.
        for p in [5u64, 13, 97] {
            let t = batch_inverses(p);
            let sum = t[1..].iter().fold(0u64, |acc, &v| add_mod(acc, v, p));
            assert_eq!(sum, 0, "p={p}");
        }
    }

    #[test]
    fn legendre_known_values() {
        assert_eq!(legendre(5, 11), 1); // 4^2 = 16 = 5 mod 11
        assert_eq!(legendre(5, 7), -1); // squares mod 7 are {1,2,4}
        assert_eq!(legendre(7, 7), 0);
        assert_eq!(legendre(-1, 5), 1);
        assert_eq!(legendre(-1, 7), -1);
    }

    #[test]
    fn primes_in_ranges() {
        assert_eq!(primes_in(2, 12), [2, 3, 5, 7, 11]);
        assert_eq!(primes_in(1090, 1095), [1091, 1093]);
        assert_eq!(primes_in(1092, 1095), [1093]);
        assert!(primes_in(14, 16).is_empty());
        assert!(primes_in(20, 10).is_empty());
    }

    #[test]
    fn primes_in_crosses_segments() {
        let ps = primes_in(2, 600_000);
        assert_eq!(ps.len(), 49098);
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn is_prime_edges() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(3511));
        assert!(!is_prime(3511 * 3511));
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
                                          // strong pseudoprimes to small bases
        for n in [2047u64, 3277, 4033, 1373653, 3215031751] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn context_rejects_bad_inputs() {
        assert_eq!(ModContext::new(12, 1), Err(ModMathError::NotPrime(12)));
        assert_eq!(ModContext::new(2, 1), Err(ModMathError::EvenPrime));
        assert_eq!(ModContext::new(13, 0), Err(ModMathError::BadExponent(0)));
        assert_eq!(ModContext::new(13, 5), Err(ModMathError::BadExponent(5)));
        assert!(matches!(
            ModContext::new(10_000_019, 4),
            Err(ModMathError::ModulusOverflow { .. })
        ));
    }

    #[test]
    #[should_panic(expected = "contexts differ")]
    fn mixed_context_arithmetic_panics() {
        let a = ModContext::new(13, 1).unwrap().residue(4);
        let b = ModContext::new(17, 1).unwrap().residue(4);
        let _ = a + b;
    }

    #[test]
    fn residue_signed_reduction() {
        let ctx = ModContext::new(13, 1).unwrap();
        assert_eq!(ctx.residue_signed(-1).value(), 12);
        assert_eq!(ctx.residue_signed(-26).value(), 0);
        assert_eq!(ctx.residue_signed(40).value(), 1);
    }
}
