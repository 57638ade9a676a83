//! The special quotients behind the closed-form sum evaluations: Fermat
//! quotients to prime-power precision, the Fibonacci quotient, the Lucas
//! quotient expression, and Bernoulli numbers mod p.

use crate::modmath::{add_mod, legendre, mul_mod, pow_mod, sub_mod, ModContext, ModMathError};
use alloc::vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientError {
    /// Fermat quotient base divisible by `p`.
    BaseDivisible {
        base: u64,
        p: u64,
    },
    /// Fibonacci/Lucas quotients need `legendre(5, p) = ±1`, so `p != 5`.
    PIsFive,
    /// Bernoulli index with non-invertible recurrence denominators
    /// (`n + 1 >= p`) and no exact small-index fallback.
    IndexTooLarge {
        n: u32,
        p: u64,
    },
    /// `B_n` has `p` in its denominator (exactly when `p - 1` divides `n`),
    /// so it has no residue mod p.
    NotReducible {
        n: u32,
        p: u64,
    },
    /// `p^(e+1)` does not fit in a `u64`, so the quotient cannot be read off
    /// at exponent `e`.
    PrecisionOverflow {
        p: u64,
        e: u32,
    },
    /// An asserted divisibility failed; this signals a bug, never bad input.
    DivisibilityBug {
        numerator: u64,
        p: u64,
    },
    Context(ModMathError),
}

impl fmt::Display for QuotientError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            QuotientError::BaseDivisible { base, p } => {
                write!(f, "base {base} is divisible by {p}")
            }
            QuotientError::PIsFive => write!(f, "p = 5 has no Fibonacci/Lucas quotient"),
            QuotientError::IndexTooLarge { n, p } => {
                write!(f, "Bernoulli index {n} needs n + 1 < p = {p}")
            }
            QuotientError::NotReducible { n, p } => {
                write!(f, "B_{n} has {p} in its denominator")
            }
            QuotientError::PrecisionOverflow { p, e } => {
                write!(f, "{p}^{} overflows u64", e + 1)
            }
            QuotientError::DivisibilityBug { numerator, p } => {
                write!(f, "expected {p} to divide {numerator}; this is a bug")
            }
            QuotientError::Context(e) => write!(f, "{e}"),
        }
    }
}

impl From<ModMathError> for QuotientError {
    fn from(e: ModMathError) -> Self {
        QuotientError::Context(e)
    }
}

/// Fermat quotient `q_p(b) = (b^(p-1) - 1)/p` reduced in `ctx`, i.e. mod
/// `p^e`. Computed by reading `b^(p-1)` mod `p^(e+1)`, subtracting 1, and
/// dividing exactly by `p`.
///
/// ```
/// use fqsums_core::{quotients::fermat_quotient, ModContext};
///
/// let ctx = ModContext::new(5, 1).unwrap();
/// assert_eq!(fermat_quotient(2, &ctx).unwrap().value(), 3); // (16 - 1)/5
/// ```
pub fn fermat_quotient(base: u64, ctx: &ModContext) -> Result<crate::Residue, QuotientError> {
    let p = ctx.p();
    if base.is_multiple_of(p) {
        return Err(QuotientError::BaseDivisible { base, p });
    }
    let mut wide: u64 = 1;
    for _ in 0..=ctx.exponent() {
        wide = wide
            .checked_mul(p)
            .ok_or(QuotientError::PrecisionOverflow {
                p,
                e: ctx.exponent(),
            })?;
    }
    let pow = pow_mod(base, p - 1, wide);
    // b^(p-1) = 1 mod p by Fermat's little theorem, so the division is exact.
    let diff = sub_mod(pow, 1, wide);
    debug_assert_eq!(diff % p, 0);
    Ok(ctx.residue(diff / p))
}

/// `(F_n, F_{n+1})` mod `m` by fast doubling.
pub fn fibonacci_pair_mod(n: u64, m: u64) -> (u64, u64) {
    if m == 1 {
        return (0, 0);
    }
    let (mut f, mut g) = (0u64, 1u64); // F_0, F_1
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        // F_{2k} = F_k (2 F_{k+1} - F_k), F_{2k+1} = F_k^2 + F_{k+1}^2
        let two_g_minus_f = sub_mod(add_mod(g, g, m), f, m);
        let f2 = mul_mod(f, two_g_minus_f, m);
        let g2 = add_mod(mul_mod(f, f, m), mul_mod(g, g, m), m);
        if (n >> i) & 1 == 0 {
            f = f2;
            g = g2;
        } else {
            f = g2;
            g = add_mod(f2, g2, m);
        }
    }
    (f, g)
}

/// Lucas number `L_n` mod `m`, from `L_n = 2 F_{n+1} - F_n`.
pub fn lucas_mod(n: u64, m: u64) -> u64 {
    let (f, g) = fibonacci_pair_mod(n, m);
    sub_mod(add_mod(g, g, m), f, m)
}

/// `epsilon = (5/p)`, the Legendre symbol that steers the Fibonacci and
/// Lucas quotients. Fails for `p = 5`.
pub fn epsilon(p: u64) -> Result<i8, QuotientError> {
    if p == 5 {
        return Err(QuotientError::PIsFive);
    }
    Ok(legendre(5, p))
}

/// Fibonacci quotient `F_{p-eps}/p` mod `p`, with `eps = (5/p)`. The
/// divisibility `p | F_{p-eps}` is a theorem; its failure is reported as a
/// bug rather than swallowed.
pub fn fibonacci_quotient(p: u64) -> Result<crate::Residue, QuotientError> {
    let eps = epsilon(p)?;
    let ctx = ModContext::new(p, 1)?;
    let p2 = ModContext::new(p, 2)?.modulus();
    let n = if eps == 1 { p - 1 } else { p + 1 };
    let (f, _) = fibonacci_pair_mod(n, p2);
    if f % p != 0 {
        return Err(QuotientError::DivisibilityBug { numerator: f, p });
    }
    Ok(ctx.residue(f / p))
}

/// The Lucas-quotient expression `((5/p) L_{p+eps} - 3)/p` mod `p`, again
/// with `eps = (5/p)` computed internally.
pub fn lucas_expr(p: u64) -> Result<crate::Residue, QuotientError> {
    let eps = epsilon(p)?;
    let ctx = ModContext::new(p, 1)?;
    let p2 = ModContext::new(p, 2)?.modulus();
    let n = if eps == 1 { p + 1 } else { p - 1 };
    let l = lucas_mod(n, p2);
    let signed = if eps == 1 { l } else { sub_mod(0, l, p2) };
    let numerator = sub_mod(signed, 3, p2);
    if !numerator.is_multiple_of(p) {
        return Err(QuotientError::DivisibilityBug { numerator, p });
    }
    Ok(ctx.residue(numerator / p))
}

/// The exact rationals `B_0 .. B_12` as `(numerator, denominator)`.
const SMALL_BERNOULLI: [(i64, u64); 13] = [
    (1, 1),
    (-1, 2),
    (1, 6),
    (0, 1),
    (-1, 30),
    (0, 1),
    (1, 42),
    (0, 1),
    (-1, 30),
    (0, 1),
    (5, 66),
    (0, 1),
    (-691, 2730),
];

/// Bernoulli number `B_n` mod `p` from the defining recurrence
/// `sum_{j=0}^{n} C(n+1, j) B_j = 0` with `B_0 = 1`, entirely in residues.
/// (Sign convention: `B_1 = -1/2`.)
///
/// O(n^2) multiplications; the recurrence needs `n + 1 < p` so every
/// denominator is invertible. For `n + 1 >= p` the small indices
/// `n <= 12` fall back to the exact rational reduced mod p, which exists
/// unless `p - 1` divides `n` (then `p` divides the denominator); larger
/// out-of-range indices are rejected.
pub fn bernoulli_mod(n: u32, p: u64) -> Result<crate::Residue, QuotientError> {
    let ctx = ModContext::new(p, 1)?;
    if u64::from(n) + 1 >= p {
        let (num, den) = *SMALL_BERNOULLI
            .get(n as usize)
            .ok_or(QuotientError::IndexTooLarge { n, p })?;
        if den % p == 0 {
            return Err(QuotientError::NotReducible { n, p });
        }
        let den_inv = crate::modmath::inv_mod(den % p, p).expect("p does not divide den");
        let num = ctx.residue_signed(i128::from(num));
        return Ok(ctx.residue(mul_mod(num.value(), den_inv, p)));
    }
    // Inverses of 1..=n+1 by the prefix of the linear inverse recurrence.
    let mut small_inv = vec![0u64; n as usize + 2];
    small_inv[1] = 1;
    for j in 2..=(n as u64 + 1) {
        small_inv[j as usize] = mul_mod(p - p / j, small_inv[(p % j) as usize], p);
    }
    let mut b = vec![0u64; n as usize + 1];
    b[0] = 1;
    for m in 1..=(n as u64) {
        // B_m = -1/(m+1) * sum_{j=0}^{m-1} C(m+1, j) B_j
        let mut acc = 0u64;
        let mut binom = 1u64; // C(m+1, 0)
        for j in 0..m {
            if b[j as usize] != 0 {
                acc = add_mod(acc, mul_mod(binom, b[j as usize], p), p);
            }
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom = mul_mod(binom, (m + 1 - j) % p, p);
            binom = mul_mod(binom, small_inv[(j + 1) as usize], p);
        }
        let m_inv = small_inv[(m + 1) as usize];
        b[m as usize] = sub_mod(0, mul_mod(acc, m_inv, p), p);
    }
    Ok(ctx.residue(b[n as usize]))
}

/// `B_{p-3}` mod `p`, the value the mod-p^3 harmonic evaluations consume.
pub fn bernoulli_p_minus_3(p: u64) -> Result<crate::Residue, QuotientError> {
    debug_assert!(p >= 5);
    bernoulli_mod((p - 3) as u32, p)
}
