//! The partial sums `s(k, N)`, `s*(k, N)` and their odd-/even-term
//! restrictions `s'(k, N)`, `s''(k, N)`, evaluated mod p either naively or
//! in O(1) from per-prime prefix tables.
//!
//! Every sum runs over the half-open window
//! `floor(kp/N) < j <= floor((k+1)p/N)` with `j = p` excluded (the exclusion
//! only matters when `k + 1 = N`). The lower bound is exclusive: the
//! classical statements that print the floor itself as lower limit only hold
//! with the exclusive convention, which is the one forced by deriving the
//! third-to-half window as a difference of prefix windows.

use crate::modmath::{add_mod, batch_inverses, inv_mod, mul_mod, sub_mod, ModContext, Residue};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Which numerator the sum carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SumVariant {
    /// `s(k, N)`: plain reciprocals.
    Plain,
    /// `s*(k, N)`: numerator `(-1)^j`.
    Alternating,
    /// `s'(k, N)`: odd `j` only.
    OddTerms,
    /// `s''(k, N)`: even `j` only.
    EvenTerms,
}

impl SumVariant {
    pub const ALL: [SumVariant; 4] = [
        SumVariant::Plain,
        SumVariant::Alternating,
        SumVariant::OddTerms,
        SumVariant::EvenTerms,
    ];

    /// Token used by the CLI (`s`, `sstar`, `sprime`, `sdprime`).
    pub fn token(&self) -> &'static str {
        match self {
            SumVariant::Plain => "s",
            SumVariant::Alternating => "sstar",
            SumVariant::OddTerms => "sprime",
            SumVariant::EvenTerms => "sdprime",
        }
    }

    /// Notation used in output (`s`, `s*`, `s'`, `s''`).
    pub fn symbol(&self) -> &'static str {
        match self {
            SumVariant::Plain => "s",
            SumVariant::Alternating => "s*",
            SumVariant::OddTerms => "s'",
            SumVariant::EvenTerms => "s''",
        }
    }

    pub fn parse_token(tok: &str) -> Option<SumVariant> {
        match tok {
            "s" => Some(SumVariant::Plain),
            "sstar" | "s*" => Some(SumVariant::Alternating),
            "sprime" | "s'" => Some(SumVariant::OddTerms),
            "sdprime" | "s''" => Some(SumVariant::EvenTerms),
            _ => None,
        }
    }
}

impl fmt::Display for SumVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsumError {
    /// `k >= N`.
    IndexOutOfRange { k: u32, n: u32 },
    /// `N = 0`.
    ZeroDenominator,
    /// Unparseable sum expression.
    BadSyntax,
}

impl fmt::Display for HsumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HsumError::IndexOutOfRange { k, n } => write!(f, "need k < N, got k={k}, N={n}"),
            HsumError::ZeroDenominator => write!(f, "N must be positive"),
            HsumError::BadSyntax => {
                write!(f, "expected s(k,N), s*(k,N), s'(k,N) or s''(k,N)")
            }
        }
    }
}

/// One partial sum: a variant plus the window index `k < N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SumSpec {
    variant: SumVariant,
    k: u32,
    n: u32,
}

impl SumSpec {
    pub fn new(variant: SumVariant, k: u32, n: u32) -> Result<SumSpec, HsumError> {
        if n == 0 {
            return Err(HsumError::ZeroDenominator);
        }
        if k >= n {
            return Err(HsumError::IndexOutOfRange { k, n });
        }
        Ok(SumSpec { variant, k, n })
    }

    /// Shorthand used all over the identity catalog; panics on `k >= N`.
    pub(crate) fn of(variant: SumVariant, k: u32, n: u32) -> SumSpec {
        SumSpec::new(variant, k, n).expect("catalog sum spec")
    }

    pub fn variant(&self) -> SumVariant {
        self.variant
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Window bounds `(floor(kp/N), floor((k+1)p/N))`; the sum runs over the
    /// half-open interval between them.
    pub fn bounds(&self, p: u64) -> (u64, u64) {
        let n = u128::from(self.n);
        let k = u128::from(self.k);
        let p = u128::from(p);
        (((k * p) / n) as u64, (((k + 1) * p) / n) as u64)
    }

    /// Number of terms actually summed: the window size, minus the excluded
    /// `j = p` (which lies in the window exactly when `k + 1 = N`), and
    /// filtered by parity for the odd/even variants.
    pub fn term_count(&self, p: u64) -> u64 {
        let (lo, hi) = self.bounds(p);
        let hi = if self.k + 1 == self.n { p - 1 } else { hi };
        if hi <= lo {
            return 0;
        }
        match self.variant {
            SumVariant::Plain | SumVariant::Alternating => hi - lo,
            // odd integers in (lo, hi]
            SumVariant::OddTerms => hi.div_ceil(2) - lo.div_ceil(2),
            // even integers in (lo, hi]
            SumVariant::EvenTerms => hi / 2 - lo / 2,
        }
    }
}

impl fmt::Display for SumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.variant.symbol(), self.k, self.n)
    }
}

impl FromStr for SumSpec {
    type Err = HsumError;

    /// Grammar: `s(k,N)` | `s*(k,N)` | `s'(k,N)` | `s''(k,N)`.
    fn from_str(s: &str) -> Result<SumSpec, HsumError> {
        let s = s.trim();
        let open = s.find('(').ok_or(HsumError::BadSyntax)?;
        let variant = SumVariant::parse_token(&s[..open]).ok_or(HsumError::BadSyntax)?;
        let rest = &s[open + 1..];
        let close = rest.find(')').ok_or(HsumError::BadSyntax)?;
        if !rest[close + 1..].trim().is_empty() {
            return Err(HsumError::BadSyntax);
        }
        let mut parts = rest[..close].splitn(2, ',');
        let k = parts
            .next()
            .and_then(|t| t.trim().parse::<u32>().ok())
            .ok_or(HsumError::BadSyntax)?;
        let n = parts
            .next()
            .and_then(|t| t.trim().parse::<u32>().ok())
            .ok_or(HsumError::BadSyntax)?;
        SumSpec::new(variant, k, n)
    }
}

/// Per-prime prefix tables: `h[j] = sum_{i<=j} 1/i` and
/// `a[j] = sum_{i<=j} (-1)^i/i`, both mod p, for `j = 0..p-1`. Any window
/// sum is then a difference of two entries. Immutable once built.
///
/// ```
/// use fqsums_core::{eval_sum, PrefixTables, SumSpec};
///
/// let tables = PrefixTables::build(13);
/// let spec: SumSpec = "s*(2,6)".parse().unwrap();
/// assert_eq!(eval_sum(&spec, &tables).value(), 3); // = q_2(13)
/// ```
#[derive(Debug, Clone)]
pub struct PrefixTables {
    p: u64,
    h: Vec<u64>,
    a: Vec<u64>,
    inv2: u64,
}

impl PrefixTables {
    /// O(p) construction on top of the linear inverse table.
    pub fn build(p: u64) -> PrefixTables {
        debug_assert!(p >= 3);
        let inv = batch_inverses(p);
        let mut h = Vec::with_capacity(p as usize);
        let mut a = Vec::with_capacity(p as usize);
        h.push(0);
        a.push(0);
        for j in 1..p {
            let v = inv[j as usize];
            h.push(add_mod(h[(j - 1) as usize], v, p));
            let signed = if j % 2 == 0 { v } else { sub_mod(0, v, p) };
            a.push(add_mod(a[(j - 1) as usize], signed, p));
        }
        let inv2 = inv[2];
        PrefixTables { p, h, a, inv2 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `sum_{i<=j} 1/i mod p`.
    pub fn harmonic(&self, j: u64) -> u64 {
        self.h[j as usize]
    }

    /// `sum_{i<=j} (-1)^i/i mod p`.
    pub fn alternating(&self, j: u64) -> u64 {
        self.a[j as usize]
    }
}

/// Evaluate a sum mod p in O(1) from the prefix tables.
pub fn eval_sum(spec: &SumSpec, tables: &PrefixTables) -> Residue {
    let p = tables.p;
    let ctx = ModContext::new(p, 1).expect("tables are built for odd primes");
    let (lo, hi) = spec.bounds(p);
    let hi = if spec.k() + 1 == spec.n() { p - 1 } else { hi };
    if hi <= lo {
        return ctx.residue(0);
    }
    let h = sub_mod(tables.h[hi as usize], tables.h[lo as usize], p);
    let a = sub_mod(tables.a[hi as usize], tables.a[lo as usize], p);
    let value = match spec.variant() {
        SumVariant::Plain => h,
        SumVariant::Alternating => a,
        // odd terms enter h with +1 and a with -1; even terms with +1, +1
        SumVariant::OddTerms => mul_mod(sub_mod(h, a, p), tables.inv2, p),
        SumVariant::EvenTerms => mul_mod(add_mod(h, a, p), tables.inv2, p),
    };
    ctx.residue(value)
}

/// Brute-force evaluation in an arbitrary context `p^e`: loops over the
/// window inverting term by term. This is the independent oracle for
/// [`eval_sum`] and the only evaluation path used at exponents above 1.
pub fn eval_naive_in(spec: &SumSpec, ctx: &ModContext) -> Residue {
    let p = ctx.p();
    let m = ctx.modulus();
    let (lo, hi) = spec.bounds(p);
    let mut acc = 0u64;
    for j in lo + 1..=hi {
        if j == p {
            continue;
        }
        match spec.variant() {
            SumVariant::OddTerms if j % 2 == 0 => continue,
            SumVariant::EvenTerms if j % 2 == 1 => continue,
            _ => {}
        }
        // j < p or p < j < p^e with p not dividing j, so j is invertible
        let inv = inv_mod(j % m, m).expect("window term coprime to p");
        acc = match spec.variant() {
            SumVariant::Alternating if j % 2 == 1 => sub_mod(acc, inv, m),
            _ => add_mod(acc, inv, m),
        };
    }
    ctx.residue(acc)
}

/// Brute-force evaluation mod p (exponent 1).
pub fn eval_naive(spec: &SumSpec, p: u64) -> Residue {
    eval_naive_in(spec, &ModContext::new(p, 1).expect("odd prime"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: SumVariant, k: u32, n: u32) -> SumSpec {
        SumSpec::new(v, k, n).unwrap()
    }

    #[test]
    fn prefix_tables_p13() {
        let t = PrefixTables::build(13);
        assert_eq!(t.harmonic(6), 7); // 1+7+9+10+8+11 mod 13
        assert_eq!(t.alternating(4), 7); // -1+7-9+10 mod 13
        assert_eq!(t.harmonic(1), 1);
        assert_eq!(t.alternating(1), 12);
        assert_eq!(t.harmonic(12), 0);
    }

    #[test]
    fn prefix_tables_last_entry_vanishes() {
        for p in [5u64, 13, 97, 1093] {
            let t = PrefixTables::build(p);
            assert_eq!(t.harmonic(p - 1), 0, "p={p}");
        }
    }

    #[test]
    fn eval_sum_examples_p13() {
        let t = PrefixTables::build(13);
        // s(1,4) = 1/4 + 1/5 + 1/6
        assert_eq!(eval_sum(&spec(SumVariant::Plain, 1, 4), &t).value(), 3);
        // s*(2,6) = -1/5 + 1/6 = q_2(13)
        assert_eq!(
            eval_sum(&spec(SumVariant::Alternating, 2, 6), &t).value(),
            3
        );
        // full harmonic window vanishes by complement pairing
        assert_eq!(eval_sum(&spec(SumVariant::Plain, 0, 1), &t).value(), 0);
        assert_eq!(eval_sum(&spec(SumVariant::OddTerms, 1, 4), &t).value(), 8);
        assert_eq!(eval_sum(&spec(SumVariant::EvenTerms, 1, 4), &t).value(), 8);
    }

    #[test]
    fn eval_sum_examples_p31() {
        let t = PrefixTables::build(31);
        assert_eq!(
            eval_sum(&spec(SumVariant::Alternating, 5, 15), &t).value(),
            27
        );
        assert_eq!(eval_sum(&spec(SumVariant::Plain, 3, 10), &t).value(), 27);
    }

    #[test]
    fn term_count_examples() {
        assert_eq!(spec(SumVariant::Plain, 0, 2).term_count(13), 6);
        assert_eq!(spec(SumVariant::Plain, 5, 15).term_count(31), 2);
        // k+1 = N: the window reaches p, which is excluded
        assert_eq!(spec(SumVariant::Plain, 1, 2).term_count(13), 6);
        assert_eq!(spec(SumVariant::Plain, 0, 1).term_count(13), 12);
        // parity-restricted counts over (4, 8]: odds {5,7}, evens {6,8}
        assert_eq!(spec(SumVariant::OddTerms, 1, 3).term_count(13), 2);
        assert_eq!(spec(SumVariant::EvenTerms, 1, 3).term_count(13), 2);
        // empty window
        assert_eq!(spec(SumVariant::Plain, 3, 15).term_count(5), 0);
    }

    #[test]
    fn naive_agrees_with_tables_on_examples() {
        let t = PrefixTables::build(13);
        for s in [
            spec(SumVariant::Alternating, 0, 3),
            spec(SumVariant::Alternating, 2, 5),
            spec(SumVariant::Plain, 2, 10),
        ] {
            assert_eq!(eval_naive(&s, 13), eval_sum(&s, &t), "{s}");
        }
        assert_eq!(
            eval_naive(&spec(SumVariant::Alternating, 0, 3), 13).value(),
            7
        );
        assert_eq!(
            eval_naive(&spec(SumVariant::Alternating, 2, 5), 13).value(),
            9
        );
        assert_eq!(eval_naive(&spec(SumVariant::Plain, 2, 10), 13).value(), 9);
        // empty window evaluates to zero
        assert_eq!(eval_naive(&spec(SumVariant::Plain, 3, 15), 5).value(), 0);
        assert_eq!(spec(SumVariant::Plain, 3, 15).term_count(5), 0);
    }

    #[test]
    fn naive_full_precision_mod_p3() {
        // These two drive the mod-p^3 catalog entries.
        let c7 = ModContext::new(7, 3).unwrap();
        assert_eq!(
            eval_naive_in(&spec(SumVariant::Plain, 0, 1), &c7).value(),
            294
        );
        assert_eq!(
            eval_naive_in(&spec(SumVariant::Alternating, 0, 1), &c7).value(),
            108
        );
        let c5 = ModContext::new(5, 3).unwrap();
        assert_eq!(
            eval_naive_in(&spec(SumVariant::Plain, 0, 1), &c5).value(),
            75
        );
        assert_eq!(
            eval_naive_in(&spec(SumVariant::Alternating, 0, 1), &c5).value(),
            114
        );
    }

    #[test]
    fn spec_validation() {
        assert!(SumSpec::new(SumVariant::Plain, 3, 3).is_err());
        assert!(SumSpec::new(SumVariant::Plain, 0, 0).is_err());
        assert!(SumSpec::new(SumVariant::Plain, 0, 1).is_ok());
    }

    #[test]
    fn parse_grammar() {
        for (txt, v, k, n) in [
            ("s(1,4)", SumVariant::Plain, 1, 4),
            ("s*(2,6)", SumVariant::Alternating, 2, 6),
            ("s'(0,3)", SumVariant::OddTerms, 0, 3),
            ("s''(5, 15)", SumVariant::EvenTerms, 5, 15),
        ] {
            let s: SumSpec = txt.parse().unwrap();
            assert_eq!((s.variant(), s.k(), s.n()), (v, k, n), "{txt}");
        }
        for bad in [
            "", "s", "t(1,4)", "s(4)", "s(1,4) x", "s(4,1)", "s(1,0)", "s(a,b)",
        ] {
            assert!(bad.parse::<SumSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_roundtrips() {
        use alloc::string::ToString;
        for v in SumVariant::ALL {
            let s = spec(v, 2, 7);
            assert_eq!(s.to_string().parse::<SumSpec>().unwrap(), s);
        }
    }
}
