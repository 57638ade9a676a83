//! A data-driven catalog of congruence identities between partial harmonic
//! sums, Fermat quotients, Fibonacci/Lucas quotients and Bernoulli numbers,
//! plus a verifier that evaluates every entry at a prime.
//!
//! Identities are data, not code: each is a rational-coefficient linear
//! combination of atoms asserted to sum to zero mod `p^e`. Tests, docs and
//! the CLI all enumerate the same single source of truth.

use crate::hsums::{eval_naive_in, eval_sum, PrefixTables, SumSpec, SumVariant};
use crate::modmath::{add_mod, inv_mod, mul_mod, pow_mod, ModContext};
use crate::quotients;
use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// One multiplicative factor inside a [`Term`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    /// A partial sum `s/s*/s'/s''(k, N)` at the identity's exponent.
    Sum(SumSpec),
    /// `q_p(base)^power`, the Fermat quotient raised to a small power.
    FermatQ { base: u64, power: u32 },
    /// A literal factor `p^a`.
    PPower(u32),
    /// The Fibonacci quotient `F_{p-eps}/p` mod p.
    FibQuotient,
    /// The Lucas expression `((5/p) L_{p+eps} - 3)/p` mod p.
    LucasExpr,
    /// `B_{p-3}` mod p. Only meaningful next to a `PPower(e-1)` cofactor,
    /// which is how the catalog uses it.
    BernoulliPMinus3,
}

/// An exact rational coefficient. Every denominator in the catalog lies in
/// {1, 2, 3, 4}, hence is invertible for all p >= 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coeff {
    pub num: i64,
    pub den: u64,
}

impl Coeff {
    pub const ONE: Coeff = Coeff { num: 1, den: 1 };

    pub const fn int(num: i64) -> Coeff {
        Coeff { num, den: 1 }
    }

    pub const fn frac(num: i64, den: u64) -> Coeff {
        Coeff { num, den }
    }

    fn fold(&self, ctx: &ModContext) -> u64 {
        let m = ctx.modulus();
        let num = ctx.residue_signed(i128::from(self.num)).value();
        let den_inv = inv_mod(self.den % m, m).expect("catalog denominators are coprime to p >= 5");
        mul_mod(num, den_inv, m)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `coeff * product(atoms)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coeff,
    pub atoms: Vec<Atom>,
}

impl Term {
    fn new(coeff: Coeff, atoms: Vec<Atom>) -> Term {
        Term { coeff, atoms }
    }

    fn sum(coeff: i64, spec: SumSpec) -> Term {
        Term::new(Coeff::int(coeff), vec![Atom::Sum(spec)])
    }

    fn q2(coeff: i64) -> Term {
        Term::new(Coeff::int(coeff), vec![Atom::FermatQ { base: 2, power: 1 }])
    }
}

/// When an identity may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Applicability {
    /// Smallest prime the entry is claimed for.
    pub min_p: u64,
    /// Entries built on `(5/p)` exclude `p = 5`.
    pub not_five: bool,
    /// Upper bound for entries whose evaluation cost grows quadratically
    /// (the Bernoulli-carrying mod-p^3 pair).
    pub max_p: Option<u64>,
}

impl Applicability {
    const DEFAULT: Applicability = Applicability {
        min_p: 5,
        not_five: false,
        max_p: None,
    };

    fn admits(&self, p: u64) -> bool {
        p >= self.min_p && !(self.not_five && p == 5) && self.max_p.is_none_or(|m| p <= m)
    }
}

/// A congruence `sum of terms = 0 (mod p^exponent)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub id: String,
    pub terms: Vec<Term>,
    pub exponent: u32,
    pub applicability: Applicability,
    /// Attribution or a short description of where the congruence comes from.
    pub source: &'static str,
    /// Convention caveats worth surfacing next to the entry.
    pub notes: Option<&'static str>,
    /// For catalog rows of the form `sum = c * q_2`: the sum and a printable
    /// closed form, used by `eval` for cross-referencing.
    pub closed_form: Option<(SumSpec, &'static str)>,
}

impl Identity {
    fn new(id: &str, terms: Vec<Term>, source: &'static str) -> Identity {
        Identity {
            id: id.to_owned(),
            terms,
            exponent: 1,
            applicability: Applicability::DEFAULT,
            source,
            notes: None,
            closed_form: None,
        }
    }

    fn with_exponent(mut self, e: u32) -> Identity {
        self.exponent = e;
        self
    }

    fn with_notes(mut self, notes: &'static str) -> Identity {
        self.notes = Some(notes);
        self
    }

    fn not_five(mut self) -> Identity {
        self.applicability.not_five = true;
        self
    }

    fn with_max_p(mut self, max_p: u64) -> Identity {
        self.applicability.max_p = Some(max_p);
        self
    }

    fn with_closed_form(mut self, spec: SumSpec, text: &'static str) -> Identity {
        self.closed_form = Some((spec, text));
        self
    }

    /// Sum specs appearing in the identity, in term order.
    pub fn sum_specs(&self) -> impl Iterator<Item = &SumSpec> {
        self.terms.iter().flat_map(|t| {
            t.atoms.iter().filter_map(|a| match a {
                Atom::Sum(s) => Some(s),
                _ => None,
            })
        })
    }

    /// An identity also becomes inapplicable at the finitely many primes
    /// dividing one of its window denominators: there the floor boundaries
    /// `kp/N` land on integers and the window derivations degenerate.
    pub fn applicable_at(&self, p: u64) -> bool {
        self.applicability.admits(p) && self.sum_specs().all(|s| u64::from(s.n()) % p != 0)
    }
}

/// Evaluation status of one identity at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Applicable, every window nonempty, residual zero.
    Ok,
    /// Applicable and nonempty but the residual is nonzero.
    Fail,
    /// Not verified at this prime: inapplicable or some window was empty.
    SkippedEmpty,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::SkippedEmpty => "skipped-empty",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of evaluating one identity at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRecord {
    pub p: u64,
    pub id: String,
    pub status: Status,
    /// Residual mod `p^exponent`; zero for skipped records.
    pub residual: u64,
    /// Term counts of the constituent windows, in term order.
    pub term_counts: Vec<u64>,
}

/// The four parameterized families. Each instantiates to a plain
/// [`Identity`] given its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `s*(3x, 9x+3) = s(2x, 6x+2)` for `x = 0, 1, 2, ...`
    TwoThirdsA,
    /// `s*(3x+2, 9x+6) = s(2x+1, 6x+4)` for `x = 0, 1, 2, ...`
    TwoThirdsB,
    /// Centered window of odd `N`: `s*((N-1)/2, N) = s((N-1)/2, 2N)`,
    /// parameter is odd `N >= 3`.
    CenteredOdd,
    /// Oddly even `N` (`N = 2 mod 4`):
    /// `s*((N-2)/2, N) = (1/2) s((N-2)/4, N)`, parameter is `N`.
    OddlyEvenHalf,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::TwoThirdsA,
        Family::TwoThirdsB,
        Family::CenteredOdd,
        Family::OddlyEvenHalf,
    ];

    pub fn id_base(&self) -> &'static str {
        match self {
            Family::TwoThirdsA => "FA",
            Family::TwoThirdsB => "FB",
            Family::CenteredOdd => "S14",
            Family::OddlyEvenHalf => "S15",
        }
    }

    pub fn source(&self) -> &'static str {
        match self {
            Family::TwoThirdsA | Family::TwoThirdsB => {
                "two-thirds reduction family: three adjacent double-width windows collapse"
            }
            Family::CenteredOdd => "centered window of odd N against its double-width image",
            Family::OddlyEvenHalf => "half rule for N = 2 mod 4",
        }
    }

    /// Build the instance for parameter value `param` (`x` for the
    /// two-thirds families, `N` for the window rules). `None` when the
    /// parameter is outside the family's domain.
    pub fn instantiate(&self, param: u32) -> Option<Identity> {
        let (id, lhs, rhs, half) = match self {
            Family::TwoThirdsA => {
                let x = param;
                (
                    format!("FA[x={x}]"),
                    SumSpec::of(SumVariant::Alternating, 3 * x, 9 * x + 3),
                    SumSpec::of(SumVariant::Plain, 2 * x, 6 * x + 2),
                    false,
                )
            }
            Family::TwoThirdsB => {
                let x = param;
                (
                    format!("FB[x={x}]"),
                    SumSpec::of(SumVariant::Alternating, 3 * x + 2, 9 * x + 6),
                    SumSpec::of(SumVariant::Plain, 2 * x + 1, 6 * x + 4),
                    false,
                )
            }
            Family::CenteredOdd => {
                let n = param;
                if n < 3 || n.is_multiple_of(2) {
                    return None;
                }
                (
                    format!("S14[N={n}]"),
                    SumSpec::of(SumVariant::Alternating, (n - 1) / 2, n),
                    SumSpec::of(SumVariant::Plain, (n - 1) / 2, 2 * n),
                    false,
                )
            }
            Family::OddlyEvenHalf => {
                let n = param;
                if n < 2 || n % 4 != 2 {
                    return None;
                }
                (
                    format!("S15[N={n}]"),
                    SumSpec::of(SumVariant::Alternating, (n - 2) / 2, n),
                    SumSpec::of(SumVariant::Plain, (n - 2) / 4, n),
                    true,
                )
            }
        };
        let rhs_coeff = if half {
            Coeff::frac(-1, 2)
        } else {
            Coeff::int(-1)
        };
        Some(Identity {
            id,
            terms: vec![
                Term::sum(1, lhs),
                Term::new(rhs_coeff, vec![Atom::Sum(rhs)]),
            ],
            exponent: 1,
            applicability: Applicability::DEFAULT,
            source: self.source(),
            notes: None,
            closed_form: None,
        })
    }

    /// Parameters expanded at prime `p` under `limits`. Families expand only
    /// while every window denominator stays `<= p/3`, which keeps every
    /// constituent nonempty with at least two terms and avoids vacuous
    /// passes.
    pub fn params_at(&self, p: u64, limits: &ExpansionLimits) -> Vec<u32> {
        let budget = p / 3;
        match self {
            Family::TwoThirdsA | Family::TwoThirdsB => (0..)
                .take_while(|&x| u64::from(9 * x + 6) <= budget)
                .collect(),
            Family::CenteredOdd => (3..=limits.n_max)
                .step_by(2)
                .filter(|&n| u64::from(n) <= budget)
                .collect(),
            Family::OddlyEvenHalf => (2..=limits.n_max)
                .step_by(4)
                .filter(|&n| u64::from(n) <= budget)
                .collect(),
        }
    }
}

/// How far the parameterized families are expanded by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionLimits {
    /// Cap on the window denominator `N` for the two window-rule families.
    pub n_max: u32,
}

impl Default for ExpansionLimits {
    /// `N <= 46`, matching the classical table bound for these scans.
    fn default() -> Self {
        ExpansionLimits { n_max: 46 }
    }
}

/// The complete identity catalog: concrete entries plus the four families.
#[derive(Debug, Clone)]
pub struct Catalog {
    concrete: Vec<Identity>,
    families: Vec<Family>,
}

fn q2_pow(coeff: Coeff, power: u32) -> Term {
    Term::new(coeff, vec![Atom::FermatQ { base: 2, power }])
}

fn sum_spec(variant: SumVariant, k: u32, n: u32) -> SumSpec {
    SumSpec::of(variant, k, n)
}

fn build_concrete() -> Vec<Identity> {
    use SumVariant::{Alternating as St, EvenTerms as Se, OddTerms as So, Plain as S};
    let s = sum_spec;
    let sign_note = "stored with (-1)^j numerators; the classical statement \
                     uses (-1)^(j-1), so the sum enters with flipped sign";
    vec![
        // ---- the five classical alternating evaluations -----------------
        Identity::new(
            "E1",
            vec![Term::sum(1, s(St, 0, 1)), Term::q2(2)],
            "Eisenstein (1850): the full alternating window gives 2 q_2",
        )
        .with_notes(sign_note),
        Identity::new(
            "E2",
            vec![Term::sum(1, s(St, 0, 2)), Term::q2(1)],
            "Stern (1887): the half window gives q_2",
        )
        .with_notes(sign_note),
        Identity::new(
            "E3",
            vec![Term::sum(1, s(St, 0, 3)), Term::q2(2)],
            "Z.-H. Sun (1992), after E. Lehmer: the third window gives 2 q_2",
        )
        .with_notes(sign_note),
        Identity::new(
            "E4",
            vec![Term::sum(1, s(St, 2, 6)), Term::q2(-1)],
            "third-to-half window as the difference of the half and third forms",
        )
        .with_notes(
            "the lower bound floor(p/3) is exclusive; the inclusive reading \
             fails numerically, the subtraction of the two prefix windows \
             forces the exclusive one",
        ),
        Identity::new(
            "E5",
            vec![
                Term::sum(1, s(St, 3, 15)),
                Term::sum(1, s(St, 4, 15)),
                Term::sum(1, s(St, 0, 5)),
                Term::sum(1, s(St, 1, 5)),
            ],
            "Z.-H. Sun (1992), Thm 3.2: fifth-to-third window against the 2/5 prefix",
        )
        .with_notes(sign_note),
        // ---- decomposition rules, one representative window each --------
        Identity::new(
            "R6a",
            vec![
                Term::sum(1, s(St, 1, 4)),
                Term::sum(-1, s(Se, 1, 4)),
                Term::sum(1, s(So, 1, 4)),
            ],
            "s* = s'' - s'",
        ),
        Identity::new(
            "R6b",
            vec![
                Term::sum(1, s(St, 1, 4)),
                Term::sum(-1, s(S, 1, 4)),
                Term::sum(2, s(So, 1, 4)),
            ],
            "s* = s - 2s'",
        ),
        Identity::new(
            "R6c",
            vec![
                Term::sum(1, s(St, 1, 4)),
                Term::sum(1, s(S, 1, 4)),
                Term::sum(-2, s(Se, 1, 4)),
            ],
            "s* = -s + 2s''",
        ),
        Identity::new(
            "R7",
            vec![
                Term::sum(1, s(Se, 1, 3)),
                Term::new(Coeff::frac(-1, 2), vec![Atom::Sum(s(S, 1, 6))]),
            ],
            "halving: the even terms of a window are half the double-width window",
        )
        .with_notes(
            "folding even j = 2i halves the window denominator's reciprocal \
             range: s''(k, N) = (1/2) s(k, 2N); the variant with N/2 on the \
             right is the same rule read at an even denominator",
        ),
        Identity::new(
            "R8",
            vec![Term::sum(1, s(S, 1, 5)), Term::sum(1, s(S, 3, 5))],
            "mirror: complementary windows are negatives",
        ),
        Identity::new(
            "R9",
            vec![Term::sum(1, s(St, 1, 5)), Term::sum(-1, s(St, 3, 5))],
            "mirror: complementary alternating windows are congruent",
        ),
        Identity::new(
            "C0",
            vec![Term::sum(1, s(St, 0, 5)), Term::sum(1, s(S, 1, 10))],
            "complement fold: s*(0, N) = -s(1, 2N)",
        )
        .with_notes(
            "the right-hand side is the plain sum: s*(0,N) + s(0,N) telescopes \
             to s(0,2N), hence s*(0,N) = -(s(0,N) - s(0,2N)) = -s(1,2N)",
        ),
        // ---- star-to-plain conversion rules ------------------------------
        Identity::new(
            "S10",
            vec![
                Term::sum(1, s(St, 1, 3)),
                Term::new(Coeff::frac(-1, 2), vec![Atom::Sum(s(S, 1, 6))]),
                Term::new(Coeff::frac(1, 2), vec![Atom::Sum(s(S, 4, 6))]),
            ],
            "s*(k, N) = (1/2) s(k, 2N) - (1/2) s(N+k, 2N)",
        ),
        Identity::new(
            "S11",
            vec![
                Term::sum(1, s(St, 1, 5)),
                Term::sum(1, s(S, 1, 5)),
                Term::sum(-1, s(S, 1, 10)),
            ],
            "s*(k, N) + s(k, N) = s(k, 2N)",
        ),
        Identity::new(
            "S12",
            vec![
                Term::sum(1, s(St, 1, 5)),
                Term::sum(-1, s(S, 1, 5)),
                Term::sum(-1, s(S, 3, 10)),
            ],
            "s*(k, N) - s(k, N) = s(N-1-k, 2N)",
        ),
        Identity::new(
            "S13",
            vec![
                Term::sum(1, s(St, 1, 6)),
                Term::sum(-1, s(S, 4, 12)),
                Term::sum(-1, s(S, 2, 12)),
                Term::sum(-1, s(S, 3, 12)),
            ],
            "homogeneous split: s*(k, N) = s(N-1-k, 2N) + s(2k, 2N) + s(2k+1, 2N)",
        ),
        // ---- the surprising special values -------------------------------
        Identity::new(
            "T16",
            vec![
                Term::sum(1, s(St, 0, 3)),
                Term::sum(-1, s(St, 0, 5)),
                Term::sum(1, s(St, 0, 5)),
                Term::sum(1, s(St, 1, 5)),
            ],
            "Z.-H. Sun's fifth-window relation in prefix form",
        ),
        Identity::new(
            "T17",
            vec![Term::sum(1, s(St, 0, 3)), Term::sum(1, s(St, 1, 5))],
            "s*(0, 3) = -s*(1, 5)",
        ),
        Identity::new(
            "T18a",
            vec![
                Term::sum(1, s(S, 0, 6)),
                Term::sum(1, s(S, 2, 6)),
                Term::q2(4),
            ],
            "the unique equally-spaced two-term pair: s(0,6) + s(2,6) = -4 q_2",
        ),
        Identity::new(
            "T18b",
            vec![
                Term::sum(1, s(S, 1, 10)),
                Term::sum(1, s(S, 3, 10)),
                Term::q2(-4),
            ],
            "the partner pair: s(1,10) + s(3,10) = 4 q_2",
        ),
        Identity::new(
            "T19",
            vec![
                Term::sum(1, s(St, 5, 15)),
                Term::sum(-1, s(S, 1, 10)),
                Term::sum(2, s(S, 2, 10)),
                Term::sum(2, s(S, 3, 10)),
            ],
            "s*(5, 15) developed over tenth windows",
        ),
        Identity::new(
            "SK1",
            vec![
                Term::sum(2, s(S, 0, 10)),
                Term::sum(3, s(S, 1, 10)),
                Term::sum(2, s(S, 2, 10)),
                Term::sum(3, s(S, 3, 10)),
                Term::sum(2, s(S, 4, 10)),
            ],
            "Skula (2008), Thm 3.2: first tenth-window relation",
        ),
        Identity::new(
            "SK2",
            vec![
                Term::sum(1, s(S, 0, 10)),
                Term::sum(2, s(S, 1, 10)),
                Term::sum(1, s(S, 4, 10)),
            ],
            "Skula (2008), Thm 3.2: second tenth-window relation",
        ),
        Identity::new(
            "T20",
            vec![Term::sum(1, s(St, 5, 15)), Term::sum(-1, s(S, 3, 10))],
            "s*(5, 15) = s(3, 10): a development below denominator 15",
        ),
        Identity::new(
            "P26",
            vec![Term::sum(1, s(St, 2, 6)), Term::sum(-1, s(S, 1, 4))],
            "Williams (1991): s*(2, 6) = s(1, 4)",
        ),
        Identity::new(
            "P312",
            vec![Term::sum(1, s(St, 3, 12)), Term::sum(-1, s(S, 2, 8))],
            "Z.-H. Sun (1992), Thm 3.4: s*(3, 12) = s(2, 8)",
        ),
        // ---- the six pure-q_2 rows ---------------------------------------
        Identity::new(
            "TAB1[s*(0,1)]",
            vec![Term::sum(1, s(St, 0, 1)), Term::q2(2)],
            "q_2 table row",
        )
        .with_closed_form(s(St, 0, 1), "-2*q_2"),
        Identity::new(
            "TAB1[s*(0,2)]",
            vec![Term::sum(1, s(St, 0, 2)), Term::q2(1)],
            "q_2 table row",
        )
        .with_closed_form(s(St, 0, 2), "-q_2"),
        Identity::new(
            "TAB1[s*(0,3)]",
            vec![Term::sum(1, s(St, 0, 3)), Term::q2(2)],
            "q_2 table row",
        )
        .with_closed_form(s(St, 0, 3), "-2*q_2"),
        Identity::new(
            "TAB1[s*(1,3)]",
            vec![Term::sum(1, s(St, 1, 3)), Term::q2(-2)],
            "q_2 table row",
        )
        .with_closed_form(s(St, 1, 3), "2*q_2"),
        Identity::new(
            "TAB1[s*(1,5)]",
            vec![Term::sum(1, s(St, 1, 5)), Term::q2(-2)],
            "q_2 table row",
        )
        .with_closed_form(s(St, 1, 5), "2*q_2"),
        Identity::new(
            "TAB1[s*(2,6)]",
            vec![Term::sum(1, s(St, 2, 6)), Term::q2(-1)],
            "q_2 table row",
        )
        .with_closed_form(s(St, 2, 6), "q_2"),
        // ---- quotient evaluations of s*(0, 5) -----------------------------
        Identity::new(
            "W5",
            vec![
                Term::sum(1, s(St, 0, 5)),
                Term::q2(2),
                Term::new(Coeff::frac(5, 2), vec![Atom::FibQuotient]),
            ],
            "Williams (1982), Thm 2: s*(0,5) via the Fibonacci quotient",
        )
        .not_five(),
        Identity::new(
            "L5",
            vec![
                Term::sum(1, s(St, 0, 5)),
                Term::q2(2),
                Term::new(Coeff::ONE, vec![Atom::LucasExpr]),
            ],
            "Z.-H. Sun (1992), Cor 1.11: s*(0,5) via the Lucas quotient",
        )
        .not_five(),
        // ---- the two mod-p^3 evaluations ----------------------------------
        Identity::new(
            "M3a",
            vec![
                Term::sum(1, s(S, 0, 1)),
                Term::new(
                    Coeff::frac(1, 3),
                    vec![Atom::PPower(2), Atom::BernoulliPMinus3],
                ),
            ],
            "Glaisher: the full harmonic window mod p^3",
        )
        .with_exponent(3)
        .with_max_p(MOD_P3_MAX_P)
        .with_notes(
            "s(0,1) = -(1/3) p^2 B_{p-3} mod p^3; the variant with + fails \
             numerically at every prime checked",
        ),
        Identity::new(
            "M3b",
            vec![
                Term::sum(1, s(St, 0, 1)),
                q2_pow(Coeff::int(2), 1),
                Term::new(
                    Coeff::int(-1),
                    vec![Atom::PPower(1), Atom::FermatQ { base: 2, power: 2 }],
                ),
                Term::new(
                    Coeff::frac(2, 3),
                    vec![Atom::PPower(2), Atom::FermatQ { base: 2, power: 3 }],
                ),
                Term::new(
                    Coeff::frac(1, 4),
                    vec![Atom::PPower(2), Atom::BernoulliPMinus3],
                ),
            ],
            "Z.-H. Sun (2008): the full alternating window mod p^3",
        )
        .with_exponent(3)
        .with_max_p(MOD_P3_MAX_P),
    ]
}

/// The two Bernoulli-carrying entries cost O(p^2) each, so the catalog caps
/// them; this bound is exactly the range the acceptance sweep checks them
/// over.
pub const MOD_P3_MAX_P: u64 = 2000;

impl Catalog {
    /// The complete, deduplicated catalog.
    pub fn standard() -> Catalog {
        Catalog {
            concrete: build_concrete(),
            families: Family::ALL.to_vec(),
        }
    }

    pub fn concrete(&self) -> &[Identity] {
        &self.concrete
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    /// Every identity to check at `p`: the concrete entries followed by the
    /// lazily expanded family instances.
    pub fn expand(&self, p: u64, limits: &ExpansionLimits) -> Vec<Identity> {
        let mut out = self.concrete.clone();
        for fam in &self.families {
            for param in fam.params_at(p, limits) {
                out.extend(fam.instantiate(param));
            }
        }
        out
    }

    /// The pure-q_2 table rows as `(k, N, closed form)`.
    pub fn q2_table_rows(&self) -> Vec<(u32, u32, &'static str)> {
        self.concrete
            .iter()
            .filter_map(|i| i.closed_form.map(|(s, text)| (s.k(), s.n(), text)))
            .collect()
    }

    /// Known closed form of a sum, if the catalog carries one: either a
    /// table row itself or its mirror image (complementary alternating
    /// windows are congruent).
    pub fn closed_form_of(&self, spec: &SumSpec) -> Option<String> {
        for ident in &self.concrete {
            if let Some((row, text)) = ident.closed_form {
                if row == *spec {
                    return Some(text.to_owned());
                }
                if spec.variant() == SumVariant::Alternating
                    && row.n() == spec.n()
                    && row.k() == spec.n() - 1 - spec.k()
                {
                    return Some(format!("{text} (mirror of {row})"));
                }
            }
        }
        None
    }

    /// FNV-1a fingerprint of the catalog definition, used to guard
    /// checkpoint resumption against a changed catalog.
    pub fn fingerprint(&self) -> u64 {
        let mut hash = 0xcbf2_9ce4_8422_2325u64;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                hash ^= u64::from(b);
                hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for ident in &self.concrete {
            eat(ident.id.as_bytes());
            eat(&[ident.exponent as u8]);
            eat(&ident.applicability.min_p.to_le_bytes());
            for term in &ident.terms {
                eat(&term.coeff.num.to_le_bytes());
                eat(&term.coeff.den.to_le_bytes());
                for atom in &term.atoms {
                    match *atom {
                        Atom::Sum(s) => {
                            eat(s.variant().token().as_bytes());
                            eat(&s.k().to_le_bytes());
                            eat(&s.n().to_le_bytes());
                        }
                        Atom::FermatQ { base, power } => {
                            eat(b"q");
                            eat(&base.to_le_bytes());
                            eat(&power.to_le_bytes());
                        }
                        Atom::PPower(a) => {
                            eat(b"p");
                            eat(&a.to_le_bytes());
                        }
                        Atom::FibQuotient => eat(b"F"),
                        Atom::LucasExpr => eat(b"L"),
                        Atom::BernoulliPMinus3 => eat(b"B"),
                    }
                }
            }
        }
        for fam in &self.families {
            eat(fam.id_base().as_bytes());
        }
        hash
    }
}

/// Per-prime evaluation state: prefix tables plus memoized quotient values,
/// shared across all identities checked at that prime.
pub struct PrimeEvaluator {
    p: u64,
    tables: PrefixTables,
    fermat: Vec<((u64, u32), u64)>,
    fib: Option<u64>,
    lucas: Option<u64>,
    bernoulli: Option<u64>,
}

impl PrimeEvaluator {
    pub fn new(p: u64) -> PrimeEvaluator {
        debug_assert!(p >= 5 && crate::modmath::is_prime(p));
        PrimeEvaluator {
            p,
            tables: PrefixTables::build(p),
            fermat: Vec::new(),
            fib: None,
            lucas: None,
            bernoulli: None,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn tables(&self) -> &PrefixTables {
        &self.tables
    }

    fn fermat_q(&mut self, base: u64, e: u32) -> u64 {
        if let Some(&(_, v)) = self.fermat.iter().find(|(k, _)| *k == (base, e)) {
            return v;
        }
        let ctx = ModContext::new(self.p, e).expect("evaluator prime");
        let v = quotients::fermat_quotient(base, &ctx)
            .expect("catalog bases are coprime to admitted primes")
            .value();
        self.fermat.push(((base, e), v));
        v
    }

    fn fib_quotient(&mut self) -> u64 {
        if let Some(v) = self.fib {
            return v;
        }
        let v = quotients::fibonacci_quotient(self.p)
            .expect("entries using the Fibonacci quotient exclude p = 5")
            .value();
        self.fib = Some(v);
        v
    }

    fn lucas_expr(&mut self) -> u64 {
        if let Some(v) = self.lucas {
            return v;
        }
        let v = quotients::lucas_expr(self.p)
            .expect("entries using the Lucas expression exclude p = 5")
            .value();
        self.lucas = Some(v);
        v
    }

    fn bernoulli(&mut self) -> u64 {
        if let Some(v) = self.bernoulli {
            return v;
        }
        let v = quotients::bernoulli_p_minus_3(self.p)
            .expect("p >= 5 admits B_{p-3}")
            .value();
        self.bernoulli = Some(v);
        v
    }

    fn atom_value(&mut self, atom: &Atom, ctx: &ModContext) -> u64 {
        let m = ctx.modulus();
        match *atom {
            Atom::Sum(ref spec) => {
                if ctx.exponent() == 1 {
                    eval_sum(spec, &self.tables).value()
                } else {
                    eval_naive_in(spec, ctx).value()
                }
            }
            Atom::FermatQ { base, power } => {
                let q = self.fermat_q(base, ctx.exponent());
                pow_mod(q, u64::from(power), m)
            }
            Atom::PPower(a) => {
                if a >= ctx.exponent() {
                    0
                } else {
                    pow_mod(self.p, u64::from(a), m)
                }
            }
            // The two quotients and B_{p-3} are mod-p values; the catalog
            // only multiplies them into terms carrying a p^(e-1) factor, so
            // the products are exact at the entry's precision.
            Atom::FibQuotient => self.fib_quotient() % m,
            Atom::LucasExpr => self.lucas_expr() % m,
            Atom::BernoulliPMinus3 => self.bernoulli() % m,
        }
    }

    /// Evaluate one identity, honoring its applicability predicate and the
    /// nonemptiness requirement on every constituent window.
    pub fn evaluate(&mut self, identity: &Identity) -> VerificationRecord {
        let p = self.p;
        let term_counts: Vec<u64> = identity.sum_specs().map(|s| s.term_count(p)).collect();
        if !identity.applicable_at(p) || term_counts.contains(&0) {
            return VerificationRecord {
                p,
                id: identity.id.clone(),
                status: Status::SkippedEmpty,
                residual: 0,
                term_counts,
            };
        }
        let ctx = ModContext::new(p, identity.exponent).expect("admitted prime");
        let m = ctx.modulus();
        let mut residual = 0u64;
        for term in &identity.terms {
            let mut value = term.coeff.fold(&ctx);
            for atom in &term.atoms {
                value = mul_mod(value, self.atom_value(atom, &ctx), m);
            }
            residual = add_mod(residual, value, m);
        }
        VerificationRecord {
            p,
            id: identity.id.clone(),
            status: if residual == 0 {
                Status::Ok
            } else {
                Status::Fail
            },
            residual,
            term_counts,
        }
    }
}

/// Evaluate a single identity at `p` (fresh tables; use [`PrimeEvaluator`]
/// directly to share work across entries).
pub fn evaluate(identity: &Identity, p: u64) -> VerificationRecord {
    PrimeEvaluator::new(p).evaluate(identity)
}

/// Evaluate the whole catalog at one prime. Records are sorted by id.
pub fn verify_prime_with(
    catalog: &Catalog,
    p: u64,
    limits: &ExpansionLimits,
) -> Vec<VerificationRecord> {
    let mut evaluator = PrimeEvaluator::new(p);
    let mut records: Vec<VerificationRecord> = catalog
        .expand(p, limits)
        .iter()
        .map(|ident| evaluator.evaluate(ident))
        .collect();
    records.sort_by(|a, b| a.id.cmp(&b.id));
    records
}

/// [`verify_prime_with`] against the standard catalog.
///
/// ```
/// use fqsums_core::identities::{verify_prime, ExpansionLimits, Status};
///
/// let records = verify_prime(1093, &ExpansionLimits::default());
/// assert!(records.iter().all(|r| r.status != Status::Fail));
/// ```
pub fn verify_prime(p: u64, limits: &ExpansionLimits) -> Vec<VerificationRecord> {
    verify_prime_with(&Catalog::standard(), p, limits)
}
