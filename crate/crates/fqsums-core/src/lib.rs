//! Exact modular arithmetic for Fermat-quotient congruences on partial
//! harmonic sums.
//!
//! The crate evaluates the partial sums
//!
//! ```text
//! s(k, N)  = sum of 1/j       over floor(kp/N) < j <= floor((k+1)p/N), j != p
//! s*(k, N) = sum of (-1)^j/j  over the same range
//! ```
//!
//! modulo an odd prime `p` (and, for a handful of entries, modulo `p^3`),
//! together with the special quotients that appear in their closed-form
//! evaluations: the Fermat quotient `q_p(b) = (b^(p-1) - 1)/p`, the Fibonacci
//! and Lucas quotients, and Bernoulli numbers mod `p`.
//!
//! On top of that sits a data-driven catalog of congruence identities
//! ([`identities`]) and the numerical experiments around the two known
//! Wieferich primes ([`scanner`]).
//!
//! The crate is `no_std` (with `alloc`); IO, parallel drivers, and the CLI
//! live in the companion `fqsums-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod hsums;
pub mod identities;
pub mod modmath;
pub mod quotients;
pub mod scanner;

pub use hsums::{eval_naive, eval_sum, PrefixTables, SumSpec, SumVariant};
pub use identities::{Catalog, ExpansionLimits, Identity, Status, VerificationRecord};
pub use modmath::{ModContext, Residue};
