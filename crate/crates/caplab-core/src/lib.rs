//! Exact and high-precision computations around cap-set upper bounds.
//!
//! The crate is organized around one pipeline:
//!
//! * [`coeff`] — exact big-integer coefficient tables of (1+x+...+x^(q-1))^n
//!   and their prefix sums;
//! * [`saddle`] — the critical radius of (1+x+...+x^(q-1))/x^alpha, the
//!   leading-order coefficient asymptotics, and a contour-integral oracle;
//! * [`lp`] — the triple-cover linear program over exact rationals, its
//!   simplex solver with duality certificates, the closed-form candidate
//!   solutions, and an exhaustive vertex enumerator;
//! * [`ledger`] — exact finite-n verification of the tail-zeroing
//!   inequalities plus their printed limiting constants;
//! * [`bounds`] — assembly of the final bound constants and comparison
//!   tables;
//! * [`capsearch`] — exhaustive branch-and-bound for the maximum cap size in
//!   dimension up to four, anchoring the bounds from below.
//!
//! All rationals are exact (`num-rational`), all integer data is exact
//! (`num-bigint`), and everything continuous runs at a configurable binary
//! precision ([`hp::RunPrecision`], default 128 bits).

pub mod bounds;
pub mod capsearch;
pub mod coeff;
pub mod hp;
pub mod ledger;
pub mod lp;
pub mod saddle;

pub use hp::{Real, RunPrecision, DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS};
