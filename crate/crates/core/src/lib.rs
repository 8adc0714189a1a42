//! Primitive elements `g` of a finite field `F_q` whose value `f(g)` under a
//! quadratic `f` is a nonzero `k`-th power.
//!
//! The crate provides exact counts of such elements, the character-sum
//! expansion of those counts, the sieve and Weil-type bounds that guarantee
//! their existence, and an exhaustive scan over all quadratics for small `q`.

pub mod arith;
pub mod bounds;
pub mod charsum;
pub mod counting;
pub mod ffield;
pub mod invariants;

pub use arith::{factorize, ArithError, Factorization};
pub use ffield::{FieldElement, FieldError, FieldOp, FieldSpec, QuadraticPoly};
