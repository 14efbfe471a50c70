//! Exact kernel for Rota-Baxter tree terms.
//!
//! A Rota-Baxter algebra is an associative algebra with a linear operator `P`
//! satisfying `P(x)P(y) = P(xP(y)) + P(P(x)y) + λP(xy)` for a fixed weight λ.
//! The term `T(a,b,c)` names the operator `P^c(P^a(x) · P^b(y))` — drawn as a
//! tree with `a` dots on the left leg, `b` on the right leg, `c` on the neck.
//! Repeated use of the identity rewrites any `T(a,b,c)` into a `ℤ[λ]`-linear
//! combination of trees with an empty leg: `T(0,i,j)`, `T(i,0,j)`, `T(0,0,j)`.
//!
//! The crate provides:
//!
//! - [`term`]: trees, λ-polynomial coefficients, and canonical combinations;
//! - [`rewrite`]: the three weighted moves, a memoized normal-form engine, and
//!   a deliberately naive exponential oracle;
//! - [`closed_form`]: direct generators for the normal-form coefficients
//!   (a λ-free restricted form and a generic form in two variants), plus a
//!   validator that diffs them against the rewrite oracle;
//! - [`models`]: two concrete Rota-Baxter algebras — polynomial integration
//!   (weight 0) and sequence prefix sums (weight −1) — in which any identity
//!   is checked exactly;
//! - [`latex`]: LaTeX rendering of trees, coefficients, and identities.
//!
//! All arithmetic is exact: big integers in `ℤ[λ]`, big rationals in the
//! models. Every value type is immutable once built and canonically ordered,
//! so equal values serialize to identical bytes.

mod error;

pub mod closed_form;
pub mod latex;
pub mod models;
pub mod rewrite;
pub mod term;

pub use error::Error;
pub use rewrite::{
    expand_step, neck_shift, normal_form, normal_form_naive, normal_form_naive_counted, Limits,
    Normalizer,
};
pub use term::{Combination, LambdaPoly, Tree};
