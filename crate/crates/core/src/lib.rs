//! Theta summation of the geometric series `Σ zⁿ`.
//!
//! For every `ε > 0` the regularized sum
//!
//! ```text
//! f_ε(z) = Σ_{n ≥ 0} e^{-ε n²} zⁿ
//! ```
//!
//! is an entire function of `z`. As `ε → 0⁺` it tends to `1/(1 − z)` exactly on the
//! interior `𝒢` of the heart-shaped curve `e^{|t| + it}, t ∈ [−π, π]`, and
//! `limsup |f_ε(z)| = ∞` everywhere else.
//!
//! The crate evaluates `f_ε` by three independent routes:
//!
//! - [`summation::eval_direct`]: certified truncation of the power series, with a guard
//!   that refuses when cancellation would destroy the result;
//! - [`thetadual::eval_dual_f`]: the Jacobi/Poisson dual series, stable for `|z| > 1`
//!   at any `ε`;
//! - [`continuation::eval_contour`]: the two rotated-ray Gaussian integrals, valid on `𝒢`.
//!
//! [`geometry`] classifies points against `𝒢` both by the closed form `r < e^{|φ|}` and
//! through the dual-plane index sets of [`thetadual`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuation;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod quadrature;
pub mod summation;
pub mod thetadual;

pub use error::{Result, ThetaError};
pub use numerics::ComplexValue;
pub use summation::{EvalResult, EvalStrategy, SummingMethod, TruncationPolicy};
