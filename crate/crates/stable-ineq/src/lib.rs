//! Numerical toolkit for time-changed symmetric α-stable processes on ℝ.
//!
//! A time change of the symmetric α-stable process by a positive weight
//! `a(x)` produces a Markov process that is reversible with respect to
//! `μ(dx) = a(x)^{-1} dx`. Whether that process satisfies a Poincaré,
//! log-Sobolev, Nash or super-Poincaré inequality is decided entirely by
//! the tails of μ — each inequality has an explicit criterion of the form
//! "a tail functional is finite" (or decays). This crate makes those
//! criteria executable:
//!
//! * [`special`] — gamma function and the constant set (C_α, c_α, ω_α, κ, K_α);
//! * [`measure`] — weights a(x), the reversible measure and its tail functionals;
//! * [`green`] — the closed-form Green function of the process killed on
//!   [-n, n], its scaling, the Green operator and property verifiers;
//! * [`orlicz`] — N-functions, complementary pairs, gauge/Orlicz norms and δ(Φ);
//! * [`criteria`] — the criterion table as a classifier, constant bounds and
//!   the super-Poincaré rate function β(r);
//! * [`nonlocal`] — principal-value fractional Laplacian, Dirichlet and part
//!   forms, the operator symmetry test and the Hardy-Rellich verifier;
//! * [`simulate`] — stable increments, the Euler scheme for dY = σ(Y⁻)dX and
//!   Monte Carlo diagnostics;
//! * [`suites`] — seeded randomized property suites driven by the CLI and the
//!   acceptance tests.
//!
//! The narrative guide lives in `book/` and its code blocks are compiled as
//! doc-tests through the [`guide`] module.

pub mod error;
pub mod quad;
pub mod criteria;
pub mod green;
pub mod measure;
pub mod nonlocal;
pub mod orlicz;
pub mod simulate;
pub mod special;
pub mod suites;

pub use error::{Error, Result};
pub use special::{constants, gamma, ConstantSet, StableIndex};
