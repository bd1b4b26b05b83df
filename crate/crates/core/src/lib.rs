//! Exact computer algebra for the first Weyl algebra `A1 = K[x][D]`, `Dx - xD = 1`,
//! over `K = Q` or `Q[a]` with a free parameter `a`.
//!
//! * [`scalars`]: rationals, `Q[a]`, its fraction field, exact linear algebra.
//! * [`weyl`]: operators in normal form `sum c x^i D^j`.
//! * [`polygon`]: weights, Newton polygons, top parts and Poisson brackets.
//! * [`morphism`]: substitutions, tame automorphisms, rectangularization.
//! * [`psido`]: truncated pseudo-differential operators and Schur normalization.
//! * [`spectral`]: commuting pairs, relation finding, probes and orbit search.
//! * [`cli`]: the `weyl` command.

pub mod scalars;
pub mod weyl;
pub mod polygon;
pub mod morphism;
pub mod psido;
pub mod spectral;
pub mod cli;

/// Operators with coefficients in `Q[a]`.
pub type Op = weyl::WeylOp<scalars::ParamPoly>;
/// Operators with rational coefficients.
pub type OpQ = weyl::WeylOp<scalars::Rational>;
