//! αβ-factorization of second-order linear ODEs.
//!
//! An equation `y'' + f y' + g y = 0` is read as the product `B⁻B⁺` of the
//! first-order operators
//!
//! ```text
//! B⁻ = α⁻¹ d/dt + β,    B⁺ = α d/dt + β.
//! ```
//!
//! Given one solution `h` of the Riccati equation `-z' - f z + z² + g = 0`,
//! `β = h α` and `α` solves a cubic Bernoulli equation whose linearization
//! `w = α⁻²` integrates in closed form up to a free constant `λ`. Swapping
//! the factors gives the Darboux partner
//!
//! ```text
//! y'' + (f - 2α'/α) y' + (g + β'(α - α⁻¹)) y = 0.
//! ```
//!
//! For the harmonic oscillator (`g = ω₀²`) and the upside-down oscillator
//! (`g = -k₀²`) the partners are parametric oscillators with a time dependent
//! damping ratio, nonsingular for suitable `λ`.
//!
//! Modules:
//! - [`funcs`]: time grids, cumulative Simpson quadrature, central differences.
//! - [`factorize`]: the generic numeric pipeline from a Riccati seed to the partner.
//! - [`families`]: closed forms for the trigonometric and hyperbolic cases.
//! - [`verify`]: RK4 integration, residuals, Wronskians and cross-checks.
//! - [`cli`]: the `darboux` command-line front end and CSV figure series.

pub mod cli;
pub mod error;
pub mod factorize;
pub mod families;
pub mod funcs;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;
