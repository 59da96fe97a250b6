//! Numerical library for the theta-kernel representation of the modulus of
//! the Riemann xi function, the coefficient families derived from it, and
//! positivity / root-count / discriminant scans of the associated even
//! polynomials.
//!
//! Layering, bottom up:
//!
//! - [`theta`]: the Jacobi theta kernel psi with provable truncation bounds;
//! - [`quadrature`]: adaptive Gauss-Kronrod integration (finite,
//!   semi-infinite, whole-line), vector-valued so integrands can share
//!   expensive point evaluations;
//! - [`moments`]: every tau-dependent integral consumed downstream;
//! - [`xi`]: direct evaluation of xi and of the modulus surface, the
//!   moment-side reconstruction, and the closed-form tau-derivative;
//! - [`coeffs`]: the coefficient families and the even polynomials built
//!   from a moment table;
//! - [`polyalg`]: exact rational polynomial algebra (Sturm, Hermite
//!   signature, subresultant discriminants, positivity minima);
//! - [`scan`]: grid sweeps, verification suites, the moment cache and the
//!   report formats behind the CLI.

pub mod coeffs;
pub mod error;
pub mod moments;
pub mod polyalg;
pub mod quadrature;
pub mod xi;
pub mod scan;
pub mod theta;

pub use error::{Error, Result};
