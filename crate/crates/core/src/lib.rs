//! Higher-order Schwarzian derivatives of normalized univalent functions,
//! weighted Bergman and growth-space norms, and two-sided bounds for the
//! multiplier norm of the Koebe Schwarzians `S_κ^{[p,q]}` acting from
//! `A²_α` to `A²_{α+2p+2q}`.
//!
//! The crate is split by concern:
//!
//! * [`exactcore`] — exact rational combinatorics and every closed-form constant.
//! * [`series`] — truncated one- and two-variable Taylor series over an exact
//!   or a floating scalar.
//! * [`schwarzian`] — the function catalog, `F(z,w)`, Grunsky coefficients,
//!   `S_f^{[p,q]}` and the Koebe closed form.
//! * [`norms`] — Bergman norms, the test-family asymptotics, growth norms.
//! * [`multiplier`] — Rayleigh-quotient lower bounds and exact upper bounds.

pub mod error;
pub mod exactcore;
pub mod gamma;
pub mod multiplier;
pub mod norms;
pub mod quad;
pub mod schwarzian;
pub mod series;
pub mod sum;

pub use error::{Error, Result};
pub use exactcore::{ExactScalar, RationalPoly};
pub use multiplier::{BoundReport, MultiplierProblem};
pub use schwarzian::{FunctionSpec, GrunskyTable, KoebeClosedForm};
pub use series::{BiSeries, Coeff, UniSeries};

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
