//! Orthogonal polynomial systems from moment functionals, generalized
//! derivative and raising operators, and verification machinery for the
//! umbral classical property.
//!
//! The crate is organized around one question: given a moment functional
//! `sigma` (through its moments `g_n`) and a generalized derivative `D` with
//! `D x^n = mu_n x^{n-1}`, are the rescaled derived polynomials
//! `Q_n = D P_{n+1} / mu_{n+1}` again orthogonal with respect to some
//! functional `tau`? Modules:
//!
//! * [`scalar`]: exact rational / complex float arithmetic behind one trait.
//! * [`poly`], [`linalg`]: dense polynomials and tiny-matrix elimination.
//! * [`moments`]: lazily extended moment sequences, bilinear forms, Hankel
//!   determinants.
//! * [`orthopoly`]: monic orthogonal systems from moments or recurrence
//!   coefficients, Gram checks.
//! * [`umbral`]: the derivative `D`, the raising operator `R`, and the
//!   verification of the defining moment identities.
//! * [`recurrence`]: structure analysis: minimal linear recurrences for
//!   `mu_n`, profile normalization, polynomial-factor (Christoffel-type)
//!   relations between functionals.
//! * [`families`]: ready-made classical, q-classical, Krall-type and Dunkl
//!   generators.
//! * [`elliptic`]: Weierstrass sigma evaluation and the degenerate
//!   (nonlocal) case built from sigma quotients, with its product-formula
//!   recurrence and terminating series solutions.
//! * [`report`], [`io`]: JSON/CSV boundary types shared with the CLI.
//!
//! All numeric code is generic over [`scalar::Field`]; exact mode never
//! consults a tolerance, float mode threads one everywhere a rank or zero
//! decision is made.

// Matrix and series code here runs on shifted index arithmetic
// (`g[n + k]`, `mu[n - i]`), where an explicit index reads better than a
// zipped iterator chain.
#![allow(clippy::needless_range_loop)]

pub mod elliptic;
pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod moments;
pub mod orthopoly;
mod par;
pub mod poly;
pub mod recurrence;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod umbral;

pub use error::{Error, Result};
pub use moments::MomentSequence;
pub use orthopoly::MonicPolySystem;
pub use poly::Polynomial;
pub use scalar::{scalar_eq, Field, Scalar, Tolerance};
pub use umbral::{RaisingOperator, UmbralDerivative};
