//! Renormalization of weakly nonlinear second-order difference equations.
//!
//! The crate works with schemes of the form
//!
//! ```text
//! z(n+1) - (2 - dt^2) z(n) + z(n-1) = dt^2 * eps * f(z(n+1), z(n), z(n-1))
//! ```
//!
//! and provides, bottom-up:
//!
//! * [`newton`]: forward differences, Newton-Maclaurin partial sums and the
//!   two-scale envelope expansion used to derive renormalization equations.
//! * [`linear`]: characteristic roots, harmonic sums and particular solutions
//!   of the linear scheme, including resonant (secular) forcing.
//! * [`perturbation`]: zeroth- and first-order solutions for the cubic
//!   (Duffing-type) and Van der Pol-type nonlinearities.
//! * [`renormalization`]: discrete amplitude flows and their continuum limits.
//! * [`asymptotic`]: the secular-free global solutions.
//! * [`oracle`]: brute-force iteration of the nonlinear schemes.
//! * [`analysis`]: error profiles, zero-crossing periods and envelopes.
//! * [`experiment`]: configuration and pipelines behind the `renorm` binary.

// negated comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod asymptotic;
pub mod error;
pub mod experiment;
pub mod linear;
pub mod newton;
pub mod oracle;
pub mod perturbation;
pub mod renormalization;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use analysis::{compare, envelope, zero_crossing_period, ErrorProfile, PeriodEstimate};
pub use asymptotic::GlobalSolution;
pub use linear::{characteristic_roots, HarmonicSum, HarmonicTerm, RootConvention, SchemeParams};
pub use oracle::{init_from_amplitude, iterate, iterate_mickens, Trajectory};
pub use perturbation::{AmplitudePair, NaiveSolution, NonlinearityKind, SecularReport};
pub use renormalization::{DiscreteAmplitudeFlow, KappaConvention};
