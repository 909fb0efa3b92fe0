//! Exact engine for quantum generalized cluster algebras: quantum torus
//! arithmetic, generalized mutations of quantum Y-seeds, quantum dilogarithms
//! of higher degrees, and mechanical verification of the attached identities
//! at a configurable truncation order, with a floating-point side module for
//! the analytic layer.

pub mod analytic;
pub mod coeff;
pub mod dilog;
pub mod error;
pub mod example;
pub mod expr;
pub mod identity;
pub mod mutation;
mod qpoly;
pub mod series;
pub mod torus;
pub mod tropical;

pub use coeff::{Coeff, ZMonomial, ZVar};
pub use dilog::{psi_coefficients, psi_of, PsiCoefficients, PsiSpec};
pub use error::{Error, Result};
pub use identity::{run_report, MutationSequence, VerificationReport};
pub use mutation::QuantumSeed;
pub use series::ConeSeries;
pub use torus::{Algebra, ExchangeData, Exponent, IntMatrix, Sign, TorusElement, ZValue};
pub use tropical::TropicalState;
