//! Explicit uniform bounds for solutions dominated by an exploding majorant
//! off a hyperplane, from three-balls or wild-set certificates.
//!
//! Pipeline: a [`Majorant`] is reduced to its distribution function, a
//! certificate fixes the growth rate of the iteration, and the bound engine
//! returns a double-exponential [`Tower`]. The [`lab`] module checks all of
//! this against discrete harmonic functions.

pub mod bound;
pub mod certificates;
pub mod error;
pub mod lab;
pub mod majorant;
pub mod serde_ext;
mod special;

pub use bound::{bound_case_a, bound_case_b, BoundReport, Case, Tower};
pub use certificates::{Certificate, ThreeBallsCertificate, WildSetCertificate};
pub use error::{Error, Result};
pub use majorant::{DistributionFunction, Majorant};
