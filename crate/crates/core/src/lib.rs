//! Linear-amplifier model of a driven cavity optomechanical system.
//!
//! The linearized dynamics of the cavity quadratures (a+, a-) and the
//! mechanical quadratures (z, p) form a four-dimensional linear system
//! driven by port inputs. This crate computes its frequency response
//! (intracavity and at the output ports), symmetrized noise spectra
//! (squeezing, transparency, thermal, and force-driven), and
//! quantum-limited force-sensing optima, and cross-checks everything
//! against a time-domain stochastic integrator.
//!
//! All rates are in units of the cavity amplitude decay rate kappa.

pub mod config;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod oracle;
pub mod output;
pub mod params;
pub mod presets;
pub mod response;
pub mod sensing;
pub mod spectra;

pub use error::{Error, Result};
pub use params::{DerivedParams, PortSplit, SystemParams};
