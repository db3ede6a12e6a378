//! Symbolic-numeric toolkit for Borel-Laplace summation of 1-Gevrey
//! divergent series, alien calculus on simple singularities, and the
//! classification invariants of simple parabolic germs.
//!
//! The crate is organized around a small set of carriers: truncated formal
//! series in `z^-1` ([`formal::FormalSeries`]), their Borel transforms
//! ([`borel::BorelFunction`]), evaluators for the analytic continuation of
//! minors ([`minors::Minor`]), and directional Laplace quadrature
//! ([`laplace`]). Worked examples live in a name-keyed catalog
//! ([`classics`]); alien operators and Stokes data in [`alien`];
//! parabolic-germ pipelines in [`parabolic`]; the nonlinear ODE machinery in
//! [`ode`].

pub mod error;
pub mod exact;
pub mod coeff;
pub mod formal;
pub mod diffeo;
pub mod borel;
pub mod quad;
pub mod minors;
pub mod laplace;
pub mod oracles;
pub mod classics;
pub mod alien;
pub mod parabolic;
pub mod ode;
pub mod acceptance;

pub use error::{Error, Result};
