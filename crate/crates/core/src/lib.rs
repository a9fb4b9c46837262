//! Bicomplex and hyperbolic numerics.
//!
//! * [`scalar`]: the ring `BC` of bicomplex numbers and the hyperbolic
//!   numbers `D` with their partial order.
//! * [`module`]: the free module `BC^n` and its D-valued norms.
//! * [`sets`]: BC-convex, BC-balanced sets in finite form, and sampled
//!   property checks.
//! * [`gauge`]: hyperbolic-valued Minkowski functionals.
//! * [`seminorm`]: D-seminorms, seminorm families and the induced D-metric.
//! * [`battery`]: seeded check suites and their JSON-lines reports.

pub mod battery;
pub mod error;
pub mod expr;
pub mod gauge;
pub mod json;
pub mod module;
pub mod sampling;
pub mod scalar;
pub mod seminorm;
pub mod sets;

pub use error::{BcError, Result};
pub use module::{ComponentNorm, ModuleVector};
pub use scalar::{Bicomplex, Complex, Component, Hyperbolic};
