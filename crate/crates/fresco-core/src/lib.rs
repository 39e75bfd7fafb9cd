//! Exact computations with (a,b)-modules realized inside spaces of log-asymptotic expansions.
//!
//! Elements live in [`xi`], operators of `B[a]` in [`ops`], submodules and their Bernstein data
//! in [`module`], one-generator modules in [`fresco`] and pole predictions in [`poles`].

pub mod echelon;
pub mod error;
pub mod frame;
pub mod fresco;
pub mod matrix;
pub mod module;
pub mod ops;
pub mod poles;
pub mod poly;
pub mod rational;
pub mod xi;

pub use error::{FrescoError, Result};
pub use poly::RationalPolynomial;
pub use rational::Q;
pub use xi::{Ambient, ExponentClass, Gen, LogMonomial, XiElement};
