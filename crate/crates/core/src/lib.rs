//! Finite effect algebras: construction, validation, structural properties,
//! compatibility and blocks, states, and discrete observables.

pub mod algebra;
pub mod blocks;
pub mod borel;
pub mod cli;
pub mod compat;
pub mod constructors;
pub mod corpus;
pub mod error;
pub mod io;
pub mod lp;
pub mod observables;
pub mod oracle;
pub mod properties;
pub mod rational;
pub mod scan;
pub mod states;

pub use algebra::{EffectAlgebra, Element};
pub use error::{Error, Result};
