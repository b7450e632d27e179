//! Causal reasoning over structural equations models and their
//! generalization to explicit outcome maps.

pub mod core;
pub mod decide;
pub mod lang;
pub mod model;
pub mod proof;
pub mod properties;
pub mod axioms;
pub mod semantics;
