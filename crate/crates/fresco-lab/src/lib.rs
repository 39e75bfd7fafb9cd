//! Randomized property checks, the worked theme example and the command-line front end for
//! `fresco-core`.

pub mod cli;
pub mod input;
pub mod io;
pub mod properties;
pub mod random;
pub mod registry;
pub mod suite;
