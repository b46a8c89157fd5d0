//! File formats, benchmark presets and the command-line front end for
//! [`rda_core`].

pub mod experiment;
pub mod io;

pub use rda_core;
