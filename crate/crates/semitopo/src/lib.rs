//! JSON interchange formats and the `semitopo` command-line tool, on top of
//! [`semitopo_core`].

pub mod cli;
pub mod io;

pub use semitopo_core as core;
