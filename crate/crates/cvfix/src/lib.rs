//! File formats, name grammars and the command-line front end for
//! [`cvfix_core`].

pub mod cli;
pub mod formats;
pub mod names;
