//! Library surface of the command-line front end, exposed so integration
//! tests can drive the parser and pipeline directly.

pub mod input;
pub mod pipeline;
pub mod report;
