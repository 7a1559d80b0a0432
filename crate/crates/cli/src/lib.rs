//! Library surface of the decay-verification CLI, exposed for the
//! integration and acceptance suites.

pub mod config;
pub mod csvio;
pub mod fitting;
pub mod report;
pub mod runs;
