//! Command-line front end: scenario files, reports and the bundled corpus.

pub mod commands;
pub mod corpus;
pub mod report;
pub mod scenario;
