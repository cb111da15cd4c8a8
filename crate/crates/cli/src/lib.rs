//! Command-line front end for `afcond`: the problem-file format, reports,
//! commands and corpus runs.

pub mod commands;
pub mod corpus;
pub mod problem;
pub mod report;
