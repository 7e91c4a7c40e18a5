//! Experiment configuration, runners, and result emission for the `qnn`
//! command-line tool.

pub mod config;
pub mod experiments;
pub mod output;
