//! Library side of `rees-kit`: commands, reports and the suite runner.

pub mod commands;
pub mod report;
pub mod suite;
