pub mod cli;
pub mod config;
pub mod dataio;
pub mod error;
pub mod json;
pub mod parallel;
pub mod svg;
