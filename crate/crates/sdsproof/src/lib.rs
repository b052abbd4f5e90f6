pub use sdsproof_core as core;

pub mod cli;
pub mod formats;
pub mod report;
pub mod solver;
