//! File formats, instance generation, benchmarking and the `convexdom`
//! command line on top of [`convexdom_core`].

pub mod bench;
pub mod export;
pub mod generate;
pub mod io;
pub mod report;
pub mod run;

pub use convexdom_core as core;
