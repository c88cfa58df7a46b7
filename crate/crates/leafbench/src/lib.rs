//! IO, configuration, batch running, timing, and report emission for the
//! leaf image enhancement benchmark. The pure kernels live in
//! [`leafbench_core`].

pub mod bench;
pub mod config;
pub mod corpus;
pub mod io;
pub mod report;
pub mod runner;
pub mod synth;
