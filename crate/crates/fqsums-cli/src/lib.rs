//! IO companion to `fqsums-core`: machine-readable report writers, the
//! resumable checkpoint file, and the parallel range drivers behind the
//! `fqsums` binary.

pub mod checkpoint;
pub mod report;
pub mod runner;
