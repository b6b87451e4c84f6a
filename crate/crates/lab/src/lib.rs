//! Verification harness for `orbit-core`: seeded instance generation,
//! JSON formats, the normalization ledger, the rank-one transfer
//! construction, identity suites and the `orbit-lab` CLI.

pub mod cli;
pub mod gen;
pub mod json;
pub mod ledger;
pub mod oracles;
pub mod report;
pub mod suites;
pub mod transfer;
