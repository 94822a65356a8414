//! Support code for the `pgonal` binary: result records, the on-disk cache,
//! and argument parsers.

pub mod cache;
pub mod parse;
pub mod record;
