//! Documents, sharded counting and the command-line front end.

pub mod cmd;
pub mod doc;
pub mod shard;

pub use cmd::{run, Outcome};
