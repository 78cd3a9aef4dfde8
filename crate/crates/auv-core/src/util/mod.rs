//! Small shared utilities.

pub mod crc32;
pub mod par;
