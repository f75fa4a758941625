//! Certificate-producing proof search for sequenceability of subsets of
//! abelian groups, with exact linear algebra, coefficient extraction for the
//! polynomial route, brute-force group oracles and checkable transcripts.

pub mod cli;
pub mod compression;
pub mod driver;
pub mod error;
pub mod linalg;
pub mod nullstellensatz;
pub mod oracle;
pub mod search;
pub mod transcript;

pub use error::{Error, Result};
