//! Function-correcting partition codes over GF(q).
//!
//! A (P,t)-encoding protects the block of a partition `P` of F_q^k: codewords
//! of messages in different blocks are at Hamming distance at least `2t+1`.
//! This crate builds partitions, computes their distance requirements, finds
//! cliques and block-preserving contractions, searches for shortest
//! irregular-distance codes and assembles verified systematic encoders.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod codec;
pub mod contraction;
pub mod dcode;
pub mod error;
pub mod gf;
pub mod metrics;
pub mod partitions;
pub mod pgraph;
pub mod word;

pub use error::{Error, Result};
pub use gf::Field;
pub use word::{hamming_distance, Space, Word};
