//! Extended multi-segments and local Arthur packets for metaplectic groups.
//!
//! Cuspidal representations are opaque labels, A-parameters are multisets of
//! Jordan blocks over a label inventory, and packet members are named by
//! extended multi-segments. All arithmetic is exact.

pub mod adams;
pub mod cli;
pub mod corpus;
pub mod discrete;
pub mod error;
pub mod format;
pub mod half;
pub mod inventory;
pub mod nonvanish;
pub mod packets;
pub mod param;
pub mod sign;
pub mod suites;
pub mod xms;

pub use error::{Error, ErrorKind, Result};
pub use half::HalfInteger;
pub use inventory::{CuspidalLabel, DualityType, Inventory, Rho};
pub use param::{AParameter, GroupSide, JordanBlock, SignMap};
pub use sign::Sign;
pub use xms::{ExtendedSegment, Xms};
