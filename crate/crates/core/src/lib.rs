//! Wegman-Carter message authentication with one-time-pad tags and a
//! recycled hash key, together with exact, enumeration-based checks of its
//! security parameters.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] and [`hashfam`]: GF(2^m) arithmetic, keyed hash families and
//!   exact measurement of their XOR-universal / strongly-universal epsilon.
//! * [`wcauth`]: the authentication protocol itself and pad bookkeeping.
//! * [`dist`] and [`ucsim`]: exact real-world vs ideal-world executions and
//!   their statistical distance, including the worst-case environment.
//! * [`attack`]: the multi-round list-elimination forgery and the leakage of
//!   the recycled key.
//! * [`compose`]: error ledgers for many rounds of authentication layered
//!   with an idealised key-distribution step.

pub mod attack;
pub mod compose;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod field;
pub mod hashfam;
pub mod ratio;
pub mod ucsim;
pub mod wcauth;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
pub use hashfam::{Budget, HashFamily};
pub use ratio::Ratio;
