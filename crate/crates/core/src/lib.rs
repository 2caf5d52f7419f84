//! Dual-band (24/60 GHz) distributed 2x2 MIMO beam-scanning channel sounder
//! emulator with ISAC channel characterization.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod characterization;
pub mod error;
pub mod pipeline;
pub mod registration;
pub mod scenario;
pub mod scene;
pub mod sounder;

pub use error::{Error, Result};
