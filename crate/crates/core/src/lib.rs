//! Near-field sensing with wideband MIMO-OFDM arrays.
//!
//! The crate simulates echoes from a single point target seen by a uniform
//! linear or circular array, estimates its angle and distance by maximum
//! likelihood, and evaluates Cramér-Rao bounds three ways: from the full
//! Fisher information, from reduced discrete sums, and from closed-form and
//! asymptotic expressions.

// Guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod crb;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod mle;
pub mod scenario;
pub mod signal;

pub use error::{Error, Result};
pub use geometry::{ArrayGeometry, ArrayKind, FieldRegion, TargetLocation};
pub use scenario::Scenario;
pub use signal::{ChannelModel, OfdmConfig, SignalFrame};
