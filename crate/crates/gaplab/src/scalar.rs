//! Floating-point scalar abstraction.
//!
//! Exact quantities (gap sums, hash counts) live in integers and rationals;
//! everything analog (amplitudes, probabilities, empirical rates) is generic
//! over [`Real`] with `f64` as the default via the crate-root aliases.

use num_traits::{Float, FromPrimitive};

pub trait Real: Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}
