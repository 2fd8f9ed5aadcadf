//! Floating-point types usable for similarities, weights and marks.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

pub trait Score: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Slack allowed when comparing accumulated marks with band thresholds.
    fn tolerance() -> Self;

    /// `num / den`, rounded once. Ratios of small integers computed this way
    /// compare equal to the decimal literal they denote (4/5 == 0.8).
    fn ratio(num: usize, den: usize) -> Self {
        Self::from_usize(num).expect("count fits the float type")
            / Self::from_usize(den).expect("count fits the float type")
    }

    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }
}

impl Score for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

impl Score for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}
