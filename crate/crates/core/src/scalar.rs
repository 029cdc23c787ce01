use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar used by the numeric modules.
pub trait Real: Float + FromPrimitive + NumAssign + Debug + Default + Send + Sync + 'static {
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
