use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The point lies on (or within rounding distance of) a slit.
    #[error("point {re}+{im}i is on the slit based at {base} (height {height})")]
    SingularPoint { re: f64, im: f64, base: f64, height: f64 },

    /// A real point inside a collapsed slit interval was asked for without a side.
    #[error("real point {0} lies inside a collapsed slit interval; the prime end is two-sided")]
    AmbiguousPrimeEnd(f64),

    #[error("geometry error at vertex {index}: {reason}")]
    Geometry { index: usize, reason: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("half-plane capacity is undefined for a stack with non-translation pre/post maps")]
    UnsupportedNormalization,

    /// The tracer's tip came too close to the real line.
    #[error("tip collided with the real line at t = {t}; refine the time step")]
    StepSize { t: f64 },

    #[error("numerical resolution error: {0}")]
    Resolution(String),

    /// A reversal step failed. `step` is the zero-based step index.
    #[error("reversal step {step} failed: {reason}")]
    Step { step: usize, reason: String },
}
