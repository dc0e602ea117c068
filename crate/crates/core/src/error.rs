use thiserror::Error;

/// Errors surfaced by kernel construction, windowing, operator evaluation and
/// the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// The sampled symmetry residual of a sigmoid exceeded the admission
    /// threshold, so no bell kernel can be built from it.
    #[error("activation is not symmetric: max |d(s)+d(-s)-1| = {residual:.3e} at s = {at}")]
    AsymmetricActivation { residual: f64, at: f64 },

    /// `ceil(n log a) > floor(n log b)`: no sample node lands inside `[a, b]`.
    #[error("empty index window for [a, b] = [{a}, {b}] with n = {n}; raise n")]
    EmptyWindow { a: f64, b: f64, n: u32 },

    /// The self-normalizing denominator dropped below the kernel value at `e`,
    /// which a valid kernel cannot do.
    #[error("degenerate weight denominator {denominator:.3e} < kernel value at e {value_at_e:.3e} (z = {z})")]
    DegenerateDenominator {
        denominator: f64,
        value_at_e: f64,
        z: f64,
    },

    /// A sample value left `[0, 1]` while the strict range policy was active.
    #[error("sample value {value} at z = {z} lies outside [0, 1] under the strict range policy")]
    RangeViolation { value: f64, z: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Grid-point evaluation failure with the offending index attached.
    #[error("grid point {index} (z = {z}): {source}")]
    AtGridPoint {
        index: usize,
        z: f64,
        #[source]
        source: Box<Error>,
    },

    /// Luxemburg norm bracketing failed to cross the unit modular level.
    #[error("modular bracket did not converge after {iterations} doublings")]
    BracketFailure { iterations: u32 },

    #[error("expression parse error at position {position}: {message}")]
    ExpressionParse { position: usize, message: String },

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
