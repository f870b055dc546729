use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("sample count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("half-width must be positive and finite, got {0}")]
    BadHalfWidth(f64),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("invalid interval [{a}, {b}): left endpoint must be below right endpoint")]
    EmptyInterval { a: f64, b: f64 },
    #[error("frequency {0} is not on the frequency grid")]
    OffGrid(f64),
    #[error("interval [{a}, {b}) exceeds the Nyquist band (nyquist {nyquist})")]
    Aliasing { a: f64, b: f64, nyquist: f64 },
    #[error("grids do not match: {0}")]
    GridMismatch(String),
    #[error("scale 2^-{nu} is finer than the grid resolution")]
    ScaleTooFine { nu: i32 },
    #[error("points must be strictly increasing (violated at index {0})")]
    UnsortedPoints(usize),
    #[error("need at least {need} items, got {got}")]
    TooFew { need: usize, got: usize },
    #[error("exponent range [{lo}, {hi}] cannot be represented exactly")]
    ExponentOverflow { lo: i32, hi: i32 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("enumeration produced no points")]
    EmptyResult,
    #[error("quadrature refinement error {err:.3e} exceeds {tol:.1e}")]
    Refinement { err: f64, tol: f64 },
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

pub type Result<T> = core::result::Result<T, Error>;
