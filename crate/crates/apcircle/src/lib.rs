//! Exact computation and empirical verification for the circle problem in
//! arithmetic progressions.
//!
//! The crate counts lattice points `u² + v² ≤ x` with `u² + v² ≡ a (mod q)`,
//! evaluates the complete exponential sums that control the remainder term
//! (Gauss, Kloosterman, and the bilinear solution-set sum `H`), reproduces the
//! sawtooth/Fourier decomposition of the count into its intermediate sums, and
//! sweeps remainder/bound ratios over parameter grids.
//!
//! Modules:
//!
//! * [`arith`]: gcd, factorization, divisor function, Jacobi symbol.
//! * [`counting`]: square-root tables mod q, `η_a(q)`, `ω_a(q)`, exact counts.
//! * [`expsums`]: Gauss/Kloosterman/H sums, closed forms, bound values.
//! * [`decomposition`]: sawtooth layer and exact identity verification.
//! * [`bounds`]: published remainder bounds and the sweep engine.
//! * [`verify`]: named property suites backing `apcircle verify` and the
//!   acceptance tests.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod counting;
pub mod decomposition;
pub mod expsums;
pub mod verify;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {q}")]
    NotCoprime { a: i64, q: u64 },
    #[error("modulus {q} must be odd")]
    EvenModulus { q: u64 },
    #[error("modulus {q} exceeds the table guard {limit}")]
    ModulusTooLarge { q: u64, limit: u64 },
    #[error("brute-force evaluation is limited to q <= {limit}, got {q}")]
    BruteTooLarge { q: u64, limit: u64 },
    #[error("input {name}={value} exceeds the guard {limit}")]
    InputTooLarge {
        name: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { estimate: f64, tolerance: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use counting::{CountResult, SqrtTable};
pub use expsums::{ComplexValue, HSumQuery};
