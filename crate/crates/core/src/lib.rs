//! Function approximation with truncated Taylor polynomials in high
//! arithmetic precision.
//!
//! A handful of samples `f_i = f(x_i)` determine the coefficients of
//! `f(x) ≈ a_0 + a_1 x + … + a_{n-1} x^{n-1}` through the Vandermonde system
//! `f = V a`. Once `a` is known the same polynomial interpolates, extrapolates
//! (with a span predicted by the root test), differentiates and integrates.
//! Stacking derivative rows of `V` turns linear differential equations into
//! square collocation systems, in one or two dimensions, and the fitted
//! derivatives identify linear differential laws from data.
//!
//! Everything runs on MPFR floats at a caller-chosen mantissa width; the
//! [`hpnum::Context`] passed to each routine fixes that width.
//!
//! ```
//! use hap_taylor::{fit1d, hpnum::Context, vandermonde::NodeSet};
//!
//! let ctx = Context::new(200)?;
//! let nodes = NodeSet::new(vec![ctx.int(0), ctx.int(1), ctx.int(2)])?;
//! let values = vec![ctx.int(0), ctx.int(1), ctx.int(4)];
//! let poly = fit1d::fit(&ctx, &fit1d::SampleSet1D::new(nodes, values)?)?;
//! assert_eq!(poly.evaluate(&ctx, &ctx.int(3)), 9);
//! # Ok::<(), hap_taylor::Error>(())
//! ```

pub mod basis2d;
pub mod calculus;
pub mod experiments;
pub mod fit1d;
pub mod hpnum;
pub mod io;
pub mod linalg;
pub mod odebvp;
pub mod sysid;
pub mod taylor1d;
pub mod vandermonde;

pub use hpnum::{BigReal, Context};
pub use linalg::Matrix;
pub use taylor1d::TaylorPoly1D;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("precision of {bits} bits is below the 24-bit minimum")]
    InvalidPrecision { bits: u32 },
    #[error("not a decimal number: {input:?}")]
    Parse { input: String },
    #[error("{function} is undefined at {argument}")]
    Domain { function: &'static str, argument: String },
    #[error("invalid node set: {0}")]
    InvalidNodeSet(String),
    #[error("singular system in {context} (zero pivot at step {step})")]
    Singular { step: usize, context: &'static str },
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize, what: &'static str },
    #[error("derivative order {order} needs more than {terms} coefficients")]
    DegenerateOperator { order: usize, terms: usize },
    #[error("unsupported integral order {0} (only 1 and 2)")]
    UnsupportedOrder(usize),
    #[error("radius of convergence undefined: every coefficient is below the underflow floor")]
    UndefinedRadius,
    #[error("operator weights are unidentifiable: {0}")]
    Unidentifiable(String),
    #[error("reconstruction undefined: b001 is zero")]
    ReconstructionUndefined,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Guide chapters compiled as doc-tests so their snippets stay in sync.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/precision.md")]
    pub mod precision {}
    #[doc = include_str!("../../../book/src/vandermonde.md")]
    pub mod vandermonde {}
    #[doc = include_str!("../../../book/src/taylor.md")]
    pub mod taylor {}
    #[doc = include_str!("../../../book/src/calculus.md")]
    pub mod calculus {}
    #[doc = include_str!("../../../book/src/ode.md")]
    pub mod ode {}
    #[doc = include_str!("../../../book/src/plate.md")]
    pub mod plate {}
    #[doc = include_str!("../../../book/src/sysid.md")]
    pub mod sysid {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
