//! Rational approximations of real algebraic numbers from powers of
//! regular-representation matrices.
//!
//! The element `x_0 + x_1 α + … + x_{m-1} α^{m-1}` of `Q(α)` acts on the
//! basis `(1, α, …, α^{m-1})` by an `m × m` rational matrix `M(x, u)`. Ratios
//! of two entries of `M^n` converge to quantities attached to the root `α_k`
//! whose weight `γ_k = Σ x_i α_k^i` dominates all others in modulus, and the
//! error decays like `(|γ_l| / |γ_k|)^n` for the runner-up `γ_l`.
//!
//! Crate layout:
//!
//! - [`polynomial`]: monic polynomials `t^m - u_1 t^{m-1} - … - u_m`, exact
//!   evaluation, reflection, Taylor shift, companion matrix.
//! - [`roots`]: certified real roots in exact interval arithmetic and
//!   all-roots approximation with inclusion radii.
//! - [`regrep`]: construction of `M(x, u)` by two independent routes.
//! - [`powers`]: exact matrix powers and approximation sequences.
//! - [`convergence`]: dominance criterion, Vandermonde limits, rates.
//! - [`iterative`]: Newton, Halley and Noor baselines in exact arithmetic.
//! - [`bench`]: reproduction harness for the published tables.

pub mod bench;
pub mod convergence;
mod error;
pub mod iterative;
pub mod matrix;
pub mod numeric;
pub mod polynomial;
pub mod powers;
pub mod regrep;
pub mod roots;

pub use error::{Error, Result};
pub use matrix::RationalMatrix;
pub use numeric::{parse_rational, Complex};
pub use polynomial::{CompanionMatrix, Polynomial};
pub use powers::{ApproximationRecord, EntryIndex, MatrixPower, SequencePoint};
pub use regrep::{RegRepMatrix, Weights};
pub use roots::{RealRoot, RootEstimate, RootSet};

/// Working precision floor used when callers do not pick one.
pub const DEFAULT_PRECISION_BITS: u32 = 256;
