//! Numerical toolkit for hyperbolic (alpha-concave) measures.
//!
//! The crate makes the convexity hierarchy of measures computable at desk
//! scale in R^n:
//!
//! - [`alpha`]: concavity-parameter arithmetic and generalized power means;
//! - [`needle`]: one-dimensional alpha-concave measures on segments with
//!   affine-power densities, the extreme points of localization;
//! - [`measures`]: canonical alpha-concave measure models (uniform on
//!   convex bodies, Gaussian, Cauchy, Student paths) with samplers and
//!   density concavity checks;
//! - [`sets`] and [`dilation`]: Borel set oracles, line-restricted
//!   measures, and the segment-dilation operator with its exact
//!   one-dimensional and symmetric-convex families;
//! - [`localization`]: the bisection procedure that shrinks a convex body
//!   to a needle while balancing a test integral;
//! - [`deviation`]: closed-form concentration machinery (rate function,
//!   modulus of regularity, large/small deviation and norm tail bounds);
//! - [`cli`]: a batch verification harness behind the `hypmeas` binary.

pub mod alpha;
pub mod catalog;
pub mod cli;
pub mod deviation;
pub mod dilation;
pub mod error;
pub mod linalg;
pub mod localization;
pub mod measures;
pub mod needle;
pub mod polygon;
pub mod polytope;
pub mod quad;
pub mod report;
pub mod sets;
pub mod stats;

pub use alpha::{alpha_from_beta, beta_from_alpha, generalized_mean, power_mean, AlphaParam, ExtReal};
pub use error::{Error, Result};
