//! Exact computation of crystal bases and global (canonical-type) bases for
//! two-parameter quantum algebras at desk scale.
//!
//! The crate is organized around the pipeline
//!
//! - [`scalar`]: the coefficient field Q(v, t^{1/D}) with exact arithmetic,
//!   the bar and star involutions, evaluation at v = 0 and subring tests
//! - [`cartan`]: Lambda-matrix Cartan data, pairings, weights
//! - [`halfalg`]: the negative half on free words, its polarization, and
//!   weight spaces as Gram-kernel quotients
//! - [`modules`]: integrable highest-weight modules, tensor products, the
//!   contravariant form and the projection from the half
//! - [`crystal`]: crystal lattices and graphs for modules and for the half
//! - [`global`]: integral monomial slices and the bar-invariant triangular
//!   solve for global basis elements, plus the t = 1 comparison
//! - [`oneparam`]: an independent one-parameter canonical-basis solver used
//!   as the comparison oracle
//! - [`oracle`]: classical dimension oracles (Kostant partitions,
//!   Freudenthal multiplicities)

pub mod cartan;
pub mod check;
pub mod crystal;
pub mod error;
pub mod global;
pub mod halfalg;
pub mod linalg;
pub mod modules;
pub mod oneparam;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
