//! Exact symbolic toolkit for pencils of Enriques surfaces.
//!
//! The crate reconstructs and machine-verifies the computable content of a
//! construction of a smooth threefold, fibered in Enriques surfaces over the
//! projective line, whose degree-four integral Hodge classes are not all
//! algebraic.  It provides:
//!
//! - [`chow`]: exact Chow rings of multiprojective spaces and projective
//!   bundles, with integration of top-degree classes;
//! - [`charclass`]: Chern/Segre/Todd calculus, Thom-Porteous degeneracy
//!   classes, Euler characteristics via Hirzebruch-Riemann-Roch, and
//!   line-bundle cohomology tables on products of projective spaces;
//! - [`mpoly`]: sparse multigraded polynomial arithmetic over the rationals
//!   and prime fields, with matrices, minors and seeded sampling of general
//!   forms;
//! - [`groebner`]: a Buchberger engine over prime fields with point counting
//!   by affine cells, radicality tests and chart-wise Jacobian smoothness
//!   certificates;
//! - [`paperlab`]: the end-to-end verification suite that instantiates the
//!   construction, runs every check, and assembles a report separating
//!   machine-verified facts from cited topological inputs;
//! - [`cli`]: a small query language for the intersection-theory surface and
//!   the `verify`/`query`/`instance` command-line front end.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod charclass;
pub mod chow;
pub mod cli;
pub mod groebner;
pub mod mpoly;
pub mod paperlab;

pub use charclass::{BundleExpr, CohomTable, CompleteIntersection};
pub use chow::{ChowClass, ChowRing};
pub use groebner::{CellDecomposition, GroebnerBasis};
pub use mpoly::{MPoly, PolyMatrix, PolyRing};
pub use paperlab::{PaperInstance, VerificationReport};
