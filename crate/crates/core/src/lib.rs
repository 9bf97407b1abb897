//! Exact and numerical verification toolkit for cocalibrated G2-structures
//! whose characteristic connection is Ricci-flat.
//!
//! * [`multilinear`]: exterior algebra with exact rational coefficients.
//! * [`spin7`]: the real spin representation and Clifford actions.
//! * [`g2`]: the standard G2 3-form, `Λ³` splitting, characteristic torsion.
//! * [`liegroup`]: invariant geometry on Lie groups.
//! * [`classifier`]: the eigen-torsion family and its case analysis.
//! * [`numgeom`]: floating-point Cartan-frame curvature and the bundle construction.
//! * [`pipeline`]: end-to-end report for a 7-dimensional Lie algebra.

pub mod check;
pub mod classifier;
pub mod error;
pub mod g2;
pub mod liegroup;
pub mod linalg;
pub mod multilinear;
pub mod numgeom;
pub mod pipeline;
pub mod scalar;
pub mod spin7;

pub use check::Check;
pub use classifier::{Classifier, EigenTriple, Torsion27Family};
pub use error::{Error, ParseError, Result};
pub use g2::{G2Structure, TorsionDecomposition};
pub use liegroup::{InvariantConnection, LieAlgebraData};
pub use linalg::{QMatrix, Spectrum};
pub use multilinear::{Form, FrameSignature};
pub use pipeline::G2Report;
pub use scalar::Scalar;
pub use spin7::{CliffordRep, Spinor};
