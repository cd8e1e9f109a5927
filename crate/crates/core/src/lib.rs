//! Tubular surfaces around space curves, their focal surfaces, and the
//! differential-geometry machinery needed to evaluate and verify them.
//!
//! Everything is exact-derivative: curves are closed-form expressions that
//! are evaluated on truncated Taylor jets, so curvature, torsion and the
//! fundamental forms carry no truncation error. A finite-difference path
//! that only touches plain `f64` evaluation serves as the independent check.

#![no_std]
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::excessive_precision,
    clippy::too_many_arguments,
    clippy::large_enum_variant
)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exprcurve;
pub mod framekit;
pub mod jet;
pub mod surfkit;
pub mod tol;
pub mod tubefocal;
pub mod vec3;

pub use error::{Error, OdeRow, ParseError, Result};
pub use jet::{compose_taylor, Jet, Jet3, Scalar};
pub use tol::Tolerances;
pub use vec3::{triple, Vec3};
