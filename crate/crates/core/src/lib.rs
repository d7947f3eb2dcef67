#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical engine for neutral (2,2) metrics: the conformal compactification
//! of R^{2,2}, oriented line spaces of three-dimensional space forms with their
//! tangent hypersurfaces and contact structures, and intersection tori of
//! tangent hypersurfaces of round spheres.

pub mod compactification;
pub mod dual2;
pub mod error;
pub mod exec;
pub mod intersection;
pub mod io;
pub mod line_space;
pub mod spaceform;
pub mod tensor;

pub use error::{GeomError, Result};
