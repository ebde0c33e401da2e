//! Exact cochain complexes of coefficient systems on interval posets and cubical
//! complexes, with lifting obstructions over cube boundaries.
//!
//! All arithmetic is over arbitrary-precision integers; groups are finitely generated
//! abelian groups given by presentations.

pub mod abgrp;
pub mod aq_complex;
pub mod cube_cat;
pub mod cubical_complex;
pub mod error;
pub mod local_system;
pub mod obstruction;
pub mod posets;

pub use abgrp::{cohomology_at, AbelianInvariants, Cochain, CochainComplex, FGAbelianGroup, GroupHom, IntMatrix};
pub use cubical_complex::{Cell, CubicalComplex};
pub use error::{Error, Result};
pub use local_system::CoefficientSystem;
pub use posets::{FinitePoset, GradedPoset, Interval, IntervalFamily};
