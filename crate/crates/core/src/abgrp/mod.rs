//! Finitely generated abelian groups, their homomorphisms, and cochain complexes of them.

mod complex;
mod group;
mod matrix;
mod smith;

pub use complex::{cohomology_at, Cochain, CochainComplex, Cohomology, Summand, Term};
pub use group::{write_in_image, AbelianInvariants, FGAbelianGroup, GroupHom};
pub use matrix::IntMatrix;
pub use smith::{snf, SmithForm};
