//! Mod-p essential cohomology of the p-groups with a cyclic subgroup of
//! index p, checked degree by degree with exact linear algebra over F_p.

pub mod algebra;
pub mod fplinalg;
pub mod ideals;
pub mod steenrod;
pub mod catalog;
pub mod oracle;
pub mod verifier;
