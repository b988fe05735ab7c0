//! Exact-arithmetic calculus for integer counts of holomorphic curves with
//! automorphisms: the subgroup-intersection ring, generalized signs, cover
//! contributions, equivariant index classes, Taubes-style generating
//! functions, and a certified numerical oracle for the sign rule.

pub mod cyclotomic;
pub mod group;
pub mod index;
pub mod json;
pub mod oracle;
pub mod rep;
pub mod ring;
pub mod sigma;
pub mod sublattice;
pub mod taubes;
