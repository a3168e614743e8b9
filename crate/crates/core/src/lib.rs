//! Exact toric geometry for one-parameter subgroup actions: lattice and fan primitives, the toric
//! cobordism and bordism fans of a weight vector, weighted star subdivisions, and weight
//! bookkeeping for diagonal C*-actions on projective spaces, quadrics and orthogonal Grassmannians.

pub mod actions;
pub mod blowup;
pub mod cli;
pub mod cobordism;
pub mod lattice;
