//! Exact lattice linear algebra, rational polyhedral cones and fans.
//!
//! Integers are arbitrary precision throughout; nothing here touches floating point.

mod cone;
mod dual;
mod fan;
mod int;
mod lp;
mod matrix;
mod serial;
mod small;
mod snf;
mod vector;

pub use cone::{CommonFace, Cone, ConePosition, common_face, cone_index, point_in_cone, project_cone};
pub use fan::{
    FaceClosureViolation, Fan, OverlapViolation, SubdivisionReport, ValidationReport, sample_points, validate_fan,
    verify_subdivision,
};
pub use int::{Int, Rational, gcd_all, int, ints, rational, to_i64};
pub use matrix::IntegerMatrix;
pub use serial::{
    ConeJson, FanJson, JsonInt, rational_lists_to_json, rational_to_json, rationals_to_json, serialize_int,
    serialize_ints, serialize_vector, serialize_vectors,
};
pub use snf::{SmithNormalForm, canonical_quotient_projection, hermite_normal_form, quotient_projection, snf};
pub use vector::LatticeVector;

pub use int::rsum;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("lattice vectors must have positive rank")]
    EmptyVector,
    #[error("matrix rows have unequal lengths")]
    RaggedMatrix,
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank {rank} is below the minimum {minimum}")]
    RankTooSmall { rank: usize, minimum: usize },
    #[error("{0} is not primitive")]
    NonPrimitive(LatticeVector),
    #[error("cone generators are linearly dependent")]
    NotSimplicial,
    #[error("invalid fan description: {0}")]
    InvalidJson(String),
}
