//! Exact convex polytopes with cap half-spaces for worst-case tolerance analysis.

pub mod constraints;
pub mod dd;
pub mod fan;
pub mod error;
pub mod halfspace;
pub mod intersection;
pub mod io;
pub mod linalg;
pub mod mechanism;
pub mod minkowski;
pub mod polytope;
pub mod scalar;

pub use error::{Error, Result};
pub use halfspace::{HalfSpace, Tag};
pub use polytope::{
    bounding_box, face_of, h_to_v, includes, includes_polytope, inclusion_witness,
    remove_redundant, support_value, v_to_h, BoundingBox, Face, Polytope, Vertex,
};
pub use scalar::Scalar;
