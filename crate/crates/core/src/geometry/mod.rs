//! Exact geometry over Q: intersection numbers, intersection cocycles and
//! deformation cochains of explicit vertex maps.

mod check;
mod deformation;
mod intersection;
pub mod linalg;
mod map;
pub mod poly;

pub use check::*;
pub use deformation::{
    all_families, family, family_with_base, lambda, lambda_in, random_general_pair, DeformationPair, Family,
};
pub use intersection::{intersection_number, phi, Cocycle};
pub use map::{general_position, moment_map, random_map, PointMap};

pub type Q = num_rational::BigRational;
