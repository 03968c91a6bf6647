//! Integer obstruction systems for embedding simplicial complexes into
//! Euclidean space, a small exact ILP solver, and an exact geometric oracle
//! for deformation cochains.

pub mod builtins;
pub mod cyclic;
pub mod deleted_product;
pub mod error;
pub mod geometry;
pub mod ilp;
pub mod model;
pub mod simplicial;
pub mod system;

pub use deleted_product::{canonicalize, cells, cells_full, coboundary_row, Cell, SignedCellSum};
pub use error::{Error, Result};
pub use simplicial::{complex_from_file, parse_complex, FVector, Simplex, SimplicialComplex, VertexId};
