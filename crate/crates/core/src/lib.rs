//! Exact computations with zero-cycles on cubic surfaces.

pub mod fields;
pub mod forms;
pub mod linalg;
pub mod projgeom;
pub mod surface;
pub mod cubic3;
pub mod birmaps;
pub mod localsol;
pub mod io;
pub mod campaign;
