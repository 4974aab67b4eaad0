//! Verification toolkit for Riemannian geometries with skew-symmetric torsion
//! on left-invariant frame data.

pub mod catalog;
pub mod decomposition;
pub mod dilaton_solver;
pub mod error;
pub mod fibration_topology;
pub mod frame_algebra;
pub mod invariant_geometry;
pub mod io;
pub mod random;
pub mod report;
pub mod special_structures;

pub use error::{GeometryError, Result};
pub use frame_algebra::{EpsilonOrientation, Form, FrameTensor};
pub use invariant_geometry::LieFrameGeometry;
pub use report::StructureReport;
