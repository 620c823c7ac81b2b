//! Gaussian and Steiner symmetrization of columnar sets, exact Gaussian
//! perimeter, essential connectedness and rigidity of equality cases.

pub mod catalog;
pub mod columnar;
pub mod connectedness;
pub mod error;
pub mod exec;
pub mod gauss;
pub mod grid;
pub mod interval;
mod json;
pub mod profile;
pub mod random;
pub mod render;
pub mod rigidity;
pub mod scene;
pub mod sweep;

pub use columnar::{ColumnarSet, HalflineClass, PerimeterBreakdown};
pub use error::{Error, Result};
pub use gauss::{phi, psi, ExtReal};
pub use grid::{Axis, CellId, FacetRef, Grid};
pub use interval::{Interval, IntervalSet};
pub use profile::{Level, Location, Profile, SingularAnnotation};
pub use scene::Scene;
pub use exec::Execution;
pub use rigidity::{RigidityReport, Verdict};
