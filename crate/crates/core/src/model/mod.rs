//! Shared domain types: pad geometry, actuation cases, materials, target
//! objects and the measured shear-force dataset.
//!
//! Pressures are gauge kPa everywhere outside [`crate::pneumatics`].

pub mod actuation;
pub mod dataset;
pub mod geometry;
pub mod material;
pub mod object;

pub use actuation::{ActuationCase, CaseKind, Timing};
pub use dataset::{load_paper_dataset, Band, DatasetRow, PaperDataset};
pub use geometry::{default_geometry, PadGeometry};
pub use material::{MaterialPair, Target};
pub use object::{FaceProfile, TargetObject};
