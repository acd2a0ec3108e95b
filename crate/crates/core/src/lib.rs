//! Non-resonant torus homeomorphisms: Denjoy products, orbit blow-ups, derived-from-Anosov
//! maps, rotation vectors and classification of complementary domains.

pub mod blowup;
pub mod circle;
pub mod classify;
pub mod da;
pub mod error;
pub mod geom;
pub mod io;
pub mod pipeline;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use geom::Vec2;

pub use blowup::{BlowupState, DiskRecord};
pub use classify::{DomainReport, DomainType, OccupancyGrid};
pub use pipeline::{run_pipeline, Bundle, ExampleId, Outcome, PipelineSpec};
pub use torus::{IntegerMatrix, RotationEstimate};
pub use verify::{run_suite, Suite, SuiteReport, VerifyOptions};
