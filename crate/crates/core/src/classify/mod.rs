//! Occupancy grids of orbits and classification of their complementary domains.

mod components;
mod deck;
mod grid;
mod report;
mod sierpinski;
pub mod synthetic;

pub use components::{complement_components, label_map, marked_components, Component};
pub use deck::{deck_subgroup, normalize, verify_witness, DeckResult, Subgroup, Witness};
pub use grid::{orbit_occupancy, OccupancyGrid, Provenance};
pub use report::{classify_grid, component_report, lifted_cells, ComponentReport, DomainReport, DomainType};
pub use sierpinski::{quasi_sierpinski_check, SierpinskiReport, SierpinskiVerdict};

/// Offset bound used when none is configured.
pub const DEFAULT_P_MAX: i64 = 8;
