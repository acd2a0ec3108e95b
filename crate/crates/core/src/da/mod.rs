//! Derived-from-Anosov maps and the fibered homeomorphism along their unstable leaves.

mod basin;
mod bump;
mod fibered;
mod leaf;
mod map;
mod section;

pub use basin::{basin_grid, basin_membership, default_ball, BasinVerdict};
pub use bump::{build_bump, build_partition, smoothstep, Bump, BumpPair, BumpSpec, Partition, LOG_LIMIT};
pub use fibered::{build_fibered_f, fibered_map, FiberedMap, LeafMethod};
pub use leaf::{leaf_advance, leaf_trace, min_vertical_component, polyline_csv, LeafDirection, LeafTracer, CROSSING_TOL};
pub use map::{build_da_map, standard_matrix, DaDerivative, DaMap};
pub use section::{cone_radius, contraction_bound, invariant_section, SectionGrid, CONTRACTION_SLACK};
