//! Blowing up one orbit of a torus homeomorphism into a null-sequence of disks.

mod export;
mod radial;
mod state;
mod wedge;

pub use export::{boundaries_csv, manifest_json};
pub use radial::{eps_prime, g_eval, g_inv, q_eval, q_inv, PocketProfile, RadialChart};
pub use state::{
    blowup_stage, run_blowup, BlowupConfig, BlowupState, BlownUpMap, DiskRecord, GapBound, Pocket, Preimage,
    StageRecord,
};
pub use wedge::{linear_gap_control, wedge_grid, wedge_sample_check, Wedge, WedgeOutcome, WedgeReport};
