//! Sounding waveform, beam grids and the dual-band TDM beam-scan schedule.

mod beams;
mod schedule;
mod waveform;

pub use beams::{
    build_beam_grid, build_beam_grid_with_floor, wrap_angle, BeamGrid, BeamGrids, BeamPattern,
    DEFAULT_SIDELOBE_FLOOR_DB, SCAN_SPAN,
};
pub use schedule::{build_scan_schedule, ScanEntry, ScanSchedule};
pub use waveform::MultitoneWaveform;
