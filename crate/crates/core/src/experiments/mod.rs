//! Reproduction harness: configuration, measurement drivers, CSV tables,
//! soliton fitting and SVG plots.

pub mod config;
pub mod evaluators;
pub mod fit;
pub mod plot;
pub mod runs;
pub mod table;

pub use config::{ExperimentConfig, GridSpec, Kind};
pub use evaluators::{evaluate, Record};
pub use fit::{fit_soliton, SolitonFit};
pub use plot::{emit_plot, render_svg, PlotSpec};
pub use runs::{
    run_linear_probe, run_resolution, run_scaling_study, run_snapshot, run_transmission_sweep, ResolutionReport,
    TransmissionRecord,
};
pub use table::{write_table, Cell, Table};
