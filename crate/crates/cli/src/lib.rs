//! Command-line front end for the cellnav engine.
//!
//! - [`map_file`]: the one-character-per-cell text map format;
//! - [`scenario`]: timed world-event scripts (add/remove obstacles,
//!   retarget robots);
//! - [`runner`]: the end-to-end simulation driver producing traces,
//!   summaries, and exit codes;
//! - [`render`]: plain-text and SVG trajectory renderers.

pub mod map_file;
pub mod render;
pub mod runner;
pub mod scenario;

pub use map_file::{parse_map, MapError, ParsedMap, RobotSpec};
pub use render::{render_ascii, render_svg};
pub use runner::{run, RunArtifacts, RunConfig, RunError};
pub use scenario::{parse_scenario, ScenarioAction, ScenarioError, ScenarioEvent};
