//! Deterministic cellular-automaton navigation engine.
//!
//! A robot is modeled as the single active cell of a cellular automaton
//! living on a square or hexagonal lattice. Each tick it examines a fixed
//! local neighborhood, ranks the adjacent cells by how much they reduce the
//! remaining target offset, filters them through elementary-automaton rules,
//! and moves one cell. The crate provides:
//!
//! - [`lattice`]: grids, coordinates, directions, and neighborhood
//!   extraction with read-locality instrumentation;
//! - [`ca_nav`]: the per-tick movement decision, single-robot navigation
//!   loop, and machine-readable step traces;
//! - [`control_fsm`]: the six-state motion control unit that turns sensor
//!   bits into drive commands, with truth-table and graph exporters;
//! - [`odometry`]: wheel-revolution bookkeeping, compact turn-list
//!   trajectory memories, and replay with optional error injection;
//! - [`fleet`]: synchronous multi-robot stepping with collision resolution,
//!   intersection logging, and separation monitoring.
//!
//! Everything is deterministic: the same inputs produce byte-identical
//! traces, and the only randomness (odometry error injection) is driven by
//! an explicit seed.

pub mod ca_nav;
pub mod control_fsm;
pub mod fleet;
pub mod lattice;
pub mod odometry;

pub use ca_nav::{
    candidate_eligible, choose_direction, choose_hex_axis, generate_active_signal,
    hex_active_signal, inactive_next_state, navigate, propose_move, rule_output, sense, sense_hex,
    step, traces_to_jsonl, DirectionPreference, EngineError, FogView, KnownGrid, NavigationResult,
    Proposal, ProposalKind, RobotAgent, RobotStatus, RunOutcome, StepTrace,
};
pub use control_fsm::{
    init as control_init, outputs as control_outputs, reachable_states, state_graph_dot,
    transition as control_transition, transition_pairs, truth_table, truth_table_csv,
    ControlState, SensorFrame, TruthTableRow,
};
pub use fleet::{
    intersections_csv, new_fleet, run_fleet, tick_fleet, FleetConfig, FleetWorld,
    IntersectionRecord, SeparationViolation,
};
pub use lattice::{
    delta_to, direction_between, lattice_distance, CellCoord, CellLookup, CellState, DeltaVector,
    Grid, GridError, Heading, HexCoord, HexDir, NeighborhoodView, ReadTally, RobotId, SquareDir,
    Tessellation,
};
pub use odometry::{
    compile_path_to_memory, remaining_vertical_distance, replay, revolutions_for_distance,
    ErrorModel, Odometer, OdometryError, ReplayOutcome, ReplayPose, TrajectoryMemory, TurnRecord,
    WheelModel,
};
