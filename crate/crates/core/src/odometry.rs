//! Wheel-revolution dead reckoning.
//!
//! Distances are stored as wheel revolutions, not meters: a robot that knows
//! its wheel perimeter can reconstruct every leg of its path from a compact
//! list of turn records. The module covers the live bookkeeping a robot does
//! while driving ([`Odometer`]), offline compilation of a known path into
//! the same record format ([`compile_path_to_memory`]), and dead-reckoned
//! [`replay`] of a record list with an optional seeded error model.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    direction_between, CellCoord, Heading, HexCoord, Tessellation,
};

/// Errors from odometry bookkeeping and path compilation.
#[derive(Debug, Error, PartialEq)]
pub enum OdometryError {
    #[error("wheel perimeter must be positive and finite, got {0}")]
    BadPerimeter(f64),
    #[error("cell pitch must be positive and finite, got {0}")]
    BadCellPitch(f64),
    #[error("distance must be nonnegative, got {0}")]
    NegativeDistance(f64),
    #[error("turn of {degrees}° is not a valid turn code on a {tessellation} lattice")]
    InvalidTurnCode { degrees: i16, tessellation: Tessellation },
    #[error("leg length must be nonnegative, got {0}")]
    NegativeLeg(f64),
    #[error("trajectory memory is sealed; no further records may be appended")]
    Sealed,
    #[error("path cells at indices {0} and {1} are not lattice neighbors")]
    NonAdjacentPath(usize, usize),
    #[error("path must contain at least one cell")]
    EmptyPath,
}

/// Wheel geometry relating revolutions to distance. The cell pitch defaults
/// to the wheel perimeter, making one cell transit exactly one revolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WheelModel {
    wheel_perimeter: f64,
    cell_pitch: f64,
}

impl WheelModel {
    pub fn new(wheel_perimeter: f64, cell_pitch: f64) -> Result<WheelModel, OdometryError> {
        if !(wheel_perimeter.is_finite() && wheel_perimeter > 0.0) {
            return Err(OdometryError::BadPerimeter(wheel_perimeter));
        }
        if !(cell_pitch.is_finite() && cell_pitch > 0.0) {
            return Err(OdometryError::BadCellPitch(cell_pitch));
        }
        Ok(WheelModel {
            wheel_perimeter,
            cell_pitch,
        })
    }

    /// One-revolution-per-cell model with the given perimeter.
    pub fn with_perimeter(wheel_perimeter: f64) -> Result<WheelModel, OdometryError> {
        WheelModel::new(wheel_perimeter, wheel_perimeter)
    }

    pub fn wheel_perimeter(&self) -> f64 {
        self.wheel_perimeter
    }

    pub fn cell_pitch(&self) -> f64 {
        self.cell_pitch
    }

    /// Revolutions needed to cross one cell.
    pub fn revolutions_per_cell(&self) -> f64 {
        self.cell_pitch / self.wheel_perimeter
    }
}

impl Default for WheelModel {
    fn default() -> Self {
        WheelModel {
            wheel_perimeter: 1.0,
            cell_pitch: 1.0,
        }
    }
}

/// Wheel revolutions (fractional part preserved) needed to cover `distance`
/// meters.
pub fn revolutions_for_distance(distance: f64, model: &WheelModel) -> Result<f64, OdometryError> {
    if distance < 0.0 || distance.is_nan() {
        return Err(OdometryError::NegativeDistance(distance));
    }
    Ok(distance / model.wheel_perimeter)
}

/// Vertical distance still to cover after a turn at `y_turn`: the target
/// coordinate `y1` minus the vertical ground already gained from `y0` to the
/// turning point. All quantities are cell counts.
pub fn remaining_vertical_distance(y1: i32, y_turn: i32, y0: i32) -> i32 {
    y1 - (y_turn - y0)
}

/// One entry of a trajectory memory: the cell where a wheel rotation
/// happened, the signed rotation in degrees (positive = clockwise), and the
/// revolutions traveled since the previous entry. The final leg of a path is
/// stored as a terminal record with `turn = None`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub x: i32,
    pub y: i32,
    pub turn: Option<i16>,
    pub revolutions: f64,
}

/// Turn codes a square lattice permits. Reversals are stored as two
/// consecutive +90° records (the second with a zero-length leg).
pub const SQUARE_TURN_CODES: [i16; 2] = [90, -90];
/// Turn codes a hex lattice permits.
pub const HEX_TURN_CODES: [i16; 5] = [60, -60, 120, -120, 180];

fn valid_turn_code(degrees: i16, tessellation: Tessellation) -> bool {
    match tessellation {
        Tessellation::Square => SQUARE_TURN_CODES.contains(&degrees),
        Tessellation::Hex => HEX_TURN_CODES.contains(&degrees),
    }
}

/// The ordered sequence of turn records describing one robot's path, enough
/// to dead-reckon it from the start pose. Append-only; sealing appends the
/// terminal leg and freezes the memory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMemory {
    tessellation: Tessellation,
    records: Vec<TurnRecord>,
    sealed: bool,
}

impl TrajectoryMemory {
    pub fn new(tessellation: Tessellation) -> TrajectoryMemory {
        TrajectoryMemory {
            tessellation,
            records: Vec::new(),
            sealed: false,
        }
    }

    pub fn tessellation(&self) -> Tessellation {
        self.tessellation
    }

    pub fn records(&self) -> &[TurnRecord] {
        &self.records
    }

    pub fn is_sealed(&self) -> bool {
        self.sealed
    }

    /// Append one turn: the wheels rotated by `degrees` at `(x, y)` after a
    /// leg of `revolutions`.
    pub fn record_turn(
        &mut self,
        x: i32,
        y: i32,
        degrees: i16,
        revolutions: f64,
    ) -> Result<(), OdometryError> {
        if self.sealed {
            return Err(OdometryError::Sealed);
        }
        if !valid_turn_code(degrees, self.tessellation) {
            return Err(OdometryError::InvalidTurnCode {
                degrees,
                tessellation: self.tessellation,
            });
        }
        if revolutions < 0.0 || revolutions.is_nan() {
            return Err(OdometryError::NegativeLeg(revolutions));
        }
        self.records.push(TurnRecord {
            x,
            y,
            turn: Some(degrees),
            revolutions,
        });
        Ok(())
    }

    /// Append the terminal leg ending at `(x, y)` and freeze the memory.
    pub fn seal(&mut self, x: i32, y: i32, revolutions: f64) -> Result<(), OdometryError> {
        if self.sealed {
            return Err(OdometryError::Sealed);
        }
        if revolutions < 0.0 || revolutions.is_nan() {
            return Err(OdometryError::NegativeLeg(revolutions));
        }
        self.records.push(TurnRecord {
            x,
            y,
            turn: None,
            revolutions,
        });
        self.sealed = true;
        Ok(())
    }

    /// Sum of all leg lengths in revolutions.
    pub fn total_revolutions(&self) -> f64 {
        self.records.iter().map(|r| r.revolutions).sum()
    }

    /// CSV export: one row per record. Turn angles and leg lengths carry six
    /// fractional digits; the terminal record prints a zero angle.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z_degrees,l_revolutions\n");
        for r in &self.records {
            let degrees = f64::from(r.turn.unwrap_or(0));
            out.push_str(&format!(
                "{},{},{:.6},{:.6}\n",
                r.x, r.y, degrees, r.revolutions
            ));
        }
        out
    }
}

/// Signed degree rotations carrying `from` to `to`, clockwise positive.
/// Square reversals come back as two +90° entries so every entry is a legal
/// square turn code.
fn turn_sequence(from: Heading, to: Heading) -> Vec<i16> {
    match (from, to) {
        (Heading::Square(a), Heading::Square(b)) => match a.quarter_turns_to(b) {
            0 => vec![],
            1 => vec![90],
            2 => vec![90, 90],
            3 => vec![-90],
            _ => unreachable!(),
        },
        (Heading::Hex(a), Heading::Hex(b)) => match a.sextant_turns_to(b) {
            0 => vec![],
            1 => vec![60],
            2 => vec![120],
            3 => vec![180],
            4 => vec![-120],
            5 => vec![-60],
            _ => unreachable!(),
        },
        _ => panic!("cannot turn between square and hex headings"),
    }
}

fn emit_turns(
    memory: &mut TrajectoryMemory,
    at: CellCoord,
    from: Heading,
    to: Heading,
    leg_revolutions: f64,
) -> Result<(), OdometryError> {
    let mut leg = leg_revolutions;
    for degrees in turn_sequence(from, to) {
        memory.record_turn(at.x, at.y, degrees, leg)?;
        leg = 0.0;
    }
    Ok(())
}

/// Live odometry state carried by a driving robot: cumulative revolution
/// counter, the revolutions of the leg in progress, and the trajectory
/// memory being written.
#[derive(Clone, Debug, PartialEq)]
pub struct Odometer {
    model: WheelModel,
    total_revolutions: f64,
    leg_revolutions: f64,
    memory: TrajectoryMemory,
}

impl Odometer {
    pub fn new(model: WheelModel, tessellation: Tessellation) -> Odometer {
        Odometer {
            model,
            total_revolutions: 0.0,
            leg_revolutions: 0.0,
            memory: TrajectoryMemory::new(tessellation),
        }
    }

    pub fn model(&self) -> &WheelModel {
        &self.model
    }

    /// Cumulative revolutions driven so far; never decreases.
    pub fn total_revolutions(&self) -> f64 {
        self.total_revolutions
    }

    pub fn memory(&self) -> &TrajectoryMemory {
        &self.memory
    }

    /// Register the wheel rotation taken at `at` before driving off along
    /// the new heading.
    pub fn turn_at(&mut self, at: CellCoord, from: Heading, to: Heading) {
        if self.memory.sealed {
            return;
        }
        emit_turns(&mut self.memory, at, from, to, self.leg_revolutions)
            .expect("engine turns use valid codes");
        if from != to {
            self.leg_revolutions = 0.0;
        }
    }

    /// Register one cell of straight travel.
    pub fn advance_one_cell(&mut self) {
        let revs = self.model.revolutions_per_cell();
        self.total_revolutions += revs;
        self.leg_revolutions += revs;
    }

    /// Close the memory with the terminal leg ending at `at`. Idempotent.
    pub fn finish_at(&mut self, at: CellCoord) {
        if !self.memory.sealed {
            self.memory
                .seal(at.x, at.y, self.leg_revolutions)
                .expect("sealing an unsealed memory cannot fail");
            self.leg_revolutions = 0.0;
        }
    }
}

/// Collapse a cell path into a trajectory memory: straight runs become one
/// leg each, heading changes emit turn records at the turning cell, and the
/// final leg seals the memory. A single-cell path compiles to an empty
/// motion (one terminal record of zero revolutions).
pub fn compile_path_to_memory(
    path: &[CellCoord],
    tessellation: Tessellation,
    model: &WheelModel,
) -> Result<TrajectoryMemory, OdometryError> {
    let mut memory = TrajectoryMemory::new(tessellation);
    let (first, rest) = path.split_first().ok_or(OdometryError::EmptyPath)?;
    let revs_per_cell = model.revolutions_per_cell();
    let mut heading: Option<Heading> = None;
    let mut leg = 0.0_f64;
    let mut at = *first;
    for (i, &next) in rest.iter().enumerate() {
        let dir = direction_between(at, next, tessellation)
            .ok_or(OdometryError::NonAdjacentPath(i, i + 1))?;
        if let Some(prev) = heading {
            if prev != dir {
                emit_turns(&mut memory, at, prev, dir, leg)?;
                leg = 0.0;
            }
        }
        heading = Some(dir);
        leg += revs_per_cell;
        at = next;
    }
    memory.seal(at.x, at.y, leg)?;
    Ok(memory)
}

/// Aggregated per-revolution error applied during replay: each revolution's
/// effective travel is scaled by an independent factor drawn uniformly from
/// `1 ± per_rev_scale_error`. The `confidence_band` is the position error in
/// cells a caller is prepared to tolerate; a zero scale error makes replay
/// exact regardless of band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorModel {
    pub per_rev_scale_error: f64,
    pub seed: u64,
    pub confidence_band: f64,
}

impl ErrorModel {
    /// Exact replay: no perturbation.
    pub fn none() -> ErrorModel {
        ErrorModel {
            per_rev_scale_error: 0.0,
            seed: 0,
            confidence_band: 0.0,
        }
    }
}

/// Continuous pose during replay, in cell units: storage coordinates on a
/// square lattice, axial coordinates on a hex lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReplayPose {
    pub x: f64,
    pub y: f64,
    pub heading: Heading,
}

/// Result of dead-reckoning a trajectory memory.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayOutcome {
    /// Final position snapped to the nearest cell.
    pub final_cell: CellCoord,
    /// Pose after each record was applied (leg driven, then turn taken).
    pub poses: Vec<ReplayPose>,
}

fn rotate_heading(heading: Heading, degrees: i16) -> Heading {
    match heading {
        Heading::Square(d) => {
            debug_assert_eq!(degrees % 90, 0);
            let steps = (degrees / 90).rem_euclid(4) as usize;
            Heading::Square(d.rotated(steps))
        }
        Heading::Hex(d) => {
            debug_assert_eq!(degrees % 60, 0);
            let steps = (degrees / 60).rem_euclid(6) as usize;
            let mut out = d;
            for _ in 0..steps {
                out = out.clockwise();
            }
            Heading::Hex(out)
        }
    }
}

fn snap_square(x: f64, y: f64) -> CellCoord {
    CellCoord::new(x.round() as i32, y.round() as i32)
}

/// Round an axial position to the nearest hex by rounding cube coordinates
/// and repairing the component with the largest rounding error.
fn snap_hex(q: f64, r: f64) -> CellCoord {
    let s = -q - r;
    let mut rq = q.round();
    let mut rr = r.round();
    let rs = s.round();
    let dq = (rq - q).abs();
    let dr = (rr - r).abs();
    let ds = (rs - s).abs();
    if dq > dr && dq > ds {
        rq = -rr - rs;
    } else if dr > ds {
        rr = -rq - rs;
    }
    HexCoord::new(rq as i32, rr as i32).to_offset()
}

/// Dead-reckon a trajectory memory from a start cell and initial heading:
/// drive each record's leg, then rotate by its turn angle. With a nonzero
/// error model, every revolution's travel is independently perturbed by the
/// seeded generator; the same seed always reproduces the same replay.
pub fn replay(
    memory: &TrajectoryMemory,
    start: CellCoord,
    start_heading: Heading,
    model: &WheelModel,
    error: &ErrorModel,
) -> ReplayOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(error.seed);
    let (mut x, mut y) = match memory.tessellation {
        Tessellation::Square => (f64::from(start.x), f64::from(start.y)),
        Tessellation::Hex => {
            let a = start.to_axial();
            (f64::from(a.q), f64::from(a.r))
        }
    };
    let mut heading = start_heading;
    let mut poses = Vec::with_capacity(memory.records.len());
    for record in &memory.records {
        let meters = perturbed_leg_meters(record.revolutions, model, error, &mut rng);
        let cells = meters / model.cell_pitch;
        let (ux, uy) = match heading {
            Heading::Square(d) => {
                let (dx, dy) = d.step();
                (f64::from(dx), f64::from(dy))
            }
            Heading::Hex(d) => {
                let (dq, dr) = d.axial_step();
                (f64::from(dq), f64::from(dr))
            }
        };
        x += ux * cells;
        y += uy * cells;
        if let Some(degrees) = record.turn {
            heading = rotate_heading(heading, degrees);
        }
        poses.push(ReplayPose { x, y, heading });
    }
    let final_cell = match memory.tessellation {
        Tessellation::Square => snap_square(x, y),
        Tessellation::Hex => snap_hex(x, y),
    };
    ReplayOutcome { final_cell, poses }
}

fn perturbed_leg_meters(
    revolutions: f64,
    model: &WheelModel,
    error: &ErrorModel,
    rng: &mut ChaCha8Rng,
) -> f64 {
    if error.per_rev_scale_error == 0.0 {
        return revolutions * model.wheel_perimeter;
    }
    let e = error.per_rev_scale_error;
    let whole = revolutions.floor() as u64;
    let fraction = revolutions - revolutions.floor();
    let mut meters = 0.0;
    for _ in 0..whole {
        let scale: f64 = 1.0 + rng.gen_range(-e..=e);
        meters += scale * model.wheel_perimeter;
    }
    if fraction > 0.0 {
        let scale: f64 = 1.0 + rng.gen_range(-e..=e);
        meters += fraction * scale * model.wheel_perimeter;
    }
    meters
}
