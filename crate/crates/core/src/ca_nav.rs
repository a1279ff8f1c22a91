//! The active-cell navigation engine.
//!
//! A robot occupies one cell of the lattice. Each tick it ranks its adjacent
//! cells by how much they reduce the remaining target offset, filters them
//! through a two-cell lookahead and an elementary-automaton acceptance rule,
//! and moves into the first cell that passes. The decision reads only the
//! immediate neighborhood — at most 13 distinct cells on a square lattice
//! and 7 on a hex lattice — and every read is instrumented so tests can
//! assert that bound instead of assuming it.
//!
//! The per-tick decision runs in three passes of falling ambition:
//!
//! 1. lookahead-eligible candidates additionally accepted by the receiving
//!    cell's rule, skipping the cell just vacated (a candidate that *is* the
//!    target only needs to be free);
//! 2. any free candidate except the vacated cell;
//! 3. the vacated cell itself (backtracking is a last resort).
//!
//! If all passes fail the robot is stuck. A recurrence counter on the
//! (cell, heading, remaining-offset) configuration converts livelock into a
//! reported deadlock: the third visit to the same configuration ends the
//! run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    delta_to, direction_between, hex_neighbors_tallied, hex_step, neighborhood_tallied,
    CellCoord, CellLookup, CellState, DeltaVector, Grid, Heading, HexCoord, HexDir,
    NeighborhoodView, ReadTally, RobotId, SquareDir, Tessellation,
};
use crate::odometry::{Odometer, WheelModel};

/// Third recurrence of one (cell, heading, offset) configuration ends the
/// run as a deadlock.
const RECURRENCE_LIMIT: u8 = 3;

/// Errors from engine misuse and invalid placements.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("cell ({x}, {y}) lies outside the {width}x{height} grid")]
    OutOfBounds { x: i32, y: i32, width: i32, height: i32 },
    #[error("start cell ({x}, {y}) is not free")]
    StartBlocked { x: i32, y: i32 },
    #[error("target cell ({x}, {y}) is not free")]
    TargetBlocked { x: i32, y: i32 },
    #[error("robot {id} is not the active cell at ({x}, {y})")]
    RobotNotPlaced { id: u8, x: i32, y: i32 },
    #[error("robot {id} is not in a moving state")]
    NotMoving { id: u8 },
    #[error("robots {a} and {b} share the start cell ({x}, {y})")]
    DuplicateStart { a: u8, b: u8, x: i32, y: i32 },
    #[error("robot id {0} appears more than once")]
    DuplicateId(u8),
    #[error("no robot has id {0}")]
    UnknownRobot(u8),
    #[error("cannot place an obstacle on robot {id} at ({x}, {y})")]
    ObstacleOnRobot { id: u8, x: i32, y: i32 },
}

pub(crate) fn check_in_bounds(grid: &Grid, c: CellCoord) -> Result<(), EngineError> {
    if grid.in_bounds(c) {
        Ok(())
    } else {
        let (width, height) = grid.dims();
        Err(EngineError::OutOfBounds {
            x: c.x,
            y: c.y,
            width,
            height,
        })
    }
}

/// Output bit of an elementary cellular-automaton rule for one input triple,
/// using standard Wolfram numbering: the output for inputs `(a, b, c)` is
/// bit `4a + 2b + c` of the rule's binary expansion.
pub fn rule_output(rule: u8, x4: bool, x1: bool, x2: bool) -> bool {
    let index = (u8::from(x4) << 2) | (u8::from(x1) << 1) | u8::from(x2);
    (rule >> index) & 1 == 1
}

/// Next state of an inactive cell that receives the robot's activation
/// signal. The cell re-frames its neighborhood so its first cell faces away
/// from the sender; `x1` is that straight-onward cell, `x2` the corner on
/// the sender's progress side, and `x4` the opposite corner. A result of
/// `false` (next state 0) means the cell accepts the robot.
pub fn inactive_next_state(rule: u8, x4: bool, x1: bool, x2: bool) -> bool {
    rule_output(rule, x4, x1, x2)
}

/// Candidate ranking produced by [`choose_direction`]: all four square
/// directions ordered by preference, plus which side the secondary
/// preference sits on relative to the primary (+1 = clockwise, −1 =
/// counterclockwise, 0 = no horizontal component to chase).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectionPreference {
    pub order: [SquareDir; 4],
    pub primary: SquareDir,
    pub secondary: Option<SquareDir>,
    pub secondary_sign: i8,
}

/// Rank the four square directions for a remaining offset: the primary
/// preference closes the vertical gap (north for a positive `y`, south for
/// negative), the secondary closes the horizontal gap, and the rest follow
/// clockwise from the primary. A purely horizontal offset promotes the
/// horizontal direction to primary.
pub fn choose_direction(delta: DeltaVector) -> DirectionPreference {
    let primary = if delta.y > 0 {
        SquareDir::North
    } else if delta.y < 0 {
        SquareDir::South
    } else if delta.x > 0 {
        SquareDir::East
    } else if delta.x < 0 {
        SquareDir::West
    } else {
        SquareDir::North
    };
    let secondary = if delta.y == 0 {
        None
    } else if delta.x > 0 {
        Some(SquareDir::East)
    } else if delta.x < 0 {
        Some(SquareDir::West)
    } else {
        None
    };
    let secondary_sign = match secondary {
        Some(s) if s == primary.clockwise() => 1,
        Some(_) => -1,
        None => 0,
    };
    let mut order = [primary; 4];
    let mut len = 1;
    if let Some(s) = secondary {
        order[len] = s;
        len += 1;
    }
    for k in 1..4 {
        let d = primary.rotated(k);
        if !order[..len].contains(&d) {
            order[len] = d;
            len += 1;
        }
    }
    debug_assert_eq!(len, 4);
    DirectionPreference {
        order,
        primary,
        secondary,
        secondary_sign,
    }
}

/// Hex axis whose unit step shrinks the remaining offset the most, measured
/// in hex distance; ties resolve to the first such axis clockwise from
/// north-east. `delta` is in axial components.
pub fn choose_hex_axis(delta: DeltaVector) -> HexDir {
    let mut best = HexDir::NorthEast;
    let mut best_len = u32::MAX;
    for dir in HexDir::CLOCKWISE {
        let (dq, dr) = dir.axial_step();
        let len = HexCoord::new(delta.x - dq, delta.y - dr).magnitude();
        if len < best_len {
            best = dir;
            best_len = len;
        }
    }
    best
}

/// Candidate position `i` (1-based, clockwise from the view frame) as a unit
/// vector in frame coordinates (+y = frame direction, +x = clockwise-next).
fn candidate_frame_unit(i: usize) -> (i32, i32) {
    [(0, 1), (1, 0), (0, -1), (-1, 0)][i - 1]
}

/// Frame offset of the corner cell a candidate's lookahead consults:
/// candidates on the primary axis (odd `i`) break toward the secondary
/// side, candidates on the secondary axis (even `i`) break toward the
/// primary direction.
fn progress_corner_offset(i: usize, secondary_sign: i8) -> (i32, i32) {
    let u = candidate_frame_unit(i);
    if i % 2 == 1 {
        (u.0 + i32::from(secondary_sign), u.1)
    } else {
        (u.0, u.1 + 1)
    }
}

/// Whether candidate `i` of the view passes the movement test: the cell must
/// be free, and its two lookahead cells (straight onward, plus the corner on
/// the progress side) must not both be blocked. With no secondary preference
/// only the onward cell is consulted.
pub fn candidate_eligible(view: &NeighborhoodView, i: usize, secondary_sign: i8) -> bool {
    if !view.ring1_state(i).is_free() {
        return false;
    }
    let onward_blocked = view.ahead_of(i).is_blocked();
    if secondary_sign == 0 {
        return !onward_blocked;
    }
    let (px, py) = progress_corner_offset(i, secondary_sign);
    let corner_blocked = view.ring2_at(px, py).is_blocked();
    !(onward_blocked && corner_blocked)
}

/// The three neighbor bits the receiving cell feeds its acceptance rule for
/// candidate `i`: `(x4, x1, x2)` = (far corner, straight onward, progress
/// corner). With no secondary preference the corners fall back to a fixed
/// clockwise chirality, which rules 136 and 172 cannot distinguish once the
/// candidate passed eligibility.
fn receiver_bits(view: &NeighborhoodView, i: usize, secondary_sign: i8) -> (bool, bool, bool) {
    let u = candidate_frame_unit(i);
    let x1 = view.ahead_of(i).is_blocked();
    let ((px, py), (ox, oy)) = if secondary_sign == 0 {
        ((u.0 + u.1, u.1 - u.0), (u.0 - u.1, u.1 + u.0))
    } else if i % 2 == 1 {
        let s = i32::from(secondary_sign);
        ((u.0 + s, u.1), (u.0 - s, u.1))
    } else {
        ((u.0, u.1 + 1), (u.0, u.1 - 1))
    };
    let x2 = view.ring2_at(px, py).is_blocked();
    let x4 = view.ring2_at(ox, oy).is_blocked();
    (x4, x1, x2)
}

/// Scan the four candidates in preference order and return the direction of
/// the first one that passes [`candidate_eligible`], or `None` if all four
/// fail. This is the bare movement-signal rule; the full engine adds the
/// receiving cell's acceptance rule, backtrack handling, and fallbacks.
pub fn generate_active_signal(view: &NeighborhoodView, delta: DeltaVector) -> Option<SquareDir> {
    let pref = choose_direction(delta);
    debug_assert_eq!(
        view.frame, pref.primary,
        "view must be framed on the primary preference"
    );
    for &dir in &pref.order {
        let i = view.frame.quarter_turns_to(dir) + 1;
        if candidate_eligible(view, i, pref.secondary_sign) {
            return Some(dir);
        }
    }
    None
}

/// Hex scan order for a preferred axis `j`: the aligned triple first (`j`,
/// then `j−1`, then `j+1`), then the remaining three cells clockwise.
fn hex_scan_order(preferred: HexDir) -> [HexDir; 6] {
    let i = preferred.index();
    let at = |k: usize| HexDir::CLOCKWISE[(i + k) % 6];
    [at(0), at(5), at(1), at(2), at(3), at(4)]
}

/// First free cell in the hex scan order for preferred axis `preferred`,
/// or `None` if all six neighbors are blocked. `ring` is indexed clockwise
/// from north-east.
pub fn hex_active_signal(ring: &[CellState; 6], preferred: HexDir) -> Option<HexDir> {
    hex_scan_order(preferred)
        .into_iter()
        .find(|d| ring[d.index()].is_free())
}

/// Lifecycle of one robot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RobotStatus {
    /// Created but not yet placed on a grid.
    Idle,
    /// Placed and still working toward its target.
    Moving,
    /// Standing on its target cell.
    Arrived,
    /// Stuck: no admissible move, or a repeating configuration.
    Deadlocked,
}

/// Terminal outcome of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunOutcome {
    Reached,
    Deadlocked,
    BudgetExhausted,
}

impl std::fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunOutcome::Reached => write!(f, "reached"),
            RunOutcome::Deadlocked => write!(f, "deadlocked"),
            RunOutcome::BudgetExhausted => write!(f, "budget_exhausted"),
        }
    }
}

/// Result of driving one robot to termination.
#[derive(Clone, Debug, PartialEq)]
pub struct NavigationResult {
    pub outcome: RunOutcome,
    /// Committed moves (equals `path.len() - 1`).
    pub ticks: u32,
    /// Every cell occupied, start first.
    pub path: Vec<CellCoord>,
}

/// One line of the machine-readable run trace. Serialized field order is
/// fixed; traces are compared byte-for-byte in determinism tests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub tick: u32,
    pub robot: u8,
    pub from: (i32, i32),
    pub to: (i32, i32),
    /// Direction moved, or `None` for a tick spent in place.
    pub dir: Option<String>,
    /// Candidate evaluations performed across all passes this tick.
    pub examined: u8,
    /// The acceptance rule consulted for the move, when one was.
    pub rule: Option<u8>,
    pub status: RobotStatus,
    /// Distinct cells read while deciding; not serialized.
    #[serde(skip)]
    pub cells_read: u8,
}

/// Serialize traces as one JSON object per line.
pub fn traces_to_jsonl(traces: &[StepTrace]) -> String {
    let mut out = String::new();
    for t in traces {
        out.push_str(&serde_json::to_string(t).expect("trace rows serialize"));
        out.push('\n');
    }
    out
}

/// A robot's accumulated knowledge of the static map in sensor-driven mode.
/// `None` means never sensed; robots are not stored (they move), only the
/// terrain under them. Grid bounds are known up front, so out-of-bounds
/// lookups report obstacles.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownGrid {
    width: i32,
    height: i32,
    cells: Vec<Option<CellState>>,
}

impl KnownGrid {
    pub fn new(width: i32, height: i32) -> KnownGrid {
        assert!(width >= 1 && height >= 1, "known grid needs positive dims");
        KnownGrid {
            width,
            height,
            cells: vec![None; (width as usize) * (height as usize)],
        }
    }

    fn index(&self, c: CellCoord) -> usize {
        (c.y as usize) * (self.width as usize) + (c.x as usize)
    }

    fn in_bounds(&self, c: CellCoord) -> bool {
        c.x >= 0 && c.x < self.width && c.y >= 0 && c.y < self.height
    }

    /// What the robot knows about `c`: `None` = never sensed. Out-of-bounds
    /// cells are known obstacles a priori.
    pub fn get(&self, c: CellCoord) -> Option<CellState> {
        if !self.in_bounds(c) {
            return Some(CellState::Obstacle);
        }
        self.cells[self.index(c)]
    }

    /// Number of in-bounds cells sensed so far.
    pub fn known_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    fn learn(&mut self, c: CellCoord, truth: CellState) {
        if !self.in_bounds(c) {
            return;
        }
        let seen = match truth {
            // Another robot only proves the terrain under it is passable.
            CellState::Active(_) => CellState::Free,
            s => s,
        };
        let i = self.index(c);
        self.cells[i] = Some(seen);
    }
}

/// Planning view in sensor-driven mode: live robot positions overlay the
/// robot's own partial map, and cells never sensed plan as free.
pub struct FogView<'a> {
    pub truth: &'a Grid,
    pub known: &'a KnownGrid,
}

impl CellLookup for FogView<'_> {
    fn state(&self, coord: CellCoord) -> CellState {
        if let CellState::Active(id) = self.truth.state(coord) {
            return CellState::Active(id);
        }
        self.known.get(coord).unwrap_or(CellState::Free)
    }

    fn dims(&self) -> (i32, i32) {
        self.truth.dims()
    }
}

/// Reveal the cells a square-lattice robot's sensors cover — its own cell
/// plus the four adjacent and eight extended cells — into its known grid,
/// and return the freshly sensed neighborhood (framed north). Exactly 13
/// distinct cells are read.
pub fn sense(
    truth: &Grid,
    known: &mut KnownGrid,
    origin: CellCoord,
    tally: &mut ReadTally,
) -> NeighborhoodView {
    known.learn(origin, tally.read(truth, origin));
    let frame = SquareDir::North;
    let mut ring1 = [CellState::Free; 4];
    let mut ring2 = [CellState::Free; 8];
    for i in 0..4 {
        let (dx, dy) = frame.rotated(i).step();
        let near = origin.offset(dx, dy);
        ring1[i] = tally.read(truth, near);
        known.learn(near, ring1[i]);
        let far = origin.offset(2 * dx, 2 * dy);
        ring2[2 * i] = tally.read(truth, far);
        known.learn(far, ring2[2 * i]);
        let (ex, ey) = frame.rotated(i + 1).step();
        let corner = origin.offset(dx + ex, dy + ey);
        ring2[2 * i + 1] = tally.read(truth, corner);
        known.learn(corner, ring2[2 * i + 1]);
    }
    NeighborhoodView {
        origin,
        frame,
        ring1,
        ring2,
    }
}

/// Hex analog of [`sense`]: reveals the origin and its six neighbors
/// (7 distinct reads) and returns the neighbor states clockwise from
/// north-east.
pub fn sense_hex(
    truth: &Grid,
    known: &mut KnownGrid,
    origin: CellCoord,
    tally: &mut ReadTally,
) -> [CellState; 6] {
    known.learn(origin, tally.read(truth, origin));
    let mut ring = [CellState::Free; 6];
    for (i, dir) in HexDir::CLOCKWISE.iter().enumerate() {
        let c = hex_step(origin, *dir);
        ring[i] = tally.read(truth, c);
        known.learn(c, ring[i]);
    }
    ring
}

/// One robot: identity, pose, target, and per-run bookkeeping.
#[derive(Clone, Debug)]
pub struct RobotAgent {
    pub id: RobotId,
    pub tessellation: Tessellation,
    pub cell: CellCoord,
    pub target: CellCoord,
    pub heading: Option<Heading>,
    pub status: RobotStatus,
    pub prev_cell: Option<CellCoord>,
    pub odometer: Odometer,
    /// Partial map in sensor-driven mode; `None` plans on ground truth.
    pub known: Option<KnownGrid>,
    /// Cells occupied so far, start first.
    pub path: Vec<CellCoord>,
    /// Committed moves so far.
    pub moves: u32,
    recurrence: BTreeMap<(CellCoord, Option<Heading>, DeltaVector), u8>,
}

impl RobotAgent {
    pub fn new(
        id: RobotId,
        start: CellCoord,
        target: CellCoord,
        tessellation: Tessellation,
    ) -> RobotAgent {
        RobotAgent {
            id,
            tessellation,
            cell: start,
            target,
            heading: None,
            status: RobotStatus::Idle,
            prev_cell: None,
            odometer: Odometer::new(WheelModel::default(), tessellation),
            known: None,
            path: Vec::new(),
            moves: 0,
            recurrence: BTreeMap::new(),
        }
    }

    /// Replace the default one-revolution-per-cell wheel geometry.
    pub fn with_wheel_model(mut self, model: WheelModel) -> RobotAgent {
        self.odometer = Odometer::new(model, self.tessellation);
        self
    }

    /// Switch to sensor-driven planning with an initially unknown map of the
    /// given footprint.
    pub fn enable_fog(&mut self, width: i32, height: i32) {
        self.known = Some(KnownGrid::new(width, height));
    }

    /// Remaining target offset (storage components on square lattices, axial
    /// on hex).
    pub fn delta(&self) -> DeltaVector {
        delta_to(self.cell, self.target, self.tessellation)
    }

    /// Count the current configuration; true when it has recurred enough to
    /// call the run a deadlock.
    fn note_config(&mut self) -> bool {
        let key = (self.cell, self.heading, self.delta());
        let count = self.recurrence.entry(key).or_insert(0);
        *count += 1;
        *count >= RECURRENCE_LIMIT
    }

    /// A tick spent in place still counts toward the recurrence limit.
    pub(crate) fn record_hold(&mut self) {
        if self.note_config() {
            self.status = RobotStatus::Deadlocked;
            self.odometer.finish_at(self.cell);
        }
    }

    /// Point the robot at a new target: recurrence history resets, and an
    /// arrived robot starts moving again. A deadlocked robot stays dead.
    pub(crate) fn retarget(&mut self, target: CellCoord) {
        self.target = target;
        self.recurrence.clear();
        match self.status {
            RobotStatus::Deadlocked | RobotStatus::Idle => {}
            _ => {
                if self.delta().is_zero() {
                    self.status = RobotStatus::Arrived;
                    self.odometer.finish_at(self.cell);
                } else {
                    self.status = RobotStatus::Moving;
                    self.note_config();
                }
            }
        }
    }

    /// Mark the agent placed and begin the run. Arrival at placement (start
    /// equals target) terminates immediately.
    pub(crate) fn begin(&mut self) {
        self.path.push(self.cell);
        if self.delta().is_zero() {
            self.status = RobotStatus::Arrived;
            self.odometer.finish_at(self.cell);
        } else {
            self.status = RobotStatus::Moving;
            self.note_config();
        }
    }
}

/// What a robot wants to do this tick.
#[derive(Clone, Debug, PartialEq)]
pub enum ProposalKind {
    /// Move one cell; `rule_applied` names the acceptance rule when one
    /// gated the choice.
    MoveTo {
        to: CellCoord,
        heading: Heading,
        rule_applied: Option<u8>,
    },
    /// No admissible move. `robot_adjacent` reports whether another robot
    /// sits in the blocking ring (it might vacate; a wall never will).
    Blocked { robot_adjacent: bool },
    /// Already standing on the target.
    AtTarget,
}

/// A robot's decision for one tick, with its work metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct Proposal {
    pub kind: ProposalKind,
    /// Candidate evaluations across all passes.
    pub examined: u8,
    /// Distinct cells read (sensing included in sensor-driven mode).
    pub cells_read: u8,
}

enum PlanChoice {
    Move {
        to: CellCoord,
        heading: Heading,
        rule_applied: Option<u8>,
    },
    Blocked {
        robot_adjacent: bool,
    },
}

fn plan_square<L: CellLookup + ?Sized>(
    src: &L,
    cell: CellCoord,
    target: CellCoord,
    prev: Option<CellCoord>,
    rule: u8,
    tally: &mut ReadTally,
) -> (PlanChoice, u8) {
    let delta = delta_to(cell, target, Tessellation::Square);
    let pref = choose_direction(delta);
    let sign = pref.secondary_sign;
    let view = neighborhood_tallied(src, cell, pref.primary, tally);
    let mut examined = 0u8;

    // Pass 1: lookahead-eligible candidates the receiving cell accepts.
    for &dir in &pref.order {
        let i = view.frame.quarter_turns_to(dir) + 1;
        examined += 1;
        let coord = view.candidate_coord(i);
        if coord == target {
            if view.ring1_state(i).is_free() {
                return (
                    PlanChoice::Move {
                        to: coord,
                        heading: Heading::Square(dir),
                        rule_applied: None,
                    },
                    examined,
                );
            }
            continue;
        }
        if Some(coord) == prev {
            continue;
        }
        if !candidate_eligible(&view, i, sign) {
            continue;
        }
        let (x4, x1, x2) = receiver_bits(&view, i, sign);
        if !inactive_next_state(rule, x4, x1, x2) {
            return (
                PlanChoice::Move {
                    to: coord,
                    heading: Heading::Square(dir),
                    rule_applied: Some(rule),
                },
                examined,
            );
        }
    }

    // Pass 2: any free candidate except the cell just vacated.
    for &dir in &pref.order {
        let i = view.frame.quarter_turns_to(dir) + 1;
        examined += 1;
        let coord = view.candidate_coord(i);
        if Some(coord) == prev {
            continue;
        }
        if view.ring1_state(i).is_free() {
            return (
                PlanChoice::Move {
                    to: coord,
                    heading: Heading::Square(dir),
                    rule_applied: None,
                },
                examined,
            );
        }
    }

    // Pass 3: backtrack into the vacated cell.
    if let Some(p) = prev {
        if let Some(Heading::Square(dir)) = direction_between(cell, p, Tessellation::Square) {
            let i = view.frame.quarter_turns_to(dir) + 1;
            examined += 1;
            if view.ring1_state(i).is_free() {
                return (
                    PlanChoice::Move {
                        to: p,
                        heading: Heading::Square(dir),
                        rule_applied: None,
                    },
                    examined,
                );
            }
        }
    }

    let robot_adjacent = view.ring1.iter().any(|s| matches!(s, CellState::Active(_)));
    (PlanChoice::Blocked { robot_adjacent }, examined)
}

fn plan_hex<L: CellLookup + ?Sized>(
    src: &L,
    cell: CellCoord,
    target: CellCoord,
    prev: Option<CellCoord>,
    tally: &mut ReadTally,
) -> (PlanChoice, u8) {
    let delta = delta_to(cell, target, Tessellation::Hex);
    let preferred = choose_hex_axis(delta);
    let ring = hex_neighbors_tallied(src, cell, tally);
    let mut examined = 0u8;

    for dir in hex_scan_order(preferred) {
        examined += 1;
        let coord = hex_step(cell, dir);
        let state = ring[dir.index()];
        if coord == target {
            if state.is_free() {
                return (
                    PlanChoice::Move {
                        to: coord,
                        heading: Heading::Hex(dir),
                        rule_applied: None,
                    },
                    examined,
                );
            }
            continue;
        }
        if Some(coord) == prev {
            continue;
        }
        if state.is_free() {
            return (
                PlanChoice::Move {
                    to: coord,
                    heading: Heading::Hex(dir),
                    rule_applied: None,
                },
                examined,
            );
        }
    }

    if let Some(p) = prev {
        if let Some(Heading::Hex(dir)) = direction_between(cell, p, Tessellation::Hex) {
            examined += 1;
            if ring[dir.index()].is_free() {
                return (
                    PlanChoice::Move {
                        to: p,
                        heading: Heading::Hex(dir),
                        rule_applied: None,
                    },
                    examined,
                );
            }
        }
    }

    let robot_adjacent = ring.iter().any(|s| matches!(s, CellState::Active(_)));
    (PlanChoice::Blocked { robot_adjacent }, examined)
}

/// Decide one robot's move against a frozen grid. In sensor-driven mode the
/// robot first refreshes its known map from its sensors, then plans on the
/// combination of known terrain and live robot positions; otherwise it plans
/// directly on the grid. Other robots read as blocked cells either way.
pub fn propose_move(truth: &Grid, agent: &mut RobotAgent, rule: u8) -> Proposal {
    let mut tally = ReadTally::new();
    if agent.delta().is_zero() {
        return Proposal {
            kind: ProposalKind::AtTarget,
            examined: 0,
            cells_read: 0,
        };
    }
    let (cell, target, prev) = (agent.cell, agent.target, agent.prev_cell);
    let tessellation = truth.tessellation();
    let (choice, examined) = if let Some(known) = agent.known.as_mut() {
        match tessellation {
            Tessellation::Square => {
                sense(truth, known, cell, &mut tally);
            }
            Tessellation::Hex => {
                sense_hex(truth, known, cell, &mut tally);
            }
        }
        let fog = FogView {
            truth,
            known: agent.known.as_ref().expect("fog mode enabled"),
        };
        match tessellation {
            Tessellation::Square => plan_square(&fog, cell, target, prev, rule, &mut tally),
            Tessellation::Hex => plan_hex(&fog, cell, target, prev, &mut tally),
        }
    } else {
        match tessellation {
            Tessellation::Square => plan_square(truth, cell, target, prev, rule, &mut tally),
            Tessellation::Hex => plan_hex(truth, cell, target, prev, &mut tally),
        }
    };
    let kind = match choice {
        PlanChoice::Move {
            to,
            heading,
            rule_applied,
        } => ProposalKind::MoveTo {
            to,
            heading,
            rule_applied,
        },
        PlanChoice::Blocked { robot_adjacent } => ProposalKind::Blocked { robot_adjacent },
    };
    Proposal {
        kind,
        examined,
        cells_read: tally.distinct_cells() as u8,
    }
}

/// Apply a decided move to the robot itself: pose, odometry (turn recorded
/// at the departure cell, then one cell of travel), and terminal status.
/// Arrival is detected here, so the landing move's trace row already shows
/// it; a recurring configuration likewise turns into a deadlock here. Grid
/// occupancy is the caller's job — fleets clear every vacated cell before
/// occupying any destination.
pub(crate) fn apply_move(agent: &mut RobotAgent, to: CellCoord, heading: Heading) {
    let from = agent.cell;
    if let Some(old) = agent.heading {
        if old != heading {
            agent.odometer.turn_at(from, old, heading);
        }
    }
    agent.odometer.advance_one_cell();
    agent.prev_cell = Some(from);
    agent.cell = to;
    agent.heading = Some(heading);
    agent.path.push(to);
    agent.moves += 1;
    if agent.delta().is_zero() {
        agent.status = RobotStatus::Arrived;
        agent.odometer.finish_at(to);
    } else if agent.note_config() {
        agent.status = RobotStatus::Deadlocked;
        agent.odometer.finish_at(to);
    }
}

/// Single-robot commit: vacate, occupy, and update the robot.
pub(crate) fn commit_move(grid: &mut Grid, agent: &mut RobotAgent, to: CellCoord, heading: Heading) {
    grid.set_state(agent.cell, CellState::Free)
        .expect("robot cell is in bounds");
    grid.set_state(to, CellState::Active(agent.id))
        .expect("move targets are in bounds");
    apply_move(agent, to, heading);
}

pub(crate) fn move_trace(
    tick: u32,
    agent: &RobotAgent,
    from: CellCoord,
    heading: Heading,
    proposal_examined: u8,
    rule_applied: Option<u8>,
    cells_read: u8,
) -> StepTrace {
    StepTrace {
        tick,
        robot: agent.id.0,
        from: (from.x, from.y),
        to: (agent.cell.x, agent.cell.y),
        dir: Some(heading.name().to_string()),
        examined: proposal_examined,
        rule: rule_applied,
        status: agent.status,
        cells_read,
    }
}

pub(crate) fn stay_trace(tick: u32, agent: &RobotAgent, examined: u8, cells_read: u8) -> StepTrace {
    StepTrace {
        tick,
        robot: agent.id.0,
        from: (agent.cell.x, agent.cell.y),
        to: (agent.cell.x, agent.cell.y),
        dir: None,
        examined,
        rule: None,
        status: agent.status,
        cells_read,
    }
}

/// Advance a single robot one tick: propose, then commit. A blocked robot
/// with nobody to wait for is deadlocked on the spot; this single-robot
/// entry point treats any blockage that way (fleets resolve waiting through
/// their own two-phase tick).
pub fn step(
    grid: &mut Grid,
    agent: &mut RobotAgent,
    rule: u8,
    tick: u32,
) -> Result<StepTrace, EngineError> {
    if grid.state(agent.cell) != CellState::Active(agent.id) {
        return Err(EngineError::RobotNotPlaced {
            id: agent.id.0,
            x: agent.cell.x,
            y: agent.cell.y,
        });
    }
    if agent.status != RobotStatus::Moving {
        return Err(EngineError::NotMoving { id: agent.id.0 });
    }
    let proposal = propose_move(grid, agent, rule);
    match proposal.kind {
        ProposalKind::AtTarget => {
            agent.status = RobotStatus::Arrived;
            agent.odometer.finish_at(agent.cell);
            Ok(stay_trace(tick, agent, proposal.examined, proposal.cells_read))
        }
        ProposalKind::MoveTo {
            to,
            heading,
            rule_applied,
        } => {
            let from = agent.cell;
            commit_move(grid, agent, to, heading);
            Ok(move_trace(
                tick,
                agent,
                from,
                heading,
                proposal.examined,
                rule_applied,
                proposal.cells_read,
            ))
        }
        ProposalKind::Blocked { .. } => {
            agent.status = RobotStatus::Deadlocked;
            agent.odometer.finish_at(agent.cell);
            Ok(stay_trace(tick, agent, proposal.examined, proposal.cells_read))
        }
    }
}

pub(crate) fn validate_endpoints(
    grid: &Grid,
    start: CellCoord,
    target: CellCoord,
) -> Result<(), EngineError> {
    check_in_bounds(grid, start)?;
    check_in_bounds(grid, target)?;
    if grid.state(start) != CellState::Free {
        return Err(EngineError::StartBlocked {
            x: start.x,
            y: start.y,
        });
    }
    if grid.state(target) == CellState::Obstacle {
        return Err(EngineError::TargetBlocked {
            x: target.x,
            y: target.y,
        });
    }
    Ok(())
}

/// Place a robot and drive it until it arrives, deadlocks, or the tick
/// budget runs out. Returns the run result and one trace row per tick.
/// The robot stays on the grid afterward.
pub fn navigate(
    grid: &mut Grid,
    agent: &mut RobotAgent,
    rule: u8,
    max_ticks: u32,
) -> Result<(NavigationResult, Vec<StepTrace>), EngineError> {
    validate_endpoints(grid, agent.cell, agent.target)?;
    if grid.state(agent.target) != CellState::Free && agent.target != agent.cell {
        return Err(EngineError::TargetBlocked {
            x: agent.target.x,
            y: agent.target.y,
        });
    }
    grid.set_state(agent.cell, CellState::Active(agent.id))
        .expect("start cell is in bounds");
    agent.begin();
    let mut traces = Vec::new();
    let mut tick = 0;
    while agent.status == RobotStatus::Moving && tick < max_ticks {
        traces.push(step(grid, agent, rule, tick)?);
        tick += 1;
    }
    if agent.status == RobotStatus::Moving {
        agent.odometer.finish_at(agent.cell);
    }
    let outcome = match agent.status {
        RobotStatus::Arrived => RunOutcome::Reached,
        RobotStatus::Deadlocked => RunOutcome::Deadlocked,
        _ => RunOutcome::BudgetExhausted,
    };
    Ok((
        NavigationResult {
            outcome,
            ticks: agent.moves,
            path: agent.path.clone(),
        },
        traces,
    ))
}
