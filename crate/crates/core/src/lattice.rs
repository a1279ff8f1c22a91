//! Grid storage, coordinates, directions, and neighborhood extraction for
//! square and hexagonal lattices.
//!
//! Coordinates follow a fixed world convention: `+y` is north (forward),
//! `+x` is east (right). Map rows are stored bottom-up, so `y = 0` is the
//! southern edge. Hexagonal grids reuse the same rectangular storage with an
//! odd-row offset interpretation (odd rows sit half a cell east) and are
//! converted to axial coordinates for all neighbor and distance math.
//!
//! Everything off the edge of a grid reads [`CellState::Obstacle`], so
//! callers never need a separate bounds check when probing neighbors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lattice flavor of a [`Grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tessellation {
    /// Four-neighbor rectangular lattice.
    Square,
    /// Six-neighbor hexagonal lattice (odd-row offset storage).
    Hex,
}

impl std::fmt::Display for Tessellation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tessellation::Square => write!(f, "square"),
            Tessellation::Hex => write!(f, "hex"),
        }
    }
}

/// Identifier of one robot. Fleets are small; ids are single digits in map
/// files, so a `u8` is plenty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RobotId(pub u8);

impl std::fmt::Display for RobotId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Occupancy of one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellState {
    /// Traversable and unoccupied.
    Free,
    /// Permanently blocked (also what out-of-bounds cells read as).
    Obstacle,
    /// Occupied by the robot with the given id.
    Active(RobotId),
}

impl CellState {
    /// True only for [`CellState::Free`].
    pub fn is_free(self) -> bool {
        matches!(self, CellState::Free)
    }

    /// Logical "1" in neighbor analysis: obstacles and robots both block.
    pub fn is_blocked(self) -> bool {
        !self.is_free()
    }
}

/// Storage coordinate: `x` = column (east), `y` = row (north).
///
/// For hex grids this is the offset form; convert with [`CellCoord::to_axial`]
/// before doing hex math.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellCoord {
    pub x: i32,
    pub y: i32,
}

impl CellCoord {
    pub fn new(x: i32, y: i32) -> Self {
        CellCoord { x, y }
    }

    /// Translate by `(dx, dy)` in storage coordinates.
    pub fn offset(self, dx: i32, dy: i32) -> Self {
        CellCoord::new(self.x + dx, self.y + dy)
    }

    /// Offset-to-axial conversion for hex grids (odd rows shifted east).
    pub fn to_axial(self) -> HexCoord {
        HexCoord {
            q: self.x - (self.y - (self.y & 1)) / 2,
            r: self.y,
        }
    }
}

impl std::fmt::Display for CellCoord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Axial hex coordinate. `r` increases northward, matching `y`; `q` runs
/// roughly east. The implied cube coordinate is `s = -q - r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HexCoord {
    pub q: i32,
    pub r: i32,
}

impl HexCoord {
    pub fn new(q: i32, r: i32) -> Self {
        HexCoord { q, r }
    }

    /// Axial-to-offset conversion, inverse of [`CellCoord::to_axial`].
    pub fn to_offset(self) -> CellCoord {
        CellCoord {
            x: self.q + (self.r - (self.r & 1)) / 2,
            y: self.r,
        }
    }

    /// Hex grid distance from the origin in cells.
    pub fn magnitude(self) -> u32 {
        let s = -self.q - self.r;
        ((self.q.abs() + self.r.abs() + s.abs()) / 2) as u32
    }
}

/// Difference between two positions.
///
/// On square grids the components are `(east, north)` cell counts; on hex
/// grids they are the axial `(q, r)` components. `(0, 0)` always means
/// "already at the target".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DeltaVector {
    pub x: i32,
    pub y: i32,
}

impl DeltaVector {
    pub fn new(x: i32, y: i32) -> Self {
        DeltaVector { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

/// Remaining target offset `to - from`, in the distance components native to
/// the tessellation (storage components for square, axial for hex).
pub fn delta_to(from: CellCoord, to: CellCoord, tessellation: Tessellation) -> DeltaVector {
    match tessellation {
        Tessellation::Square => DeltaVector::new(to.x - from.x, to.y - from.y),
        Tessellation::Hex => {
            let (a, b) = (from.to_axial(), to.to_axial());
            DeltaVector::new(b.q - a.q, b.r - a.r)
        }
    }
}

/// Lattice distance in cells: Manhattan on square grids, hex distance
/// (axial) on hex grids.
pub fn lattice_distance(a: CellCoord, b: CellCoord, tessellation: Tessellation) -> u32 {
    let d = delta_to(a, b, tessellation);
    match tessellation {
        Tessellation::Square => (d.x.abs() + d.y.abs()) as u32,
        Tessellation::Hex => HexCoord::new(d.x, d.y).magnitude(),
    }
}

/// The four movement directions on a square grid, in clockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SquareDir {
    North,
    East,
    South,
    West,
}

impl SquareDir {
    /// All four directions in clockwise order starting north.
    pub const CLOCKWISE: [SquareDir; 4] =
        [SquareDir::North, SquareDir::East, SquareDir::South, SquareDir::West];

    fn index(self) -> usize {
        match self {
            SquareDir::North => 0,
            SquareDir::East => 1,
            SquareDir::South => 2,
            SquareDir::West => 3,
        }
    }

    /// Rotate a quarter turn clockwise.
    pub fn clockwise(self) -> Self {
        Self::CLOCKWISE[(self.index() + 1) % 4]
    }

    /// Rotate a quarter turn counterclockwise.
    pub fn counterclockwise(self) -> Self {
        Self::CLOCKWISE[(self.index() + 3) % 4]
    }

    pub fn opposite(self) -> Self {
        Self::CLOCKWISE[(self.index() + 2) % 4]
    }

    /// Rotate clockwise by `quarters` quarter turns.
    pub fn rotated(self, quarters: usize) -> Self {
        Self::CLOCKWISE[(self.index() + quarters) % 4]
    }

    /// Clockwise quarter turns needed to go from `self` to `other`
    /// (0..=3; 2 is a reversal).
    pub fn quarter_turns_to(self, other: Self) -> usize {
        (other.index() + 4 - self.index()) % 4
    }

    /// Unit step in storage coordinates.
    pub fn step(self) -> (i32, i32) {
        match self {
            SquareDir::North => (0, 1),
            SquareDir::East => (1, 0),
            SquareDir::South => (0, -1),
            SquareDir::West => (-1, 0),
        }
    }

    /// Compact name used in trace records.
    pub fn name(self) -> &'static str {
        match self {
            SquareDir::North => "N",
            SquareDir::East => "E",
            SquareDir::South => "S",
            SquareDir::West => "W",
        }
    }
}

/// Neighbor cell one step in `dir` from `from` on a square grid.
pub fn step_in_direction(from: CellCoord, dir: SquareDir) -> CellCoord {
    let (dx, dy) = dir.step();
    from.offset(dx, dy)
}

/// The six movement directions on a hex grid, in clockwise order starting
/// from north-east. There is no due-north neighbor on an odd-row-offset hex
/// grid; north-east plays the role of "forward".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HexDir {
    NorthEast,
    East,
    SouthEast,
    SouthWest,
    West,
    NorthWest,
}

impl HexDir {
    /// All six directions in clockwise order starting north-east.
    pub const CLOCKWISE: [HexDir; 6] = [
        HexDir::NorthEast,
        HexDir::East,
        HexDir::SouthEast,
        HexDir::SouthWest,
        HexDir::West,
        HexDir::NorthWest,
    ];

    pub fn index(self) -> usize {
        match self {
            HexDir::NorthEast => 0,
            HexDir::East => 1,
            HexDir::SouthEast => 2,
            HexDir::SouthWest => 3,
            HexDir::West => 4,
            HexDir::NorthWest => 5,
        }
    }

    /// Next direction clockwise, wrapping at the end of the ring.
    pub fn clockwise(self) -> Self {
        Self::CLOCKWISE[(self.index() + 1) % 6]
    }

    /// Next direction counterclockwise, wrapping at the start of the ring.
    pub fn counterclockwise(self) -> Self {
        Self::CLOCKWISE[(self.index() + 5) % 6]
    }

    pub fn opposite(self) -> Self {
        Self::CLOCKWISE[(self.index() + 3) % 6]
    }

    /// Clockwise sixth turns needed to go from `self` to `other` (0..=5).
    pub fn sextant_turns_to(self, other: Self) -> usize {
        (other.index() + 6 - self.index()) % 6
    }

    /// Unit step in axial coordinates.
    pub fn axial_step(self) -> (i32, i32) {
        match self {
            HexDir::NorthEast => (0, 1),
            HexDir::East => (1, 0),
            HexDir::SouthEast => (1, -1),
            HexDir::SouthWest => (0, -1),
            HexDir::West => (-1, 0),
            HexDir::NorthWest => (-1, 1),
        }
    }

    /// Compact name used in trace records.
    pub fn name(self) -> &'static str {
        match self {
            HexDir::NorthEast => "NE",
            HexDir::East => "E",
            HexDir::SouthEast => "SE",
            HexDir::SouthWest => "SW",
            HexDir::West => "W",
            HexDir::NorthWest => "NW",
        }
    }
}

/// Neighbor cell one step in `dir` from `from` on a hex grid, computed in
/// axial space and returned in storage coordinates.
pub fn hex_step(from: CellCoord, dir: HexDir) -> CellCoord {
    let a = from.to_axial();
    let (dq, dr) = dir.axial_step();
    HexCoord::new(a.q + dq, a.r + dr).to_offset()
}

/// A robot's facing on either lattice flavor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Heading {
    Square(SquareDir),
    Hex(HexDir),
}

impl Heading {
    /// Compact name used in trace records ("N", "SW", ...).
    pub fn name(self) -> &'static str {
        match self {
            Heading::Square(d) => d.name(),
            Heading::Hex(d) => d.name(),
        }
    }

    /// Neighbor cell one step along this heading.
    pub fn step_from(self, c: CellCoord) -> CellCoord {
        match self {
            Heading::Square(d) => step_in_direction(c, d),
            Heading::Hex(d) => hex_step(c, d),
        }
    }
}

/// Heading that carries `from` to the adjacent cell `to`, or `None` if the
/// two cells are not lattice neighbors.
pub fn direction_between(
    from: CellCoord,
    to: CellCoord,
    tessellation: Tessellation,
) -> Option<Heading> {
    match tessellation {
        Tessellation::Square => {
            SquareDir::CLOCKWISE
                .iter()
                .find(|d| step_in_direction(from, **d) == to)
                .map(|d| Heading::Square(*d))
        }
        Tessellation::Hex => {
            HexDir::CLOCKWISE
                .iter()
                .find(|d| hex_step(from, **d) == to)
                .map(|d| Heading::Hex(*d))
        }
    }
}

/// Errors from grid construction and mutation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimensions must be at least 1x1, got {width}x{height}")]
    EmptyDimensions { width: i32, height: i32 },
    #[error("obstacle at ({x}, {y}) lies outside the {width}x{height} grid")]
    ObstacleOutOfBounds { x: i32, y: i32, width: i32, height: i32 },
    #[error("cell ({x}, {y}) lies outside the {width}x{height} grid")]
    OutOfBounds { x: i32, y: i32, width: i32, height: i32 },
}

/// Read access to cell states. Implemented by the ground-truth [`Grid`] and
/// by the partial views used in fog-of-war mode, so the navigation step can
/// run against either.
pub trait CellLookup {
    /// State at `coord`; out-of-bounds coordinates read as obstacles.
    fn state(&self, coord: CellCoord) -> CellState;
    /// `(width, height)` of the underlying footprint.
    fn dims(&self) -> (i32, i32);

    fn in_bounds(&self, coord: CellCoord) -> bool {
        let (w, h) = self.dims();
        coord.x >= 0 && coord.x < w && coord.y >= 0 && coord.y < h
    }
}

/// Dense rectangular cell lattice.
///
/// A grid is treated as an immutable snapshot while a tick is being decided;
/// mutation (robot placement, commits, scenario edits) happens between
/// decision phases through [`Grid::set_state`].
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    tessellation: Tessellation,
    width: i32,
    height: i32,
    cells: Vec<CellState>,
}

impl Grid {
    /// Build a grid with the given obstacles; every other cell starts free.
    pub fn new(
        width: i32,
        height: i32,
        tessellation: Tessellation,
        obstacles: &[CellCoord],
    ) -> Result<Grid, GridError> {
        if width < 1 || height < 1 {
            return Err(GridError::EmptyDimensions { width, height });
        }
        let mut grid = Grid {
            tessellation,
            width,
            height,
            cells: vec![CellState::Free; (width as usize) * (height as usize)],
        };
        for &c in obstacles {
            if !grid.in_bounds(c) {
                return Err(GridError::ObstacleOutOfBounds {
                    x: c.x,
                    y: c.y,
                    width,
                    height,
                });
            }
            let i = grid.index(c);
            grid.cells[i] = CellState::Obstacle;
        }
        Ok(grid)
    }

    fn index(&self, c: CellCoord) -> usize {
        (c.y as usize) * (self.width as usize) + (c.x as usize)
    }

    pub fn tessellation(&self) -> Tessellation {
        self.tessellation
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    /// Overwrite one cell. Used for robot placement, move commits, and
    /// scenario edits; rejects out-of-bounds coordinates.
    pub fn set_state(&mut self, coord: CellCoord, state: CellState) -> Result<(), GridError> {
        if !self.in_bounds(coord) {
            return Err(GridError::OutOfBounds {
                x: coord.x,
                y: coord.y,
                width: self.width,
                height: self.height,
            });
        }
        let i = self.index(coord);
        self.cells[i] = state;
        Ok(())
    }

    /// Coordinates of every cell holding a robot, in row-major order.
    pub fn active_cells(&self) -> Vec<(CellCoord, RobotId)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                let c = CellCoord::new(x, y);
                if let CellState::Active(id) = self.state(c) {
                    out.push((c, id));
                }
            }
        }
        out
    }
}

impl CellLookup for Grid {
    fn state(&self, coord: CellCoord) -> CellState {
        if self.in_bounds(coord) {
            self.cells[self.index(coord)]
        } else {
            CellState::Obstacle
        }
    }

    fn dims(&self) -> (i32, i32) {
        (self.width, self.height)
    }
}

/// Tracks the distinct cells a decision touched, so locality guarantees can
/// be asserted rather than assumed. The sets involved are tiny (at most 13
/// cells), so a linear scan beats any hashing.
#[derive(Default, Debug)]
pub struct ReadTally {
    coords: Vec<CellCoord>,
}

impl ReadTally {
    pub fn new() -> Self {
        ReadTally::default()
    }

    /// Read one cell through the tally.
    pub fn read<L: CellLookup + ?Sized>(&mut self, src: &L, coord: CellCoord) -> CellState {
        if !self.coords.contains(&coord) {
            self.coords.push(coord);
        }
        src.state(coord)
    }

    /// Number of distinct cells read so far.
    pub fn distinct_cells(&self) -> usize {
        self.coords.len()
    }
}

/// The cells a square-lattice robot examines around its own cell, rotated so
/// that slot 1 points along `frame`.
///
/// Ring 1 holds the four edge-adjacent candidates in clockwise order from the
/// frame direction. Ring 2 holds the eight surrounding look-ahead cells,
/// clockwise and interleaved: even indexes are the straight-onward cells two
/// steps out from each candidate, odd indexes are the diagonal corners
/// between consecutive candidates.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodView {
    pub origin: CellCoord,
    pub frame: SquareDir,
    pub ring1: [CellState; 4],
    pub ring2: [CellState; 8],
}

impl NeighborhoodView {
    /// World direction of candidate `i` (1-based, clockwise from the frame).
    pub fn direction_of(&self, i: usize) -> SquareDir {
        debug_assert!((1..=4).contains(&i));
        self.frame.rotated(i - 1)
    }

    /// Coordinate of candidate `i`.
    pub fn candidate_coord(&self, i: usize) -> CellCoord {
        step_in_direction(self.origin, self.direction_of(i))
    }

    /// State of candidate `i`.
    pub fn ring1_state(&self, i: usize) -> CellState {
        debug_assert!((1..=4).contains(&i));
        self.ring1[i - 1]
    }

    /// Straight-onward cell two steps out along candidate `i`'s direction.
    pub fn ahead_of(&self, i: usize) -> CellState {
        debug_assert!((1..=4).contains(&i));
        self.ring2[2 * (i - 1)]
    }

    /// Ring-2 state addressed in frame coordinates, where `+fy` is the frame
    /// direction and `+fx` is its clockwise neighbor. Valid offsets are the
    /// eight ring-2 positions.
    pub fn ring2_at(&self, fx: i32, fy: i32) -> CellState {
        let idx = match (fx, fy) {
            (0, 2) => 0,
            (1, 1) => 1,
            (2, 0) => 2,
            (1, -1) => 3,
            (0, -2) => 4,
            (-1, -1) => 5,
            (-2, 0) => 6,
            (-1, 1) => 7,
            other => panic!("({}, {}) is not a ring-2 offset", other.0, other.1),
        };
        self.ring2[idx]
    }
}

/// Extract the twelve-cell neighborhood around `origin`, rotated to `frame`.
/// Out-of-bounds cells read as obstacles.
pub fn neighborhood<L: CellLookup + ?Sized>(
    src: &L,
    origin: CellCoord,
    frame: SquareDir,
) -> NeighborhoodView {
    let mut tally = ReadTally::new();
    neighborhood_tallied(src, origin, frame, &mut tally)
}

/// [`neighborhood`] variant that counts its reads into `tally`. Exactly
/// twelve distinct cells are read; the origin itself is not.
pub fn neighborhood_tallied<L: CellLookup + ?Sized>(
    src: &L,
    origin: CellCoord,
    frame: SquareDir,
    tally: &mut ReadTally,
) -> NeighborhoodView {
    let mut ring1 = [CellState::Free; 4];
    let mut ring2 = [CellState::Free; 8];
    for i in 0..4 {
        let dir = frame.rotated(i);
        let (dx, dy) = dir.step();
        ring1[i] = tally.read(src, origin.offset(dx, dy));
        ring2[2 * i] = tally.read(src, origin.offset(2 * dx, 2 * dy));
        let (ex, ey) = frame.rotated(i + 1).step();
        ring2[2 * i + 1] = tally.read(src, origin.offset(dx + ex, dy + ey));
    }
    NeighborhoodView {
        origin,
        frame,
        ring1,
        ring2,
    }
}

/// States of the six hex neighbors of `origin`, clockwise from north-east.
pub fn hex_neighbors<L: CellLookup + ?Sized>(src: &L, origin: CellCoord) -> [CellState; 6] {
    let mut tally = ReadTally::new();
    hex_neighbors_tallied(src, origin, &mut tally)
}

/// [`hex_neighbors`] variant that counts its reads into `tally`. Exactly six
/// distinct cells are read.
pub fn hex_neighbors_tallied<L: CellLookup + ?Sized>(
    src: &L,
    origin: CellCoord,
    tally: &mut ReadTally,
) -> [CellState; 6] {
    let mut ring = [CellState::Free; 6];
    for (i, dir) in HexDir::CLOCKWISE.iter().enumerate() {
        ring[i] = tally.read(src, hex_step(origin, *dir));
    }
    ring
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i32, y: i32) -> CellCoord {
        CellCoord::new(x, y)
    }

    #[test]
    fn empty_grid_is_all_free() {
        let g = Grid::new(8, 8, Tessellation::Square, &[]).unwrap();
        for y in 0..8 {
            for x in 0..8 {
                assert_eq!(g.state(c(x, y)), CellState::Free);
            }
        }
    }

    #[test]
    fn obstacle_lands_where_placed() {
        let g = Grid::new(3, 3, Tessellation::Square, &[c(1, 1)]).unwrap();
        assert_eq!(g.state(c(1, 1)), CellState::Obstacle);
        assert_eq!(g.state(c(0, 1)), CellState::Free);
    }

    #[test]
    fn out_of_bounds_obstacle_is_rejected_with_its_coordinate() {
        let err = Grid::new(3, 3, Tessellation::Square, &[c(3, 0)]).unwrap_err();
        assert_eq!(
            err,
            GridError::ObstacleOutOfBounds {
                x: 3,
                y: 0,
                width: 3,
                height: 3
            }
        );
        assert!(err.to_string().contains("(3, 0)"));
    }

    #[test]
    fn zero_sized_grids_are_rejected() {
        assert!(matches!(
            Grid::new(0, 4, Tessellation::Square, &[]),
            Err(GridError::EmptyDimensions { .. })
        ));
    }

    #[test]
    fn off_grid_reads_are_obstacles() {
        let g = Grid::new(4, 4, Tessellation::Square, &[]).unwrap();
        assert_eq!(g.state(c(-1, 0)), CellState::Obstacle);
        assert_eq!(g.state(c(0, 4)), CellState::Obstacle);
        assert_eq!(g.state(c(4, 4)), CellState::Obstacle);
    }

    #[test]
    fn delta_components_subtract() {
        assert_eq!(
            delta_to(c(2, 2), c(5, 7), Tessellation::Square),
            DeltaVector::new(3, 5)
        );
        assert_eq!(
            delta_to(c(4, 4), c(4, 4), Tessellation::Square),
            DeltaVector::new(0, 0)
        );
    }

    #[test]
    fn square_steps_move_one_cell() {
        assert_eq!(step_in_direction(c(3, 3), SquareDir::North), c(3, 4));
        assert_eq!(step_in_direction(c(3, 3), SquareDir::West), c(2, 3));
        for dir in SquareDir::CLOCKWISE {
            let there = step_in_direction(c(3, 3), dir);
            assert_eq!(step_in_direction(there, dir.opposite()), c(3, 3));
        }
    }

    #[test]
    fn hex_ring_wraps_cleanly() {
        assert_eq!(HexDir::NorthEast.counterclockwise(), HexDir::NorthWest);
        assert_eq!(HexDir::NorthWest.clockwise(), HexDir::NorthEast);
        for dir in HexDir::CLOCKWISE {
            let there = hex_step(c(5, 5), dir);
            assert_eq!(hex_step(there, dir.opposite()), c(5, 5));
        }
    }

    #[test]
    fn hex_neighbor_steps_are_the_documented_ring() {
        // From an even row: NE keeps the column, NW shifts west.
        assert_eq!(hex_step(c(3, 2), HexDir::NorthEast), c(3, 3));
        assert_eq!(hex_step(c(3, 2), HexDir::NorthWest), c(2, 3));
        // From an odd row the same axial steps shift east instead.
        assert_eq!(hex_step(c(3, 3), HexDir::NorthEast), c(4, 4));
        assert_eq!(hex_step(c(3, 3), HexDir::NorthWest), c(3, 4));
    }

    #[test]
    fn neighborhood_counts_and_states_on_open_ground() {
        let g = Grid::new(5, 5, Tessellation::Square, &[]).unwrap();
        let mut tally = ReadTally::new();
        let view = neighborhood_tallied(&g, c(2, 2), SquareDir::North, &mut tally);
        assert_eq!(tally.distinct_cells(), 12);
        assert!(view.ring1.iter().all(|s| s.is_free()));
        assert!(view.ring2.iter().all(|s| s.is_free()));
    }

    #[test]
    fn neighborhood_sees_the_edge_as_obstacles() {
        let g = Grid::new(5, 5, Tessellation::Square, &[]).unwrap();
        let view = neighborhood(&g, c(0, 0), SquareDir::North);
        // South and west candidates are off-grid.
        assert_eq!(view.ring1_state(3), CellState::Obstacle);
        assert_eq!(view.ring1_state(4), CellState::Obstacle);
        assert_eq!(view.ring1_state(1), CellState::Free);
        assert_eq!(view.ring1_state(2), CellState::Free);
    }

    #[test]
    fn neighborhood_reports_an_obstacle_ahead() {
        let g = Grid::new(5, 5, Tessellation::Square, &[c(2, 3)]).unwrap();
        let view = neighborhood(&g, c(2, 2), SquareDir::North);
        assert_eq!(view.ring1_state(1), CellState::Obstacle);
        assert_eq!(view.ahead_of(1), CellState::Free);
    }

    #[test]
    fn reframing_rotates_the_rings() {
        let g = Grid::new(7, 7, Tessellation::Square, &[c(3, 4), c(5, 3), c(4, 2)]).unwrap();
        let north = neighborhood(&g, c(3, 3), SquareDir::North);
        let east = neighborhood(&g, c(3, 3), SquareDir::East);
        // Candidate 1 in the east frame is candidate 2 in the north frame.
        for i in 0..4 {
            assert_eq!(east.ring1[i], north.ring1[(i + 1) % 4]);
        }
        for i in 0..8 {
            assert_eq!(east.ring2[i], north.ring2[(i + 2) % 8]);
        }
        // Rotation permutes but never changes the multiset of states.
        let mut a: Vec<_> = north.ring2.to_vec();
        let mut b: Vec<_> = east.ring2.to_vec();
        let key = |s: &CellState| match s {
            CellState::Free => 0u8,
            CellState::Obstacle => 1,
            CellState::Active(id) => 2 + id.0,
        };
        a.sort_by_key(key);
        b.sort_by_key(key);
        assert_eq!(a, b);
    }

    #[test]
    fn hex_neighbors_read_exactly_six_cells() {
        let g = Grid::new(5, 5, Tessellation::Hex, &[]).unwrap();
        let mut tally = ReadTally::new();
        let ring = hex_neighbors_tallied(&g, c(2, 2), &mut tally);
        assert_eq!(tally.distinct_cells(), 6);
        assert!(ring.iter().all(|s| s.is_free()));
    }

    #[test]
    fn hex_corner_sees_the_boundary() {
        let g = Grid::new(5, 5, Tessellation::Hex, &[]).unwrap();
        let ring = hex_neighbors(&g, c(0, 0));
        assert_eq!(ring[HexDir::SouthWest.index()], CellState::Obstacle);
        assert_eq!(ring[HexDir::West.index()], CellState::Obstacle);
        assert_eq!(ring[HexDir::NorthEast.index()], CellState::Free);
    }

    #[test]
    fn lattice_distances() {
        assert_eq!(lattice_distance(c(0, 0), c(3, 4), Tessellation::Square), 7);
        // One NE step then one E step in axial space.
        let a = c(2, 2);
        let b = hex_step(hex_step(a, HexDir::NorthEast), HexDir::East);
        assert_eq!(lattice_distance(a, b, Tessellation::Hex), 2);
    }

    #[test]
    fn direction_between_recognizes_neighbors_only() {
        assert_eq!(
            direction_between(c(2, 2), c(2, 3), Tessellation::Square),
            Some(Heading::Square(SquareDir::North))
        );
        assert_eq!(direction_between(c(2, 2), c(3, 3), Tessellation::Square), None);
        assert_eq!(direction_between(c(2, 2), c(2, 2), Tessellation::Square), None);
        for dir in HexDir::CLOCKWISE {
            let to = hex_step(c(4, 3), dir);
            assert_eq!(
                direction_between(c(4, 3), to, Tessellation::Hex),
                Some(Heading::Hex(dir))
            );
        }
    }

    #[test]
    fn read_tally_counts_distinct_cells_once() {
        let g = Grid::new(4, 4, Tessellation::Square, &[]).unwrap();
        let mut tally = ReadTally::new();
        tally.read(&g, c(1, 1));
        tally.read(&g, c(1, 1));
        tally.read(&g, c(2, 1));
        assert_eq!(tally.distinct_cells(), 2);
    }
}
