//! Text map parsing.
//!
//! One character per cell: `.` free, `#` obstacle. A single robot is
//! written `S` (start) and `F` (target); a fleet uses digits `0`–`9` for
//! starts and the matching letters `a`–`j` for targets. Lines run top to
//! bottom with *decreasing* y, so the last line of the file is the y = 0
//! row. `%` begins a comment that runs to the end of the line; blank lines
//! (and lines that were all comment) are skipped. Diagnostics carry
//! physical 1-based line and column numbers from the original text.

use cellnav_core::{CellCoord, Grid, GridError, RobotId, Tessellation};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("line {line}, column {col}: unknown map symbol '{symbol}'")]
    UnknownSymbol { line: usize, col: usize, symbol: char },
    #[error("line {line}: row is {got} cells wide, expected {expected}")]
    RaggedRow {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}, column {col}: start '{symbol}' appears more than once")]
    DuplicateStart { line: usize, col: usize, symbol: char },
    #[error("line {line}, column {col}: target '{symbol}' appears more than once")]
    DuplicateTarget { line: usize, col: usize, symbol: char },
    #[error("line {line}, column {col}: cannot mix 'S'/'F' with numbered robots")]
    MixedNotation { line: usize, col: usize },
    #[error("robot {robot} has a start but no matching target letter")]
    MissingTarget { robot: u8 },
    #[error("robot {robot} has a target letter but no matching start digit")]
    MissingStart { robot: u8 },
    #[error("map has no cells")]
    EmptyMap,
}

/// One robot declared by the map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RobotSpec {
    pub id: RobotId,
    pub start: CellCoord,
    pub target: CellCoord,
}

/// Everything a map file declares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedMap {
    pub width: i32,
    pub height: i32,
    pub obstacles: Vec<CellCoord>,
    /// Robots in ascending id order. May be empty (a bare terrain map).
    pub robots: Vec<RobotSpec>,
}

impl ParsedMap {
    /// Materialize the terrain as a grid (robots are placed separately).
    pub fn grid(&self, tessellation: Tessellation) -> Result<Grid, GridError> {
        Grid::new(self.width, self.height, tessellation, &self.obstacles)
    }
}

pub fn parse_map(text: &str) -> Result<ParsedMap, MapError> {
    // Keep only content rows, remembering their physical line numbers.
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('%').next().unwrap_or("").trim_end();
        if !content.is_empty() {
            rows.push((i + 1, content));
        }
    }
    if rows.is_empty() {
        return Err(MapError::EmptyMap);
    }
    let width = rows[0].1.chars().count();
    for &(line, content) in &rows {
        let got = content.chars().count();
        if got != width {
            return Err(MapError::RaggedRow {
                line,
                expected: width,
                got,
            });
        }
    }

    let height = rows.len();
    let mut obstacles = Vec::new();
    let mut starts: [Option<CellCoord>; 10] = [None; 10];
    let mut targets: [Option<CellCoord>; 10] = [None; 10];
    let mut saw_single_notation = false;
    let mut saw_numbered_notation = false;

    for (row_index, &(line, content)) in rows.iter().enumerate() {
        let y = (height - 1 - row_index) as i32;
        for (col_index, symbol) in content.chars().enumerate() {
            let cell = CellCoord::new(col_index as i32, y);
            let col = col_index + 1;
            match symbol {
                '.' => {}
                '#' => obstacles.push(cell),
                'S' | 'F' | '0'..='9' | 'a'..='j' => {
                    let numbered = !matches!(symbol, 'S' | 'F');
                    if numbered && saw_single_notation || !numbered && saw_numbered_notation {
                        return Err(MapError::MixedNotation { line, col });
                    }
                    saw_single_notation |= !numbered;
                    saw_numbered_notation |= numbered;
                    let (slot, is_start) = match symbol {
                        'S' => (0, true),
                        'F' => (0, false),
                        '0'..='9' => ((symbol as u8 - b'0') as usize, true),
                        _ => ((symbol as u8 - b'a') as usize, false),
                    };
                    if is_start {
                        if starts[slot].replace(cell).is_some() {
                            return Err(MapError::DuplicateStart { line, col, symbol });
                        }
                    } else if targets[slot].replace(cell).is_some() {
                        return Err(MapError::DuplicateTarget { line, col, symbol });
                    }
                }
                other => {
                    return Err(MapError::UnknownSymbol {
                        line,
                        col,
                        symbol: other,
                    })
                }
            }
        }
    }

    let mut robots = Vec::new();
    for id in 0..10u8 {
        match (starts[id as usize], targets[id as usize]) {
            (Some(start), Some(target)) => robots.push(RobotSpec {
                id: RobotId(id),
                start,
                target,
            }),
            (Some(_), None) => return Err(MapError::MissingTarget { robot: id }),
            (None, Some(_)) => return Err(MapError::MissingStart { robot: id }),
            (None, None) => {}
        }
    }

    Ok(ParsedMap {
        width: width as i32,
        height: height as i32,
        obstacles,
        robots,
    })
}
