//! Timed world-event scripts.
//!
//! Each line is one event, whitespace separated:
//!
//! ```text
//! TICK add X Y          % place an obstacle at (X, Y)
//! TICK remove X Y       % clear the obstacle at (X, Y)
//! TICK retarget R X Y   % give robot R the new target (X, Y)
//! ```
//!
//! Ticks must be nondecreasing. `%` comments and blank lines are allowed.
//! Events are applied at the start of their tick, before robots plan.

use cellnav_core::{CellCoord, RobotId};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioAction {
    AddObstacle(CellCoord),
    RemoveObstacle(CellCoord),
    Retarget { robot: RobotId, target: CellCoord },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScenarioEvent {
    pub tick: u32,
    pub action: ScenarioAction,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error(
        "line {line}: expected `TICK add X Y`, `TICK remove X Y`, or `TICK retarget ROBOT X Y`"
    )]
    Malformed { line: usize },
    #[error("line {line}: {field} `{value}` is not a valid number")]
    BadNumber {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: tick {tick} is earlier than the previous event's tick {previous}")]
    NonMonotonic {
        line: usize,
        tick: u32,
        previous: u32,
    },
}

fn number<T: std::str::FromStr>(
    token: &str,
    field: &'static str,
    line: usize,
) -> Result<T, ScenarioError> {
    token.parse().map_err(|_| ScenarioError::BadNumber {
        line,
        field,
        value: token.to_string(),
    })
}

pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioEvent>, ScenarioError> {
    let mut events = Vec::new();
    let mut previous: Option<u32> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('%').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let tick: u32 = number(tokens[0], "tick", line)?;
        let action = match (tokens.get(1).copied(), tokens.len()) {
            (Some("add"), 4) => ScenarioAction::AddObstacle(CellCoord::new(
                number(tokens[2], "x", line)?,
                number(tokens[3], "y", line)?,
            )),
            (Some("remove"), 4) => ScenarioAction::RemoveObstacle(CellCoord::new(
                number(tokens[2], "x", line)?,
                number(tokens[3], "y", line)?,
            )),
            (Some("retarget"), 5) => ScenarioAction::Retarget {
                robot: RobotId(number(tokens[2], "robot", line)?),
                target: CellCoord::new(
                    number(tokens[3], "x", line)?,
                    number(tokens[4], "y", line)?,
                ),
            },
            _ => return Err(ScenarioError::Malformed { line }),
        };
        if let Some(prev) = previous {
            if tick < prev {
                return Err(ScenarioError::NonMonotonic {
                    line,
                    tick,
                    previous: prev,
                });
            }
        }
        previous = Some(tick);
        events.push(ScenarioEvent { tick, action });
    }
    Ok(events)
}
