//! End-to-end simulation driver: parse inputs, run the fleet with timed
//! scenario events, and collect every artifact (trace, summary, exit code).

use crate::map_file::{parse_map, MapError, ParsedMap};
use crate::scenario::{parse_scenario, ScenarioAction, ScenarioError};
use cellnav_core::{
    new_fleet, tick_fleet, traces_to_jsonl, EngineError, FleetConfig, FleetWorld,
    NavigationResult, RobotAgent, RunOutcome, StepTrace, Tessellation,
};
use std::fmt::Write as _;
use thiserror::Error;

/// Everything that shapes a run besides the map and scenario text.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub tessellation: Tessellation,
    /// Receiver-cell update rule; 136 or 172.
    pub rule: u8,
    /// Plan from sensed cells only instead of the full map.
    pub fog: bool,
    /// Tick budget; defaults to 4 * width * height.
    pub max_ticks: Option<u32>,
    /// Recorded in the summary and used by replay tooling; the simulation
    /// itself is deterministic.
    pub seed: u64,
    pub d_min: u32,
    pub strict_separation: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tessellation: Tessellation::Square,
            rule: 136,
            fog: false,
            max_ticks: None,
            seed: 0,
            d_min: 1,
            strict_separation: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("map")]
    Map(#[from] MapError),
    #[error("grid")]
    Grid(#[from] cellnav_core::GridError),
    #[error("scenario")]
    Scenario(#[from] ScenarioError),
    #[error("engine")]
    Engine(#[from] EngineError),
    #[error("map declares no robots (need S/F marks or digit/letter pairs)")]
    NoRobots,
    #[error("rule {0} is not supported; choose 136 or 172")]
    UnsupportedRule(u8),
    #[error("scenario event at tick {tick}")]
    Event { tick: u32, source: EngineError },
}

/// The finished run: world state for rendering, per-robot results, the
/// step-by-step trace, and the preformatted text artifacts.
#[derive(Debug)]
pub struct RunArtifacts {
    pub world: FleetWorld,
    pub results: Vec<NavigationResult>,
    pub traces: Vec<StepTrace>,
    pub trace_jsonl: String,
    pub summary: String,
    /// 0 when every robot reached its target, 2 otherwise.
    pub exit_code: i32,
}

fn mode_name(fog: bool) -> &'static str {
    if fog {
        "fog"
    } else {
        "known"
    }
}

fn tessellation_name(t: Tessellation) -> &'static str {
    match t {
        Tessellation::Square => "square",
        Tessellation::Hex => "hex",
    }
}

fn build_world(parsed: &ParsedMap, config: &RunConfig) -> Result<FleetWorld, RunError> {
    let grid = parsed.grid(config.tessellation)?;
    let agents: Vec<RobotAgent> = parsed
        .robots
        .iter()
        .map(|spec| {
            let mut agent = RobotAgent::new(spec.id, spec.start, spec.target, config.tessellation);
            if config.fog {
                agent.enable_fog(parsed.width, parsed.height);
            }
            agent
        })
        .collect();
    Ok(new_fleet(
        grid,
        agents,
        FleetConfig {
            rule: config.rule,
            d_min: config.d_min,
            strict_separation: config.strict_separation,
        },
    )?)
}

/// Run a map (optionally under a scenario script) to completion.
pub fn run(
    map_text: &str,
    scenario_text: Option<&str>,
    config: &RunConfig,
) -> Result<RunArtifacts, RunError> {
    if config.rule != 136 && config.rule != 172 {
        return Err(RunError::UnsupportedRule(config.rule));
    }
    let parsed = parse_map(map_text)?;
    if parsed.robots.is_empty() {
        return Err(RunError::NoRobots);
    }
    let events = match scenario_text {
        Some(text) => parse_scenario(text)?,
        None => Vec::new(),
    };
    let mut world = build_world(&parsed, config)?;
    let max_ticks = config
        .max_ticks
        .unwrap_or((4 * parsed.width * parsed.height) as u32);

    let mut traces = Vec::new();
    let mut pending = events.iter().peekable();
    loop {
        // Scripted events land at the start of their tick, before planning.
        while let Some(event) = pending.peek() {
            if event.tick > world.tick {
                break;
            }
            let applied = match event.action {
                ScenarioAction::AddObstacle(cell) => world.add_obstacle(cell),
                ScenarioAction::RemoveObstacle(cell) => world.remove_obstacle(cell),
                ScenarioAction::Retarget { robot, target } => world.retarget_robot(robot, target),
            };
            applied.map_err(|source| RunError::Event {
                tick: event.tick,
                source,
            })?;
            pending.next();
        }
        if world.any_moving() {
            if world.tick >= max_ticks {
                break;
            }
            traces.extend(tick_fleet(&mut world));
        } else if let Some(event) = pending.peek() {
            if event.tick > max_ticks {
                break;
            }
            // Nobody is moving; idle time passes until the next scripted
            // event (which may revive an arrived robot via retarget).
            world.tick = event.tick;
        } else {
            break;
        }
    }
    world.seal_remaining();

    let results = world.results();
    let exit_code = if results.iter().all(|r| r.outcome == RunOutcome::Reached) {
        0
    } else {
        2
    };
    let trace_jsonl = traces_to_jsonl(&traces);
    let summary = render_summary(&world, &results, config, exit_code);
    Ok(RunArtifacts {
        world,
        results,
        traces,
        trace_jsonl,
        summary,
        exit_code,
    })
}

fn render_summary(
    world: &FleetWorld,
    results: &[NavigationResult],
    config: &RunConfig,
    exit_code: i32,
) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "tessellation: {}",
        tessellation_name(config.tessellation)
    )
    .unwrap();
    writeln!(out, "rule: {}", config.rule).unwrap();
    writeln!(out, "mode: {}", mode_name(config.fog)).unwrap();
    writeln!(out, "seed: {}", config.seed).unwrap();
    writeln!(out, "ticks: {}", world.tick).unwrap();
    for (robot, result) in world.robots.iter().zip(results) {
        writeln!(
            out,
            "robot {}: outcome={} ticks={} path_cells={} revolutions={:.6}",
            robot.id.0,
            result.outcome,
            result.ticks,
            result.path.len(),
            robot.odometer.total_revolutions()
        )
        .unwrap();
    }
    writeln!(
        out,
        "separation_violations: {}",
        world.separation_log.len()
    )
    .unwrap();
    writeln!(out, "intersections: {}", world.intersections.len()).unwrap();
    writeln!(out, "exit: {exit_code}").unwrap();
    out
}
