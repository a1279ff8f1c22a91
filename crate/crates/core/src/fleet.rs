//! Synchronous multi-robot stepping.
//!
//! All robots decide simultaneously against a frozen snapshot of the grid,
//! then the fleet commits the surviving moves atomically. Because every
//! robot reads every other robot as a blocked cell, no one ever proposes a
//! move into an occupied cell; the only conflicts left are two robots
//! claiming the same empty cell, which the lower id wins. Losers hold for a
//! tick and replan. A robot blocked only by walls deadlocks immediately (a
//! wall will never move); one blocked by robots waits, and the recurrence
//! counter turns an endless wait into a deadlock.
//!
//! The world keeps two cross-robot observations: *intersections* — a robot
//! entering a cell some other robot has already visited — and *separation
//! violations* — pairs of robots closer than the configured minimum
//! distance. Violations are logged after every tick; with strict separation
//! enabled the fleet instead refuses moves that would land inside another
//! robot's envelope.

use std::collections::{BTreeMap, BTreeSet};

use crate::ca_nav::{
    apply_move, check_in_bounds, move_trace, propose_move, stay_trace, validate_endpoints,
    EngineError, NavigationResult, Proposal, ProposalKind, RobotAgent, RobotStatus, RunOutcome,
    StepTrace,
};
use crate::lattice::{
    lattice_distance, CellCoord, CellLookup, CellState, Grid, Heading, RobotId,
};

/// Fleet-wide settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FleetConfig {
    /// Acceptance rule for receiving cells.
    pub rule: u8,
    /// Minimum robot-to-robot lattice distance considered safe.
    pub d_min: u32,
    /// When set, moves that would violate `d_min` are refused instead of
    /// merely logged.
    pub strict_separation: bool,
}

impl Default for FleetConfig {
    fn default() -> FleetConfig {
        FleetConfig {
            rule: 136,
            d_min: 1,
            strict_separation: false,
        }
    }
}

/// A robot entered a cell that another robot had already visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntersectionRecord {
    pub tick: u32,
    pub robot: RobotId,
    pub cell: CellCoord,
    /// The earliest visitor of the cell (which may be the entering robot
    /// itself, if it got there first and someone else passed through since).
    pub first_visitor: RobotId,
}

/// Two robots closer than the configured minimum distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationViolation {
    pub a: RobotId,
    pub b: RobotId,
    pub distance: u32,
}

/// The shared grid, the robots on it, and everything observed so far.
#[derive(Clone, Debug)]
pub struct FleetWorld {
    pub grid: Grid,
    pub robots: Vec<RobotAgent>,
    pub config: FleetConfig,
    /// Ticks elapsed.
    pub tick: u32,
    /// Every cross-robot cell re-entry observed, in commit order.
    pub intersections: Vec<IntersectionRecord>,
    /// Separation violations observed after each tick, labeled with it.
    pub separation_log: Vec<(u32, SeparationViolation)>,
    cell_visitors: BTreeMap<CellCoord, Vec<RobotId>>,
}

/// Validate and place a fleet. Robots are placed in the order given; each
/// start must be a free cell (two robots sharing one is reported as a
/// duplicate start) and each target must not be an obstacle. Targets may
/// coincide — contention is resolved at run time.
pub fn new_fleet(
    grid: Grid,
    agents: Vec<RobotAgent>,
    config: FleetConfig,
) -> Result<FleetWorld, EngineError> {
    let mut ids = BTreeSet::new();
    for agent in &agents {
        debug_assert_eq!(
            agent.tessellation,
            grid.tessellation(),
            "agents must be built for the fleet's tessellation"
        );
        if !ids.insert(agent.id) {
            return Err(EngineError::DuplicateId(agent.id.0));
        }
    }
    let mut world = FleetWorld {
        grid,
        robots: agents,
        config,
        tick: 0,
        intersections: Vec::new(),
        separation_log: Vec::new(),
        cell_visitors: BTreeMap::new(),
    };
    for i in 0..world.robots.len() {
        let (id, start, target) = {
            let a = &world.robots[i];
            (a.id, a.cell, a.target)
        };
        check_in_bounds(&world.grid, start)?;
        check_in_bounds(&world.grid, target)?;
        if let CellState::Active(other) = world.grid.state(start) {
            return Err(EngineError::DuplicateStart {
                a: other.0,
                b: id.0,
                x: start.x,
                y: start.y,
            });
        }
        validate_endpoints(&world.grid, start, target)?;
        world
            .grid
            .set_state(start, CellState::Active(id))
            .expect("validated start");
        world.robots[i].begin();
        world.cell_visitors.entry(start).or_default().push(id);
    }
    Ok(world)
}

impl FleetWorld {
    /// Whether any robot still has work to do.
    pub fn any_moving(&self) -> bool {
        self.robots.iter().any(|r| r.status == RobotStatus::Moving)
    }

    /// Place an obstacle mid-run. Refused under a robot.
    pub fn add_obstacle(&mut self, cell: CellCoord) -> Result<(), EngineError> {
        check_in_bounds(&self.grid, cell)?;
        if let CellState::Active(id) = self.grid.state(cell) {
            return Err(EngineError::ObstacleOnRobot {
                id: id.0,
                x: cell.x,
                y: cell.y,
            });
        }
        self.grid
            .set_state(cell, CellState::Obstacle)
            .expect("checked bounds");
        Ok(())
    }

    /// Clear an obstacle mid-run. Clearing a cell that holds no obstacle
    /// changes nothing.
    pub fn remove_obstacle(&mut self, cell: CellCoord) -> Result<(), EngineError> {
        check_in_bounds(&self.grid, cell)?;
        if self.grid.state(cell) == CellState::Obstacle {
            self.grid
                .set_state(cell, CellState::Free)
                .expect("checked bounds");
        }
        Ok(())
    }

    /// Point a robot at a new target mid-run. An arrived robot starts moving
    /// again; a deadlocked one stays where it died.
    pub fn retarget_robot(&mut self, id: RobotId, target: CellCoord) -> Result<(), EngineError> {
        check_in_bounds(&self.grid, target)?;
        if self.grid.state(target) == CellState::Obstacle {
            return Err(EngineError::TargetBlocked {
                x: target.x,
                y: target.y,
            });
        }
        let robot = self
            .robots
            .iter_mut()
            .find(|r| r.id == id)
            .ok_or(EngineError::UnknownRobot(id.0))?;
        robot.retarget(target);
        Ok(())
    }

    /// Robot pairs currently closer than the safe distance.
    pub fn separation_violations(&self) -> Vec<SeparationViolation> {
        let mut out = Vec::new();
        for i in 0..self.robots.len() {
            for j in (i + 1)..self.robots.len() {
                let a = &self.robots[i];
                let b = &self.robots[j];
                let distance =
                    lattice_distance(a.cell, b.cell, self.grid.tessellation());
                if distance < self.config.d_min {
                    out.push(SeparationViolation {
                        a: a.id,
                        b: b.id,
                        distance,
                    });
                }
            }
        }
        out
    }

    /// Seal the odometers of robots that are still mid-run (used when a
    /// budget expires before they finish).
    pub fn seal_remaining(&mut self) {
        for robot in &mut self.robots {
            if robot.status == RobotStatus::Moving {
                let cell = robot.cell;
                robot.odometer.finish_at(cell);
            }
        }
    }

    /// Per-robot results in placement order, reading still-moving robots as
    /// out of budget.
    pub fn results(&self) -> Vec<NavigationResult> {
        self.robots
            .iter()
            .map(|r| NavigationResult {
                outcome: match r.status {
                    RobotStatus::Arrived => RunOutcome::Reached,
                    RobotStatus::Deadlocked => RunOutcome::Deadlocked,
                    _ => RunOutcome::BudgetExhausted,
                },
                ticks: r.moves,
                path: r.path.clone(),
            })
            .collect()
    }
}

enum TickOutcome {
    Move {
        from: CellCoord,
        to: CellCoord,
        heading: Heading,
        rule_applied: Option<u8>,
    },
    Hold,
    DeadlockNow,
    ArriveInPlace,
}

struct TickEntry {
    idx: usize,
    outcome: TickOutcome,
    examined: u8,
    cells_read: u8,
}

/// Advance the whole fleet one tick and return its trace rows (one per
/// robot that was still running, in placement order).
pub fn tick_fleet(world: &mut FleetWorld) -> Vec<StepTrace> {
    let tick = world.tick;
    let rule = world.config.rule;
    let mut entries: Vec<TickEntry> = Vec::new();

    // Phase 1: every running robot plans against the same frozen grid.
    for idx in 0..world.robots.len() {
        if world.robots[idx].status != RobotStatus::Moving {
            continue;
        }
        let Proposal {
            kind,
            examined,
            cells_read,
        } = propose_move(&world.grid, &mut world.robots[idx], rule);
        let outcome = match kind {
            ProposalKind::MoveTo {
                to,
                heading,
                rule_applied,
            } => TickOutcome::Move {
                from: world.robots[idx].cell,
                to,
                heading,
                rule_applied,
            },
            ProposalKind::Blocked { robot_adjacent } => {
                if robot_adjacent {
                    TickOutcome::Hold
                } else {
                    TickOutcome::DeadlockNow
                }
            }
            ProposalKind::AtTarget => TickOutcome::ArriveInPlace,
        };
        entries.push(TickEntry {
            idx,
            outcome,
            examined,
            cells_read,
        });
    }

    // Phase 2a: two robots claiming one cell — the lower id wins.
    let mut claims: BTreeMap<CellCoord, Vec<usize>> = BTreeMap::new();
    for (e, entry) in entries.iter().enumerate() {
        if let TickOutcome::Move { to, .. } = entry.outcome {
            claims.entry(to).or_default().push(e);
        }
    }
    for claimants in claims.values() {
        if claimants.len() < 2 {
            continue;
        }
        let winner = *claimants
            .iter()
            .min_by_key(|&&e| world.robots[entries[e].idx].id)
            .expect("non-empty claim group");
        for &e in claimants {
            if e != winner {
                entries[e].outcome = TickOutcome::Hold;
            }
        }
    }

    // Phase 2b: position swaps. Unreachable through planning (an occupied
    // cell is never proposed), kept as a guard against future rule changes.
    let mover_dests: Vec<(usize, CellCoord, CellCoord)> = entries
        .iter()
        .enumerate()
        .filter_map(|(e, entry)| match entry.outcome {
            TickOutcome::Move { from, to, .. } => Some((e, from, to)),
            _ => None,
        })
        .collect();
    let mut swapped: BTreeSet<usize> = BTreeSet::new();
    for (i, &(ea, from_a, to_a)) in mover_dests.iter().enumerate() {
        for &(eb, from_b, to_b) in &mover_dests[i + 1..] {
            if to_a == from_b && to_b == from_a {
                swapped.insert(ea);
                swapped.insert(eb);
            }
        }
    }
    for e in swapped {
        entries[e].outcome = TickOutcome::Hold;
    }

    // Phase 2c: strict separation. In ascending id order, a move is kept
    // only if its destination clears every other robot's planned cell —
    // the accepted destination of an earlier mover, the current cell of
    // everyone else.
    if world.config.strict_separation {
        let mut planned: BTreeMap<RobotId, CellCoord> = world
            .robots
            .iter()
            .map(|r| (r.id, r.cell))
            .collect();
        let mut by_id: Vec<usize> = (0..entries.len())
            .filter(|&e| matches!(entries[e].outcome, TickOutcome::Move { .. }))
            .collect();
        by_id.sort_by_key(|&e| world.robots[entries[e].idx].id);
        for e in by_id {
            let id = world.robots[entries[e].idx].id;
            let to = match entries[e].outcome {
                TickOutcome::Move { to, .. } => to,
                _ => unreachable!("filtered to movers"),
            };
            let clear = planned.iter().all(|(&other, &cell)| {
                other == id
                    || lattice_distance(to, cell, world.grid.tessellation())
                        >= world.config.d_min
            });
            if clear {
                planned.insert(id, to);
            } else {
                entries[e].outcome = TickOutcome::Hold;
            }
        }
    }

    // Commit: clear every vacated cell, then occupy every destination, then
    // update the movers' own bookkeeping.
    for entry in &entries {
        if let TickOutcome::Move { from, .. } = entry.outcome {
            world
                .grid
                .set_state(from, CellState::Free)
                .expect("robot cells are in bounds");
        }
    }
    for entry in &entries {
        if let TickOutcome::Move { to, .. } = entry.outcome {
            let id = world.robots[entry.idx].id;
            world
                .grid
                .set_state(to, CellState::Active(id))
                .expect("destinations are in bounds");
        }
    }
    for entry in &entries {
        match entry.outcome {
            TickOutcome::Move { to, heading, .. } => {
                let robot = &mut world.robots[entry.idx];
                let id = robot.id;
                apply_move(robot, to, heading);
                let visitors = world.cell_visitors.entry(to).or_default();
                if visitors.iter().any(|&v| v != id) {
                    world.intersections.push(IntersectionRecord {
                        tick,
                        robot: id,
                        cell: to,
                        first_visitor: visitors[0],
                    });
                }
                if !visitors.contains(&id) {
                    visitors.push(id);
                }
            }
            TickOutcome::Hold => {
                world.robots[entry.idx].record_hold();
            }
            TickOutcome::DeadlockNow => {
                let robot = &mut world.robots[entry.idx];
                robot.status = RobotStatus::Deadlocked;
                let cell = robot.cell;
                robot.odometer.finish_at(cell);
            }
            TickOutcome::ArriveInPlace => {
                let robot = &mut world.robots[entry.idx];
                robot.status = RobotStatus::Arrived;
                let cell = robot.cell;
                robot.odometer.finish_at(cell);
            }
        }
    }

    let rows: Vec<StepTrace> = entries
        .iter()
        .map(|entry| {
            let robot = &world.robots[entry.idx];
            match entry.outcome {
                TickOutcome::Move {
                    from,
                    heading,
                    rule_applied,
                    ..
                } => move_trace(
                    tick,
                    robot,
                    from,
                    heading,
                    entry.examined,
                    rule_applied,
                    entry.cells_read,
                ),
                _ => stay_trace(tick, robot, entry.examined, entry.cells_read),
            }
        })
        .collect();

    for v in world.separation_violations() {
        world.separation_log.push((tick, v));
    }
    world.tick += 1;
    rows
}

/// Drive the whole fleet until every robot terminates or the tick budget
/// runs out. Returns per-robot results in placement order plus the full
/// interleaved trace.
pub fn run_fleet(
    world: &mut FleetWorld,
    max_ticks: u32,
) -> (Vec<NavigationResult>, Vec<StepTrace>) {
    let mut traces = Vec::new();
    while world.any_moving() && world.tick < max_ticks {
        traces.extend(tick_fleet(world));
    }
    world.seal_remaining();
    (world.results(), traces)
}

/// Intersection records as CSV: `tick,robot_id,x,y,first_visitor_id`.
pub fn intersections_csv(records: &[IntersectionRecord]) -> String {
    let mut out = String::from("tick,robot_id,x,y,first_visitor_id\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.tick, r.robot.0, r.cell.x, r.cell.y, r.first_visitor.0
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca_nav::{navigate, traces_to_jsonl};
    use crate::lattice::Tessellation;

    fn c(x: i32, y: i32) -> CellCoord {
        CellCoord::new(x, y)
    }

    fn agent(id: u8, start: CellCoord, target: CellCoord) -> RobotAgent {
        RobotAgent::new(RobotId(id), start, target, Tessellation::Square)
    }

    fn square_world(
        width: i32,
        height: i32,
        obstacles: &[CellCoord],
        agents: Vec<RobotAgent>,
        config: FleetConfig,
    ) -> FleetWorld {
        let grid = Grid::new(width, height, Tessellation::Square, obstacles).unwrap();
        new_fleet(grid, agents, config).unwrap()
    }

    #[test]
    fn disjoint_corridors_run_independently() {
        let mut world = square_world(
            6,
            5,
            &[],
            vec![agent(0, c(0, 0), c(5, 0)), agent(1, c(0, 4), c(5, 4))],
            FleetConfig::default(),
        );
        let (results, traces) = run_fleet(&mut world, 100);
        assert_eq!(results[0].outcome, RunOutcome::Reached);
        assert_eq!(results[1].outcome, RunOutcome::Reached);
        assert_eq!(results[0].ticks, 5);
        assert_eq!(results[1].ticks, 5);
        assert_eq!(world.tick, 5);
        assert_eq!(traces.len(), 10);
        assert!(world.intersections.is_empty());
        assert!(world.separation_log.is_empty());
    }

    #[test]
    fn contested_cell_goes_to_the_lower_id_and_the_loser_reroutes() {
        // A 3x3 crossing: robot 0 drives east along the middle row while
        // robot 1 drives north up the middle column. Both want (1, 1) on
        // the first tick.
        let mut world = square_world(
            3,
            3,
            &[],
            vec![agent(0, c(0, 1), c(2, 1)), agent(1, c(1, 0), c(1, 2))],
            FleetConfig::default(),
        );
        let (results, traces) = run_fleet(&mut world, 100);
        assert_eq!(results[0].outcome, RunOutcome::Reached);
        assert_eq!(results[0].ticks, 2);
        assert_eq!(results[1].outcome, RunOutcome::Reached);

        // Tick 0: robot 0 takes the contested cell, robot 1 holds in place.
        assert_eq!(traces[0].to, (1, 1));
        assert_eq!(traces[1].dir, None);
        assert_eq!(traces[1].from, traces[1].to);

        // The loser detours east, backtracks when the corner dead-ends,
        // then follows the vacated column up: five ticks, four moves.
        assert_eq!(results[1].ticks, 4);
        assert_eq!(
            results[1].path,
            vec![c(1, 0), c(2, 0), c(1, 0), c(1, 1), c(1, 2)]
        );
        assert_eq!(world.tick, 5);

        // Robot 1 crossed robot 0's trail exactly once, at the contested
        // cell, which robot 0 visited first.
        assert_eq!(world.intersections.len(), 1);
        let hit = world.intersections[0];
        assert_eq!(hit.tick, 3);
        assert_eq!(hit.robot, RobotId(1));
        assert_eq!(hit.cell, c(1, 1));
        assert_eq!(hit.first_visitor, RobotId(0));
        assert_eq!(
            intersections_csv(&world.intersections),
            "tick,robot_id,x,y,first_visitor_id\n3,1,1,1,0\n"
        );
    }

    #[test]
    fn occupancy_stays_exclusive_and_consistent_every_tick() {
        let obstacles = [c(2, 2), c(3, 3), c(4, 1), c(1, 4), c(5, 5)];
        let mut world = square_world(
            7,
            7,
            &obstacles,
            vec![
                agent(0, c(0, 0), c(6, 6)),
                agent(1, c(6, 0), c(0, 6)),
                agent(2, c(0, 6), c(6, 0)),
                agent(3, c(6, 6), c(0, 0)),
                agent(4, c(3, 0), c(3, 6)),
                agent(5, c(0, 3), c(6, 3)),
            ],
            FleetConfig::default(),
        );
        for _ in 0..200 {
            if !world.any_moving() {
                break;
            }
            tick_fleet(&mut world);
            let mut seen = BTreeSet::new();
            for robot in &world.robots {
                assert!(seen.insert(robot.cell), "two robots share {}", robot.cell);
                assert_eq!(
                    world.grid.state(robot.cell),
                    CellState::Active(robot.id),
                    "grid occupancy out of sync at {}",
                    robot.cell
                );
            }
            assert_eq!(world.grid.active_cells().len(), world.robots.len());
        }
    }

    #[test]
    fn one_robot_fleet_reproduces_the_single_robot_engine() {
        let obstacles = [c(3, 2), c(4, 2), c(5, 2), c(5, 3), c(2, 5)];
        let mut solo_grid = Grid::new(9, 9, Tessellation::Square, &obstacles).unwrap();
        let mut solo = agent(0, c(4, 0), c(4, 7));
        let (solo_result, solo_traces) = navigate(&mut solo_grid, &mut solo, 136, 324).unwrap();

        let mut world = square_world(
            9,
            9,
            &obstacles,
            vec![agent(0, c(4, 0), c(4, 7))],
            FleetConfig::default(),
        );
        let (fleet_results, fleet_traces) = run_fleet(&mut world, 324);

        assert_eq!(fleet_results[0], solo_result);
        assert_eq!(traces_to_jsonl(&fleet_traces), traces_to_jsonl(&solo_traces));
    }

    #[test]
    fn a_wall_deadlocks_immediately_but_a_robot_is_worth_waiting_for() {
        // Width-one corridor with a parked robot in the way: the mover
        // holds until the recurrence limit calls it a deadlock.
        let grid = Grid::new(3, 1, Tessellation::Square, &[]).unwrap();
        let mut world = new_fleet(
            grid,
            vec![agent(0, c(0, 0), c(2, 0)), agent(1, c(1, 0), c(1, 0))],
            FleetConfig::default(),
        )
        .unwrap();
        let (results, traces) = run_fleet(&mut world, 100);
        assert_eq!(results[1].outcome, RunOutcome::Reached);
        assert_eq!(results[0].outcome, RunOutcome::Deadlocked);
        // Placement, then two holds reach the recurrence limit.
        assert_eq!(world.tick, 2);
        assert!(traces.iter().all(|t| t.dir.is_none()));

        // The same corridor with a wall instead: no one to wait for.
        let walled = Grid::new(3, 1, Tessellation::Square, &[c(1, 0)]).unwrap();
        let mut world = new_fleet(
            walled,
            vec![agent(0, c(0, 0), c(2, 0))],
            FleetConfig::default(),
        )
        .unwrap();
        let (results, traces) = run_fleet(&mut world, 100);
        assert_eq!(results[0].outcome, RunOutcome::Deadlocked);
        assert_eq!(world.tick, 1);
        assert_eq!(traces.len(), 1);
    }

    #[test]
    fn separation_is_logged_when_loose_and_enforced_when_strict() {
        let robots = || vec![agent(0, c(0, 2), c(4, 2)), agent(1, c(0, 1), c(4, 1))];

        // Loose mode: the parallel runs sit at distance 1 the whole way,
        // and every post-tick snapshot below the safe distance is logged.
        let mut loose = square_world(
            5,
            5,
            &[],
            robots(),
            FleetConfig {
                d_min: 2,
                ..FleetConfig::default()
            },
        );
        let (results, _) = run_fleet(&mut loose, 100);
        assert_eq!(results[0].outcome, RunOutcome::Reached);
        assert_eq!(results[1].outcome, RunOutcome::Reached);
        let logged: Vec<u32> = loose.separation_log.iter().map(|(t, _)| *t).collect();
        assert_eq!(logged, vec![0, 1, 2, 3]);
        assert_eq!(loose.separation_log[0].1.distance, 1);

        // Strict mode: robot 1 is held back whenever moving would close
        // inside the envelope, and its target (one cell from robot 0's)
        // is unreachable without violating it — so it dies trying.
        let mut strict = square_world(
            5,
            5,
            &[],
            robots(),
            FleetConfig {
                d_min: 2,
                strict_separation: true,
                ..FleetConfig::default()
            },
        );
        let (results, _) = run_fleet(&mut strict, 100);
        assert_eq!(results[0].outcome, RunOutcome::Reached);
        assert_eq!(results[1].outcome, RunOutcome::Deadlocked);
        assert_eq!(strict.robots[1].cell, c(3, 1));
        // No post-tick snapshot ever violated the envelope.
        assert!(strict.separation_log.is_empty());
    }

    #[test]
    fn bad_fleets_are_rejected_with_the_offending_robot() {
        let grid = || Grid::new(4, 4, Tessellation::Square, &[c(2, 2)]).unwrap();
        assert_eq!(
            new_fleet(
                grid(),
                vec![agent(0, c(0, 0), c(3, 3)), agent(0, c(1, 1), c(3, 0))],
                FleetConfig::default()
            )
            .unwrap_err(),
            EngineError::DuplicateId(0)
        );
        assert_eq!(
            new_fleet(
                grid(),
                vec![agent(0, c(0, 0), c(3, 3)), agent(1, c(0, 0), c(3, 0))],
                FleetConfig::default()
            )
            .unwrap_err(),
            EngineError::DuplicateStart {
                a: 0,
                b: 1,
                x: 0,
                y: 0
            }
        );
        assert_eq!(
            new_fleet(
                grid(),
                vec![agent(0, c(0, 0), c(2, 2))],
                FleetConfig::default()
            )
            .unwrap_err(),
            EngineError::TargetBlocked { x: 2, y: 2 }
        );
        // Sharing a target is allowed at placement time.
        assert!(new_fleet(
            grid(),
            vec![agent(0, c(0, 0), c(3, 3)), agent(1, c(1, 1), c(3, 3))],
            FleetConfig::default()
        )
        .is_ok());
    }

    #[test]
    fn retargeting_revives_arrived_robots_but_not_deadlocked_ones() {
        let grid = Grid::new(5, 5, Tessellation::Square, &[]).unwrap();
        let mut world = new_fleet(
            grid,
            vec![agent(0, c(0, 0), c(2, 0))],
            FleetConfig::default(),
        )
        .unwrap();
        let (results, _) = run_fleet(&mut world, 100);
        assert_eq!(results[0].outcome, RunOutcome::Reached);

        world.retarget_robot(RobotId(0), c(0, 0)).unwrap();
        assert_eq!(world.robots[0].status, RobotStatus::Moving);
        let (results, _) = run_fleet(&mut world, 100);
        assert_eq!(results[0].outcome, RunOutcome::Reached);
        assert_eq!(world.robots[0].cell, c(0, 0));

        assert_eq!(
            world.retarget_robot(RobotId(7), c(1, 1)).unwrap_err(),
            EngineError::UnknownRobot(7)
        );
    }

    #[test]
    fn mid_run_obstacle_edits_are_validated() {
        let grid = Grid::new(4, 4, Tessellation::Square, &[c(3, 3)]).unwrap();
        let mut world = new_fleet(
            grid,
            vec![agent(0, c(0, 0), c(3, 0))],
            FleetConfig::default(),
        )
        .unwrap();
        assert_eq!(
            world.add_obstacle(c(0, 0)).unwrap_err(),
            EngineError::ObstacleOnRobot { id: 0, x: 0, y: 0 }
        );
        world.add_obstacle(c(1, 1)).unwrap();
        assert_eq!(world.grid.state(c(1, 1)), CellState::Obstacle);
        // Removing a non-obstacle is a harmless no-op.
        world.remove_obstacle(c(2, 2)).unwrap();
        assert_eq!(world.grid.state(c(2, 2)), CellState::Free);
        world.remove_obstacle(c(1, 1)).unwrap();
        assert_eq!(world.grid.state(c(1, 1)), CellState::Free);
        assert!(matches!(
            world.add_obstacle(c(9, 9)),
            Err(EngineError::OutOfBounds { .. })
        ));
    }
}
