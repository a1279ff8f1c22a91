//! The six-state motion control unit.
//!
//! A Moore machine turns a frame of eight sensor/command bits into one of
//! six drive postures each clock: calm (parked), forward, forward-left,
//! forward-right, reverse, and stopped. Two bits override everything — an
//! emergency stop and a reverse command — and a demanded turn degrades
//! gracefully when its side is blocked: the machine tries the other side,
//! then reverse, then stops.
//!
//! The transition function is total over all 6 × 256 (state, input)
//! combinations; [`truth_table_csv`] exports the whole map and
//! [`state_graph_dot`] renders the state graph with annotated edges. A unit
//! test keeps the graph's edge set consistent with the truth table.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// One clock's worth of input bits, `g0` (bit 0) through `g7` (bit 7):
///
/// - `g0` — advance command: start driving forward;
/// - `g1` — left-turn command;
/// - `g2` — right side blocked (inhibits right turns);
/// - `g3` — left side blocked (inhibits left turns);
/// - `g4` — turn demand, right side preferred unless `g1` is set;
/// - `g5` — rear blocked (inhibits the reverse fallback);
/// - `g6` — emergency stop, overrides everything;
/// - `g7` — reverse command, overrides everything except `g6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorFrame {
    pub bits: u8,
}

impl SensorFrame {
    pub fn new(bits: u8) -> SensorFrame {
        SensorFrame { bits }
    }

    /// Bit `index` (0–7) of the frame.
    pub fn g(self, index: u8) -> bool {
        debug_assert!(index < 8);
        (self.bits >> index) & 1 == 1
    }
}

/// Drive posture of the control unit. The four-bit output code
/// `(q0, q1, q2, q3)` is the state's own encoding (a Moore machine: outputs
/// depend only on the state).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ControlState {
    /// Parked and ready; no drive outputs.
    Calm,
    /// Driving straight ahead.
    Forward,
    /// Driving ahead while steering left.
    TurnLeftForward,
    /// Driving ahead while steering right.
    TurnRightForward,
    /// Backing up.
    Reverse,
    /// Halted by an emergency stop or an impossible maneuver.
    Stopped,
}

impl ControlState {
    pub const ALL: [ControlState; 6] = [
        ControlState::Calm,
        ControlState::Forward,
        ControlState::TurnLeftForward,
        ControlState::TurnRightForward,
        ControlState::Reverse,
        ControlState::Stopped,
    ];

    /// Short identifier, `S0` through `S5`.
    pub fn name(self) -> &'static str {
        match self {
            ControlState::Calm => "S0",
            ControlState::Forward => "S1",
            ControlState::TurnLeftForward => "S2",
            ControlState::TurnRightForward => "S3",
            ControlState::Reverse => "S4",
            ControlState::Stopped => "S5",
        }
    }

    /// Human-readable posture name.
    pub fn description(self) -> &'static str {
        match self {
            ControlState::Calm => "Calm",
            ControlState::Forward => "Forward",
            ControlState::TurnLeftForward => "TurnLeftForward",
            ControlState::TurnRightForward => "TurnRightForward",
            ControlState::Reverse => "Reverse",
            ControlState::Stopped => "Stopped",
        }
    }

    /// Output code as `(q0, q1, q2, q3)`.
    pub fn code(self) -> [bool; 4] {
        match self {
            ControlState::Calm => [true, false, false, false],
            ControlState::Forward => [false, true, false, false],
            ControlState::TurnLeftForward => [false, true, true, false],
            ControlState::TurnRightForward => [false, true, false, true],
            ControlState::Reverse => [false, false, true, true],
            ControlState::Stopped => [false, false, false, false],
        }
    }

    /// Output code written `q0` first, as on the state-graph labels.
    pub fn code_string(self) -> String {
        self.code().iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Output code written as a nibble with `q3` in the most significant
    /// position, as in the truth-table CSV's `outputs` column.
    pub fn outputs_field(self) -> String {
        self.code()
            .iter()
            .rev()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// The state the control unit powers up in.
pub fn init() -> ControlState {
    ControlState::Calm
}

/// Moore outputs for a state: its own code.
pub fn outputs(state: ControlState) -> [bool; 4] {
    state.code()
}

/// Advance the control unit one clock.
///
/// Priority order: the emergency stop (`g6`) wins from every state, then the
/// reverse command (`g7`). Otherwise the driving states (`S1`–`S3`) share
/// one turn-resolution block: a left command takes the left when the left is
/// open; a bare turn demand takes the right when the right is open; an
/// inhibited demand falls across to the other side, then to reverse, then to
/// a halt. With no turn pending the machine drives straight. `Calm`,
/// `Reverse`, and `Stopped` wait for the advance bit to (re)enter `Forward`
/// — a reversing unit also requires the turn demand to have cleared.
pub fn transition(state: ControlState, frame: SensorFrame) -> ControlState {
    use ControlState::*;
    if frame.g(6) {
        return Stopped;
    }
    if frame.g(7) {
        return Reverse;
    }
    match state {
        Calm => {
            if frame.g(0) {
                Forward
            } else {
                Calm
            }
        }
        Forward | TurnLeftForward | TurnRightForward => {
            if frame.g(1) && !frame.g(3) {
                TurnLeftForward
            } else if frame.g(4) && !frame.g(1) && !frame.g(2) {
                TurnRightForward
            } else if frame.g(4) {
                // The demanded side is blocked: cross over, back out, or
                // give up, in that order.
                if !frame.g(3) {
                    TurnLeftForward
                } else if !frame.g(2) {
                    TurnRightForward
                } else if !frame.g(5) {
                    Reverse
                } else {
                    Stopped
                }
            } else {
                Forward
            }
        }
        Reverse => {
            if frame.g(0) && !frame.g(4) {
                Forward
            } else {
                Reverse
            }
        }
        Stopped => {
            if frame.g(0) {
                Forward
            } else {
                Stopped
            }
        }
    }
}

/// States reachable from `start` under some input sequence (including
/// `start` itself).
pub fn reachable_states(start: ControlState) -> BTreeSet<ControlState> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![start];
    seen.insert(start);
    while let Some(state) = frontier.pop() {
        for bits in 0..=255u8 {
            let next = transition(state, SensorFrame::new(bits));
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen
}

/// One row of the exhaustive transition map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruthTableRow {
    pub state: ControlState,
    pub input: u8,
    pub next: ControlState,
}

/// The full 6 × 256 transition map, state-major with inputs ascending.
pub fn truth_table() -> Vec<TruthTableRow> {
    let mut rows = Vec::with_capacity(6 * 256);
    for state in ControlState::ALL {
        for input in 0..=255u8 {
            rows.push(TruthTableRow {
                state,
                input,
                next: transition(state, SensorFrame::new(input)),
            });
        }
    }
    rows
}

/// The truth table as CSV: `state,input,next_state,outputs`, with the input
/// written as eight binary digits (`g7` first) and the outputs as the next
/// state's nibble (`q3` first).
pub fn truth_table_csv() -> String {
    let mut out = String::from("state,input,next_state,outputs\n");
    for row in truth_table() {
        out.push_str(&format!(
            "{},{:08b},{},{}\n",
            row.state.name(),
            row.input,
            row.next.name(),
            row.next.outputs_field()
        ));
    }
    out
}

/// The distinct (from, to) pairs that occur anywhere in the truth table.
pub fn transition_pairs() -> BTreeSet<(ControlState, ControlState)> {
    truth_table().iter().map(|r| (r.state, r.next)).collect()
}

/// The state graph in Graphviz DOT form: one node per state (labeled with
/// its name, posture, and output code) and one edge per transition pair that
/// actually occurs, annotated with the input condition that selects it.
pub fn state_graph_dot() -> String {
    let mut out = String::new();
    out.push_str("digraph control_unit {\n");
    out.push_str("  // g6 (emergency stop) and g7 (reverse command) override every\n");
    out.push_str("  // state's own clauses; edge labels omit the implied !g6 & !g7\n");
    out.push_str("  // guards except where those bits select the edge.\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box];\n");
    for state in ControlState::ALL {
        out.push_str(&format!(
            "  {} [label=\"{} {}\\n{}\"];\n",
            state.name(),
            state.name(),
            state.description(),
            state.code_string()
        ));
    }
    let edges: [(&str, &str, &str); 22] = [
        ("S0", "S0", "!g0"),
        ("S0", "S1", "g0"),
        ("S0", "S4", "g7"),
        ("S0", "S5", "g6"),
        ("S1", "S1", "!g4 & !(g1 & !g3)"),
        ("S1", "S2", "g1 & !g3 | g4 & !g1 & g2 & !g3"),
        ("S1", "S3", "g4 & !g1 & !g2 | g4 & g1 & g3 & !g2"),
        ("S1", "S4", "g7 | g4 & g3 & g2 & !g5"),
        ("S1", "S5", "g6 | g4 & g3 & g2 & g5"),
        ("S2", "S1", "!g4 & !(g1 & !g3)"),
        ("S2", "S2", "g1 & !g3 | g4 & !g1 & g2 & !g3"),
        ("S2", "S3", "g4 & !g1 & !g2 | g4 & g1 & g3 & !g2"),
        ("S2", "S4", "g7 | g4 & g3 & g2 & !g5"),
        ("S2", "S5", "g6 | g4 & g3 & g2 & g5"),
        ("S3", "S1", "!g4 & !(g1 & !g3)"),
        ("S3", "S2", "g1 & !g3 | g4 & !g1 & g2 & !g3"),
        ("S3", "S3", "g4 & !g1 & !g2 | g4 & g1 & g3 & !g2"),
        ("S3", "S4", "g7 | g4 & g3 & g2 & !g5"),
        ("S3", "S5", "g6 | g4 & g3 & g2 & g5"),
        ("S4", "S1", "g0 & !g4"),
        ("S4", "S4", "g7 | !(g0 & !g4)"),
        ("S4", "S5", "g6"),
    ];
    for (from, to, label) in edges {
        out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", from, to, label));
    }
    // Stopped only re-arms on the advance bit.
    out.push_str("  S5 -> S5 [label=\"g6 | !g0\"];\n");
    out.push_str("  S5 -> S1 [label=\"g0\"];\n");
    out.push_str("  S5 -> S4 [label=\"g7\"];\n");
    out.push_str("}\n");
    out
}
