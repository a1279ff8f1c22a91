//! Consistency checks over the control unit's exported artifacts: the CSV
//! truth table must round-trip against the transition function, outputs
//! must follow the next state (a Moore machine), and the state graph must
//! name exactly the transitions that occur.

use std::collections::BTreeSet;

use cellnav_core::{
    control_transition, reachable_states, state_graph_dot, transition_pairs, truth_table,
    truth_table_csv, ControlState, SensorFrame,
};

fn state_by_name(name: &str) -> ControlState {
    ControlState::ALL
        .into_iter()
        .find(|s| s.name() == name)
        .unwrap_or_else(|| panic!("unknown state {name}"))
}

#[test]
fn csv_rows_round_trip_through_the_transition_function() {
    let csv = truth_table_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("state,input,next_state,outputs"));
    let mut count = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4, "malformed row {line}");
        let state = state_by_name(fields[0]);
        assert_eq!(fields[1].len(), 8);
        let input = u8::from_str_radix(fields[1], 2).expect("binary input field");
        let next = state_by_name(fields[2]);
        assert_eq!(control_transition(state, SensorFrame::new(input)), next);
        // Moore property: the outputs column is the next state's code.
        assert_eq!(fields[3], next.outputs_field());
        count += 1;
    }
    assert_eq!(count, 6 * 256);
}

#[test]
fn every_state_occurs_as_a_successor() {
    let nexts: BTreeSet<ControlState> = truth_table().iter().map(|r| r.next).collect();
    // Calm is never re-entered (it is only the power-on state), the other
    // five all occur.
    assert_eq!(nexts.len(), 6, "every state including Calm has a self-loop");
}

#[test]
fn stop_rows_always_land_in_the_halt_state() {
    for row in truth_table() {
        if row.input & (1 << 6) != 0 {
            assert_eq!(row.next, ControlState::Stopped);
        }
    }
}

#[test]
fn graph_transitions_equal_table_transitions() {
    let dot = state_graph_dot();
    let mut graph_pairs = BTreeSet::new();
    for line in dot.lines() {
        let line = line.trim();
        if let Some((from, rest)) = line.split_once(" -> ") {
            let to = rest.split_whitespace().next().unwrap();
            graph_pairs.insert((state_by_name(from), state_by_name(to)));
        }
    }
    assert_eq!(graph_pairs, transition_pairs());
    // Sanity on size: a six-state machine exporting a readable graph.
    assert!(graph_pairs.len() >= 20 && graph_pairs.len() <= 30);
}

#[test]
fn all_six_states_are_reachable_from_power_on() {
    assert_eq!(reachable_states(ControlState::Calm).len(), 6);
}
