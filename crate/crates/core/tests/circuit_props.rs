use proptest::prelude::*;

use qftr::circuit::{layerize, metrics, metrics_with, Gate, LatencyModel, LayeredCircuit};
use qftr::io::{export_json, export_qasm, import_json};
use qftr::CircuitError;

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
    prop_oneof![
        (0..n).prop_map(Gate::H),
        (pair.clone(), 0u32..8).prop_map(|((a, b), k)| Gate::cphase(a, b, k)),
        pair.clone().prop_map(|(a, b)| Gate::swap(a, b)),
        pair.clone().prop_map(|(a, b)| Gate::slow_swap(a, b)),
        pair.prop_map(|(control, target)| Gate::Cnot { control, target }),
    ]
}

fn gates_strategy() -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (2usize..7).prop_flat_map(|n| (Just(n), prop::collection::vec(gate_strategy(n), 0..40)))
}

fn on_wire(gates: &[Gate], q: usize) -> Vec<Gate> {
    gates.iter().filter(|g| g.touches(q)).copied().collect()
}

proptest! {
    #[test]
    fn layerize_keeps_per_wire_order((n, gates) in gates_strategy()) {
        let c = layerize(&gates, n, n, (0..n).collect()).unwrap();
        let flat: Vec<Gate> = c.gates().copied().collect();
        prop_assert_eq!(flat.len(), gates.len());
        for q in 0..n {
            prop_assert_eq!(on_wire(&flat, q), on_wire(&gates, q));
        }
        // As soon as possible: every gate after layer 0 shares a qubit with the layer before.
        for w in c.layers.windows(2) {
            for g in &w[1] {
                let (a, b) = g.qubits();
                prop_assert!(w[0].iter().any(|h| h.touches(a) || b.is_some_and(|b| h.touches(b))));
            }
        }
    }

    #[test]
    fn inserting_a_layer_never_lowers_depth((n, gates) in gates_strategy(), at in any::<prop::sample::Index>(), g in gate_strategy(6)) {
        let c = layerize(&gates, n, n, (0..n).collect()).unwrap();
        let g = g.map_qubits(|q| q % n);
        prop_assume!(g.qubits().1 != Some(g.qubits().0));
        let mut layers = c.layers.clone();
        layers.insert(at.index(layers.len() + 1), vec![g]);
        let bigger = LayeredCircuit::new(n, n, c.initial_map.clone(), layers).unwrap();
        for lm in [LatencyModel::nisq(), LatencyModel::lattice()] {
            prop_assert!(metrics(&bigger, &lm).depth >= metrics(&c, &lm).depth);
        }
    }

    #[test]
    fn json_round_trip((n, gates) in gates_strategy(), rot in 0usize..7) {
        let map: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let c = layerize(&gates, n, n, map).unwrap();
        prop_assert_eq!(import_json(&export_json(&c)).unwrap(), c.clone());
        let qasm = export_qasm(&c);
        prop_assert_eq!(qasm.matches("barrier").count(), c.layers.len().saturating_sub(1));
    }

    #[test]
    fn final_map_follows_swaps((n, gates) in gates_strategy()) {
        let c = layerize(&gates, n, n, (0..n).collect()).unwrap();
        let mut at: Vec<usize> = (0..n).collect();
        for g in &gates {
            if let Gate::Swap { a, b, .. } = *g {
                for p in at.iter_mut() {
                    if *p == a { *p = b } else if *p == b { *p = a }
                }
            }
        }
        prop_assert_eq!(c.final_map, at);
    }
}

fn one_layer(n: usize, gates: Vec<Gate>) -> LayeredCircuit {
    LayeredCircuit::new(n, n, (0..n).collect(), vec![gates]).unwrap()
}

#[test]
fn metric_examples() {
    let empty = LayeredCircuit::new(3, 3, vec![0, 1, 2], vec![]).unwrap();
    assert_eq!(metrics(&empty, &LatencyModel::nisq()).depth, 0);

    let slow = one_layer(2, vec![Gate::slow_swap(0, 1)]);
    let m = metrics(&slow, &LatencyModel::lattice());
    assert_eq!((m.depth, m.swap_count, m.cnot_count), (6, 1, 3));
    assert_eq!(metrics(&slow, &LatencyModel::nisq()).depth, 1);

    let mixed = one_layer(4, vec![Gate::swap(0, 1), Gate::cphase(2, 3, 1)]);
    assert_eq!(metrics(&mixed, &LatencyModel::lattice()).depth, 2);

    // H-only layers are not charged unless asked for.
    let h = LayeredCircuit::new(2, 2, vec![0, 1], vec![vec![Gate::H(0)], vec![Gate::cphase(0, 1, 1)], vec![Gate::H(1)]])
        .unwrap();
    assert_eq!(metrics(&h, &LatencyModel::nisq()).depth, 1);
    assert_eq!(metrics_with(&h, &LatencyModel::nisq(), true).depth, 3);
}

#[test]
fn malformed_layers_rejected() {
    let e = LayeredCircuit::new(2, 2, vec![0, 1], vec![vec![Gate::H(0), Gate::cphase(0, 1, 1)]]).unwrap_err();
    assert!(matches!(e, CircuitError::QubitReused { layer: 0, qubit: 0 }));
    let e = LayeredCircuit::new(2, 2, vec![0, 0], vec![]).unwrap_err();
    assert!(matches!(e, CircuitError::MapNotInjective { physical: 0 }));
    let e = LayeredCircuit::new(2, 2, vec![0, 1], vec![vec![Gate::H(5)]]).unwrap_err();
    assert!(matches!(e, CircuitError::QubitOutOfRange { qubit: 5, .. }));
    assert!(LayeredCircuit::new(3, 2, vec![0, 1, 2], vec![]).is_err());
    let bad = LatencyModel { swap: 0, ..LatencyModel::lattice() };
    assert!(bad.validate().is_err());
}
