use std::collections::HashSet;

use qftr::circuit::{layerize, metrics, Gate, LatencyModel, LayeredCircuit};
use qftr::dependence::Mode;
use qftr::lattice::{lattice_initial_map, map_qft_lattice, transversal_unit_swap, LatticeSchedule};
use qftr::lnn::{cphase_layer_sums, map_qft_lnn};
use qftr::sycamore::{schedule_sycamore, two_unit_depths, unit_swap, unit_swap_pairs, PhaseKind, SycamoreSchedule};
use qftr::topology::{build_heavyhex, build_lattice, build_lnn, build_sycamore, sycamore_qubit, CouplingGraph};
use qftr::verifier::{check_compliance, check_coverage, check_dependence};
use qftr::{map_qft_heavyhex, map_qft_sycamore};

fn steps(c: &LayeredCircuit) -> (u64, usize) {
    let m = metrics(c, &LatencyModel::nisq());
    (m.depth, m.swap_count)
}

fn assert_sound(c: &LayeredCircuit, g: &CouplingGraph, mode: Mode) {
    let cov = check_coverage(c);
    assert!(cov.ok(), "{:?}", &cov.issues[..cov.issues.len().min(5)]);
    check_dependence(c, mode).unwrap();
    check_compliance(c, g).unwrap();
}

fn gate_depth(gates: &[Gate], n: usize) -> u64 {
    metrics(&layerize(gates, n, n, (0..n).collect()).unwrap(), &LatencyModel::nisq()).depth
}

// Line

#[test]
fn lnn_layers_have_constant_index_sums() {
    for n in 2..24 {
        let c = map_qft_lnn(n);
        assert_sound(&c, &build_lnn(n), Mode::Strict);
        for sums in cphase_layer_sums(&c) {
            assert!(sums.iter().all(|&s| s == sums[0]), "n={n}");
        }
        if n > 2 {
            assert_eq!(c.final_map, (0..n).rev().collect::<Vec<_>>());
        }
    }
}

#[test]
fn lnn_sums_sweep_upward() {
    // CPHASE layers visit index sums 1, 2, ..., 2n - 3 in order.
    let n = 9;
    let firsts: Vec<usize> = cphase_layer_sums(&map_qft_lnn(n)).iter().map(|s| s[0]).collect();
    assert!(firsts.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!((firsts[0], *firsts.last().unwrap()), (1, 2 * n - 3));
}

// Heavy-hex

#[test]
fn heavyhex_one_group_is_the_five_qubit_line() {
    let hh = build_heavyhex(1).unwrap();
    assert_eq!(steps(&map_qft_heavyhex(&hh)), steps(&map_qft_lnn(5)));
}

#[test]
fn heavyhex_each_group_adds_25_steps() {
    let d: Vec<u64> = (1..=9).map(|g| steps(&map_qft_heavyhex(&build_heavyhex(g).unwrap())).0).collect();
    for g in 4..9 {
        assert_eq!(d[g] - d[g - 1], 25, "g={}", g + 1);
    }
    for (i, &depth) in d.iter().enumerate() {
        assert!(depth <= 6 * 5 * (i as u64 + 1), "g={}", i + 1);
    }
}

#[test]
fn heavyhex_relaxed_only() {
    for g in 1..=6 {
        let hh = build_heavyhex(g).unwrap();
        let c = map_qft_heavyhex(&hh);
        assert_sound(&c, &hh.graph, Mode::Relaxed);
        if g >= 2 {
            assert!(check_dependence(&c, Mode::Strict).is_err(), "g={g}");
        }
    }
}

#[test]
fn heavyhex_small_qubits_finish_on_dangling_points() {
    let hh = build_heavyhex(6).unwrap();
    let c = map_qft_heavyhex(&hh);
    let on_dangling: HashSet<usize> =
        (0..hh.groups).map(|k| c.final_map.iter().position(|&p| p == hh.dangling(k)).unwrap()).collect();
    assert_eq!(on_dangling, (0..hh.groups).collect());
}

// Sycamore

#[test]
fn sycamore_unit_swap_on_three_columns() {
    let layers = unit_swap(3, 0, 1).unwrap();
    assert_eq!(layers.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 6, 3]);
    // Odd positions of the upper unit cross to the even positions below.
    let [cross, _, _] = unit_swap_pairs(3, 0);
    let upper: Vec<usize> = cross.iter().map(|p| p.0).collect();
    let lower: Vec<usize> = cross.iter().map(|p| p.1).collect();
    assert_eq!(upper, vec![sycamore_qubit(3, 0, 1), sycamore_qubit(3, 0, 3), sycamore_qubit(3, 0, 5)]);
    assert_eq!(lower, vec![sycamore_qubit(3, 1, 0), sycamore_qubit(3, 1, 2), sycamore_qubit(3, 1, 4)]);
    let g = build_sycamore(6).unwrap();
    for l in unit_swap(6, 1, 2).unwrap() {
        for gate in l {
            let (a, b) = gate.qubits();
            assert!(g.edge_kind(a, b.unwrap()).is_some());
        }
    }
}

#[test]
fn sycamore_phase_depths() {
    for m in [2, 4, 6, 8] {
        let (ia, ie) = two_unit_depths(m, Mode::Relaxed);
        assert_eq!(ia as usize, 4 * 2 * m - 6, "m={m}");
        assert!(ie as usize <= 3 * (2 * m + 1) + 3, "m={m} ie={ie}");
        let (_, ie_strict) = two_unit_depths(m, Mode::Strict);
        if m >= 4 {
            assert!(ie as f64 <= 0.6 * ie_strict as f64, "m={m}: {ie} vs {ie_strict}");
        }
    }
}

#[test]
fn sycamore_inter_unit_covers_all_cross_pairs() {
    let m = 4;
    let mut s = SycamoreSchedule::new(m, 2, Mode::Relaxed);
    s.intra_unit(0);
    let upper: Vec<usize> = (0..2 * m).map(|p| s.engine.at(sycamore_qubit(m, 0, p))).collect();
    let lower: Vec<usize> = (0..2 * m).map(|p| s.engine.at(sycamore_qubit(m, 1, p))).collect();
    s.inter_unit(0);
    let ie = s.phases.iter().find(|p| p.kind == PhaseKind::Inter).unwrap();
    let cps = s.engine.gates[ie.gates.clone()].iter().filter(|g| matches!(g, Gate::CPhase { .. })).count();
    assert_eq!(cps, 64);
    for &x in &upper {
        for &y in &lower {
            assert!(s.engine.done_logical(x, y));
        }
    }
}

#[test]
fn sycamore_sound_in_both_modes() {
    for m in [2, 4, 6] {
        let g = build_sycamore(m).unwrap();
        assert_sound(&map_qft_sycamore(m, Mode::Strict).unwrap(), &g, Mode::Strict);
        assert_sound(&map_qft_sycamore(m, Mode::Relaxed).unwrap(), &g, Mode::Relaxed);
    }
}

#[test]
fn sycamore_phase_record_accounts_for_every_gate() {
    let s = schedule_sycamore(6, Mode::Relaxed).unwrap();
    let k = 3;
    let count = |kind| s.phases.iter().filter(|p| p.kind == kind).count();
    assert_eq!(count(PhaseKind::Intra), k);
    assert_eq!(count(PhaseKind::Inter), k * (k - 1) / 2);
    let covered: usize = s.phases.iter().map(|p| p.gates.len()).sum();
    let h = s.engine.gates.iter().filter(|g| matches!(g, Gate::H(_))).count();
    assert!(covered + h >= s.engine.gates.len());
}

#[test]
fn relaxed_sycamore_is_shallower() {
    for m in [4, 6] {
        let r = steps(&map_qft_sycamore(m, Mode::Relaxed).unwrap()).0;
        let s = steps(&map_qft_sycamore(m, Mode::Strict).unwrap()).0;
        assert!(r < s, "m={m}");
    }
}

// Lattice

#[test]
fn transversal_swap_is_one_slow_layer() {
    let m = 3;
    let layer = transversal_unit_swap(m, 0, 1).unwrap();
    let c = LayeredCircuit::new(2 * m, 2 * m, (0..2 * m).collect(), vec![layer.clone(), layer]).unwrap();
    let once = LayeredCircuit::new(2 * m, 2 * m, (0..2 * m).collect(), vec![c.layers[0].clone()]).unwrap();
    let mt = metrics(&once, &LatencyModel::lattice());
    assert_eq!((mt.swap_count, mt.depth, mt.cnot_count), (3, 6, 9));
    let swapped: Vec<usize> = (0..2 * m).map(|l| (l + m) % (2 * m)).collect();
    assert_eq!(once.final_map, swapped);
    assert_eq!(c.final_map, (0..2 * m).collect::<Vec<_>>());
    assert!(transversal_unit_swap(m, 1, 1).is_err());
}

#[test]
fn two_row_block_covers_its_qubits() {
    for m in 2..=6 {
        let mut s = LatticeSchedule::new(m);
        s.two_by_n(0, Some(1));
        let logical: Vec<usize> = (0..2 * m).collect();
        for &x in &logical {
            assert!(s.engine.h_done_logical(x), "m={m}");
            for &y in &logical {
                if x < y {
                    assert!(s.engine.done_logical(x, y), "m={m} ({x},{y})");
                }
            }
        }
        assert!(s.engine.gates.iter().all(|g| matches!(g, Gate::H(_) | Gate::CPhase { .. } | Gate::Swap { cnot: false, .. })));
    }
}

#[test]
fn bottom_row_starts_moving_one_cycle_later() {
    let m = 6;
    let mut s = LatticeSchedule::new(m);
    s.two_by_n(0, Some(1));
    let c = layerize(&s.engine.gates, m * m, m * m, (0..m * m).collect()).unwrap();
    let first_swap_in_row = |r: usize| {
        c.layers
            .iter()
            .position(|l| l.iter().any(|g| matches!(*g, Gate::Swap { a, .. } if a / m == r)))
            .unwrap()
    };
    assert_eq!(first_swap_in_row(1) - first_swap_in_row(0), 3);
}

#[test]
fn pure_inter_row_phase_covers_the_rows() {
    let m = 4;
    let mut s = LatticeSchedule::new(m);
    assert!(s.intra_block(0));
    let row = |s: &LatticeSchedule, r: usize| -> Vec<usize> { (0..m).map(|c| s.engine.at(r * m + c)).collect() };
    let (a, b) = (row(&s, 1), row(&s, 2));
    let start = s.engine.gates.len();
    s.pure_ie(&[1]);
    let phase = &s.engine.gates[start..];
    assert_eq!(phase.iter().filter(|g| matches!(g, Gate::CPhase { .. })).count(), m * m);
    for &x in &a {
        for &y in &b {
            assert!(s.engine.done_logical(x, y));
        }
    }
    assert!(gate_depth(phase, m * m) as usize <= 2 * m + 1);
}

#[test]
fn lattice_zigzag_start() {
    let map = lattice_initial_map(4);
    assert_eq!(&map[8..12], &[8, 12, 9, 13]);
}

#[test]
fn lattice_sound() {
    for m in 2..=8 {
        let c = map_qft_lattice(m).unwrap();
        assert_sound(&c, &build_lattice(m).unwrap(), Mode::Relaxed);
    }
}

#[test]
fn lattice_swaps_grow_quadratically() {
    let ratios: Vec<f64> = [10usize, 20, 30]
        .iter()
        .map(|&m| {
            let n = (m * m) as f64;
            steps(&map_qft_lattice(m).unwrap()).1 as f64 / (n * n)
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    for r in &ratios {
        assert!((r / mean - 1.0).abs() <= 0.10, "{ratios:?}");
    }
}

#[test]
fn sycamore_keeps_the_better_unit_order() {
    use qftr::sycamore::{schedule_with, UnitOrder};
    let cost = |c: &LayeredCircuit| steps(c);
    for m in [4, 6, 8] {
        let line = cost(&schedule_with(m, Mode::Relaxed, UnitOrder::Line).engine.into_circuit());
        let near = cost(&schedule_with(m, Mode::Relaxed, UnitOrder::Nearest).engine.into_circuit());
        let chosen = cost(&map_qft_sycamore(m, Mode::Relaxed).unwrap());
        assert_eq!(chosen, line.min(near), "m={m}");
    }
    // Three units: moving the far unit up saves one unit exchange.
    let line = schedule_with(6, Mode::Relaxed, UnitOrder::Line);
    let near = schedule_with(6, Mode::Relaxed, UnitOrder::Nearest);
    let exchanges = |s: &SycamoreSchedule| s.phases.iter().filter(|p| p.kind == PhaseKind::UnitSwap).count();
    assert_eq!((exchanges(&line), exchanges(&near)), (2, 1));
}
