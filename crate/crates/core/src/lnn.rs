//! QFT on a line of qubits.
//!
//! CPHASE layer `t` pairs every `(i, j)` with `i + j = t + 1`; the same pairs swap right
//! after. Each qubit walks to the far end, so the final mapping reverses the line.

use crate::circuit::{Gate, LayeredCircuit};
use crate::dependence::Mode;
use crate::engine::Engine;

pub fn map_qft_lnn(n: usize) -> LayeredCircuit {
    let mut e = Engine::new((0..n).collect(), Mode::Strict);
    if n == 0 {
        return e.into_circuit();
    }
    e.h(0);
    if n == 1 {
        return e.into_circuit();
    }
    if n == 2 {
        e.cp(0, 1);
        e.h(1);
        return e.into_circuit();
    }
    let mut pos: Vec<usize> = (0..n).collect();
    for t in 0..=2 * n - 4 {
        let s = t + 1;
        let pairs: Vec<(usize, usize)> = (s.saturating_sub(n - 1)..s.div_ceil(2))
            .map(|i| (i, s - i))
            .filter(|&(i, j)| i < j && j < n)
            .collect();
        for &(i, j) in &pairs {
            e.cp(pos[i], pos[j]);
        }
        for &(i, j) in &pairs {
            e.swap(pos[i], pos[j]);
            pos.swap(i, j);
        }
        // The pair (q-1, q) has just swapped, so q has all its inputs.
        if t % 2 == 0 {
            let q = t / 2 + 1;
            e.h(pos[q]);
        }
    }
    e.into_circuit()
}

/// Greedy line QFT over whatever sits on `line`, smaller indices drifting toward the end.
///
/// Each round runs every ready adjacent CPHASE, swaps every adjacent pair that has
/// interacted and is still in increasing order, then applies ready H gates.
pub(crate) fn greedy_line(e: &mut Engine, line: &[usize]) {
    e.try_h(line.iter().copied());
    loop {
        let mut progress = false;
        let mut busy = vec![false; line.len()];
        for i in 0..line.len().saturating_sub(1) {
            if busy[i] || busy[i + 1] {
                continue;
            }
            if e.at(line[i]) < e.at(line[i + 1]) && e.ready(line[i], line[i + 1]) {
                e.cp(line[i], line[i + 1]);
                busy[i] = true;
                busy[i + 1] = true;
                progress = true;
            }
        }
        let mut moved = vec![false; line.len()];
        for i in 0..line.len().saturating_sub(1) {
            if moved[i] || moved[i + 1] {
                continue;
            }
            if e.at(line[i]) < e.at(line[i + 1]) && e.is_done(line[i], line[i + 1]) {
                e.swap(line[i], line[i + 1]);
                moved[i] = true;
                moved[i + 1] = true;
                progress = true;
            }
        }
        progress |= e.try_h(line.iter().copied());
        if !progress {
            break;
        }
    }
}

/// Logical pairs per CPHASE layer; each pair's index sum is constant within a layer.
pub fn cphase_layer_sums(c: &LayeredCircuit) -> Vec<Vec<usize>> {
    let mut occ: Vec<usize> = vec![usize::MAX; c.n_physical];
    for (l, &p) in c.initial_map.iter().enumerate() {
        occ[p] = l;
    }
    let mut out = Vec::new();
    for layer in &c.layers {
        let sums: Vec<usize> = layer
            .iter()
            .filter_map(|g| match *g {
                Gate::CPhase { a, b, .. } => Some(occ[a] + occ[b]),
                _ => None,
            })
            .collect();
        if !sums.is_empty() {
            out.push(sums);
        }
        for g in layer {
            if let Gate::Swap { a, b, .. } = *g {
                occ.swap(a, b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{metrics, LatencyModel};

    #[test]
    fn boundary_sizes() {
        let c = map_qft_lnn(1);
        assert_eq!(c.layers, vec![vec![Gate::H(0)]]);
        assert_eq!(c.final_map, vec![0]);
        let c = map_qft_lnn(2);
        assert_eq!(metrics(&c, &LatencyModel::nisq()).swap_count, 0);
        assert_eq!(c.gate_count(), 3);
    }

    #[test]
    fn depth_and_reversal() {
        for n in 3..20 {
            let c = map_qft_lnn(n);
            let m = metrics(&c, &LatencyModel::nisq());
            assert_eq!(m.depth as usize, 4 * n - 6, "n={n}");
            assert_eq!(m.swap_count, n * (n - 1) / 2);
            assert_eq!(c.final_map, (0..n).rev().collect::<Vec<_>>());
        }
    }

    #[test]
    fn layer_sums_are_constant() {
        let c = map_qft_lnn(7);
        for sums in cphase_layer_sums(&c) {
            assert!(sums.iter().all(|&s| s == sums[0]));
        }
    }
}
