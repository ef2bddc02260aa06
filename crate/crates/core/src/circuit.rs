//! Gate and circuit representation, the textbook QFT builder, ASAP layering and metrics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CircuitError;

/// One scheduled operation.
///
/// A `CPhase` rotates by `pi / 2^k`. On logical circuits `a < b` and `k = b - a`;
/// on physical circuits `a` holds the smaller logical index and `b` the larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    H(usize),
    CPhase { a: usize, b: usize, k: u32 },
    /// `cnot` marks a SWAP realised as three CNOTs (required on CNOT-only links).
    Swap { a: usize, b: usize, cnot: bool },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn cphase(a: usize, b: usize, k: u32) -> Gate {
        Gate::CPhase { a, b, k }
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::Swap { a, b, cnot: false }
    }

    pub fn slow_swap(a: usize, b: usize) -> Gate {
        Gate::Swap { a, b, cnot: true }
    }

    /// First operand and, for two-qubit gates, the second.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) => (q, None),
            Gate::CPhase { a, b, .. } | Gate::Swap { a, b, .. } => (a, Some(b)),
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        let (a, b) = self.qubits();
        a == q || b == Some(q)
    }

    pub fn is_two_qubit(&self) -> bool {
        !matches!(self, Gate::H(_))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::CPhase { .. } => "cp",
            Gate::Swap { .. } => "swap",
            Gate::Cnot { .. } => "cx",
        }
    }

    /// Canonical `(min, max)` operand pair; `H(q)` maps to `(q, q)`.
    pub fn slots(&self) -> (usize, usize) {
        let (a, b) = self.qubits();
        let b = b.unwrap_or(a);
        (a.min(b), a.max(b))
    }

    /// Same gate with every operand passed through `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::CPhase { a, b, k } => Gate::CPhase { a: f(a), b: f(b), k },
            Gate::Swap { a, b, cnot } => Gate::Swap { a: f(a), b: f(b), cnot },
            Gate::Cnot { control, target } => Gate::Cnot { control: f(control), target: f(target) },
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H({q})"),
            Gate::CPhase { a, b, k } => write!(f, "CP({a},{b};k={k})"),
            Gate::Swap { a, b, cnot: false } => write!(f, "SWAP({a},{b})"),
            Gate::Swap { a, b, cnot: true } => write!(f, "SWAP_CX({a},{b})"),
            Gate::Cnot { control, target } => write!(f, "CX({control},{target})"),
        }
    }
}

/// Gate list over logical qubit indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

/// Textbook QFT without the trailing reversal swaps:
/// `H(q_i)` followed by `CP(q_i, q_j, k = j - i)` for `j > i`.
pub fn build_logical_qft(n: usize) -> LogicalCircuit {
    let mut gates = Vec::with_capacity(n + n * n.saturating_sub(1) / 2);
    for i in 0..n {
        gates.push(Gate::H(i));
        for j in i + 1..n {
            gates.push(Gate::cphase(i, j, (j - i) as u32));
        }
    }
    LogicalCircuit { n, gates }
}

/// Layers of qubit-disjoint gates over physical qubits plus the logical→physical maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCircuit {
    pub n_logical: usize,
    pub n_physical: usize,
    pub initial_map: Vec<usize>,
    pub final_map: Vec<usize>,
    pub layers: Vec<Vec<Gate>>,
}

impl LayeredCircuit {
    /// Validates the layers and derives `final_map` by pushing `initial_map` through the SWAPs.
    pub fn new(
        n_logical: usize,
        n_physical: usize,
        initial_map: Vec<usize>,
        layers: Vec<Vec<Gate>>,
    ) -> Result<LayeredCircuit, CircuitError> {
        if initial_map.len() != n_logical {
            return Err(CircuitError::MapLength { expected: n_logical, found: initial_map.len() });
        }
        if n_logical > n_physical {
            return Err(CircuitError::TooFewPhysical { n_logical, n_physical });
        }
        let mut occupant = vec![usize::MAX; n_physical];
        for (l, &p) in initial_map.iter().enumerate() {
            if p >= n_physical {
                return Err(CircuitError::QubitOutOfRange { layer: None, qubit: p, n_physical });
            }
            if occupant[p] != usize::MAX {
                return Err(CircuitError::MapNotInjective { physical: p });
            }
            occupant[p] = l;
        }
        let mut seen = vec![usize::MAX; n_physical];
        for (li, layer) in layers.iter().enumerate() {
            for g in layer {
                let (a, b) = g.qubits();
                for q in std::iter::once(a).chain(b) {
                    if q >= n_physical {
                        return Err(CircuitError::QubitOutOfRange { layer: Some(li), qubit: q, n_physical });
                    }
                    if seen[q] == li {
                        return Err(CircuitError::QubitReused { layer: li, qubit: q });
                    }
                    seen[q] = li;
                }
                if b == Some(a) {
                    return Err(CircuitError::SameOperands { layer: li, qubit: a });
                }
            }
        }
        let final_map = transport(&initial_map, n_physical, layers.iter().flatten());
        Ok(LayeredCircuit { n_logical, n_physical, initial_map, final_map, layers })
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }
}

/// Pushes a logical→physical map through every SWAP in `gates`.
pub fn transport<'a>(
    initial_map: &[usize],
    n_physical: usize,
    gates: impl IntoIterator<Item = &'a Gate>,
) -> Vec<usize> {
    let mut map = initial_map.to_vec();
    let mut occupant = vec![usize::MAX; n_physical];
    for (l, &p) in map.iter().enumerate() {
        occupant[p] = l;
    }
    for g in gates {
        if let Gate::Swap { a, b, .. } = *g {
            let (la, lb) = (occupant[a], occupant[b]);
            if la != usize::MAX {
                map[la] = b;
            }
            if lb != usize::MAX {
                map[lb] = a;
            }
            occupant.swap(a, b);
        }
    }
    map
}

/// As-soon-as-possible packing; gates sharing a qubit keep their relative order.
pub fn layerize(
    gates: &[Gate],
    n_logical: usize,
    n_physical: usize,
    initial_map: Vec<usize>,
) -> Result<LayeredCircuit, CircuitError> {
    let mut next_free = vec![0usize; n_physical];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for g in gates {
        let (a, b) = g.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n_physical {
                return Err(CircuitError::QubitOutOfRange { layer: None, qubit: q, n_physical });
            }
        }
        let slot = match b {
            Some(b) => next_free[a].max(next_free[b]),
            None => next_free[a],
        };
        if slot == layers.len() {
            layers.push(Vec::new());
        }
        layers[slot].push(*g);
        next_free[a] = slot + 1;
        if let Some(b) = b {
            next_free[b] = slot + 1;
        }
    }
    LayeredCircuit::new(n_logical, n_physical, initial_map, layers)
}

/// Integer latency per gate kind. SWAPs flagged as CNOT-built use `slow_swap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatencyModel {
    pub h: u32,
    pub cphase: u32,
    pub swap: u32,
    pub slow_swap: u32,
    pub cnot: u32,
}

impl LatencyModel {
    /// Every gate costs one step.
    pub fn nisq() -> LatencyModel {
        LatencyModel { h: 1, cphase: 1, swap: 1, slow_swap: 1, cnot: 1 }
    }

    /// Fast SWAP 2, CNOT 2, CNOT-built SWAP 6, CPHASE 1.
    pub fn lattice() -> LatencyModel {
        LatencyModel { h: 1, cphase: 1, swap: 2, slow_swap: 6, cnot: 2 }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let all = [self.h, self.cphase, self.swap, self.slow_swap, self.cnot];
        if all.iter().any(|&l| l == 0) {
            return Err(CircuitError::ZeroLatency);
        }
        Ok(())
    }

    pub fn latency(&self, g: &Gate) -> u32 {
        match g {
            Gate::H(_) => self.h,
            Gate::CPhase { .. } => self.cphase,
            Gate::Swap { cnot: false, .. } => self.swap,
            Gate::Swap { cnot: true, .. } => self.slow_swap,
            Gate::Cnot { .. } => self.cnot,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub depth: u64,
    pub swap_count: usize,
    pub cnot_count: usize,
    pub cphase_count: usize,
    pub h_count: usize,
}

/// Depth over layers holding at least one two-qubit gate; H-only layers are skipped.
pub fn metrics(c: &LayeredCircuit, lm: &LatencyModel) -> Metrics {
    metrics_with(c, lm, false)
}

/// `include_h_layers` also charges layers that contain only H gates.
pub fn metrics_with(c: &LayeredCircuit, lm: &LatencyModel, include_h_layers: bool) -> Metrics {
    let mut m = Metrics::default();
    for layer in &c.layers {
        if include_h_layers || layer.iter().any(Gate::is_two_qubit) {
            m.depth += layer.iter().map(|g| lm.latency(g) as u64).max().unwrap_or(0);
        }
        for g in layer {
            match g {
                Gate::H(_) => m.h_count += 1,
                Gate::CPhase { .. } => m.cphase_count += 1,
                Gate::Swap { cnot, .. } => {
                    m.swap_count += 1;
                    if *cnot {
                        m.cnot_count += 3;
                    }
                }
                Gate::Cnot { .. } => m.cnot_count += 1,
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logical_qft_small_sizes() {
        assert_eq!(build_logical_qft(1).gates, vec![Gate::H(0)]);
        assert_eq!(
            build_logical_qft(2).gates,
            vec![Gate::H(0), Gate::cphase(0, 1, 1), Gate::H(1)]
        );
        let c = build_logical_qft(4);
        assert_eq!(c.gates.len(), 10);
        assert_eq!(c.gates.iter().filter(|g| matches!(g, Gate::CPhase { .. })).count(), 6);
    }

    #[test]
    fn layerize_packs_disjoint_and_orders_shared() {
        let c = layerize(&[Gate::H(0), Gate::H(1)], 2, 2, vec![0, 1]).unwrap();
        assert_eq!(c.layers.len(), 1);
        let c = layerize(&[Gate::H(0), Gate::cphase(0, 1, 1)], 2, 2, vec![0, 1]).unwrap();
        assert_eq!(c.layers.len(), 2);
    }

    #[test]
    fn final_map_follows_swaps() {
        let c = layerize(&[Gate::swap(0, 1), Gate::swap(1, 2)], 3, 3, vec![0, 1, 2]).unwrap();
        assert_eq!(c.final_map, vec![2, 0, 1]);
    }

    #[test]
    fn metrics_latency_examples() {
        let empty = LayeredCircuit::new(0, 0, vec![], vec![]).unwrap();
        assert_eq!(metrics(&empty, &LatencyModel::lattice()), Metrics::default());
        let slow = LayeredCircuit::new(2, 2, vec![0, 1], vec![vec![Gate::slow_swap(0, 1)]]).unwrap();
        let m = metrics(&slow, &LatencyModel::lattice());
        assert_eq!((m.depth, m.swap_count, m.cnot_count), (6, 1, 3));
        let mixed = LayeredCircuit::new(
            4,
            4,
            vec![0, 1, 2, 3],
            vec![vec![Gate::swap(0, 1), Gate::cphase(2, 3, 1)]],
        )
        .unwrap();
        assert_eq!(metrics(&mixed, &LatencyModel::lattice()).depth, 2);
    }

    #[test]
    fn h_only_layers_are_optional_in_depth() {
        let c = layerize(&build_logical_qft(2).gates, 2, 2, vec![0, 1]).unwrap();
        assert_eq!(metrics(&c, &LatencyModel::nisq()).depth, 1);
        assert_eq!(metrics_with(&c, &LatencyModel::nisq(), true).depth, 3);
    }

    #[test]
    fn rejects_reused_qubit() {
        let err = LayeredCircuit::new(2, 2, vec![0, 1], vec![vec![Gate::H(0), Gate::swap(0, 1)]]);
        assert!(matches!(err, Err(CircuitError::QubitReused { layer: 0, qubit: 0 })));
    }
}
