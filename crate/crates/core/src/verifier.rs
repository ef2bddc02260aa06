//! Checks on compiled circuits: every CPHASE and H exactly once, dependence order,
//! hardware compliance, and a dense unitary comparison for small sizes.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Gate, LayeredCircuit};
use crate::dependence::{Mode, OrderError, OrderTracker};
use crate::topology::CouplingGraph;

const EMPTY: usize = usize::MAX;

/// Logical → physical mapping before each layer; the last entry is the final mapping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingTrace {
    pub maps: Vec<Vec<usize>>,
}

impl MappingTrace {
    pub fn new(c: &LayeredCircuit) -> MappingTrace {
        let mut maps = Vec::with_capacity(c.layers.len() + 1);
        let mut cur = c.initial_map.clone();
        let mut occ = occupancy(&cur, c.n_physical);
        maps.push(cur.clone());
        for layer in &c.layers {
            for g in layer {
                if let Gate::Swap { a, b, .. } = *g {
                    apply_swap(&mut cur, &mut occ, a, b);
                }
            }
            maps.push(cur.clone());
        }
        MappingTrace { maps }
    }
}

fn occupancy(map: &[usize], n_physical: usize) -> Vec<usize> {
    let mut occ = vec![EMPTY; n_physical];
    for (l, &p) in map.iter().enumerate() {
        occ[p] = l;
    }
    occ
}

fn apply_swap(map: &mut [usize], occ: &mut [usize], a: usize, b: usize) {
    occ.swap(a, b);
    for p in [a, b] {
        if occ[p] != EMPTY {
            map[occ[p]] = p;
        }
    }
}

/// Replays a circuit, handing each gate to `f` with the logical occupants of its operands.
fn replay(c: &LayeredCircuit, mut f: impl FnMut(usize, &Gate, usize, usize)) {
    let mut map = c.initial_map.clone();
    let mut occ = occupancy(&map, c.n_physical);
    for (li, layer) in c.layers.iter().enumerate() {
        for g in layer {
            let (a, b) = g.qubits();
            f(li, g, occ[a], b.map_or(EMPTY, |b| occ[b]));
        }
        for g in layer {
            if let Gate::Swap { a, b, .. } = *g {
                apply_swap(&mut map, &mut occ, a, b);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverageIssue {
    Duplicate { layer: usize, x: usize, y: usize },
    Missing { x: usize, y: usize },
    WrongAngle { layer: usize, x: usize, y: usize, k: u32 },
    DuplicateH { layer: usize, q: usize },
    MissingH { q: usize },
    /// A gate other than SWAP touching a physical qubit that holds no logical qubit.
    Unmapped { layer: usize, gate: Gate },
    BareCnot { layer: usize, gate: Gate },
}

impl fmt::Display for CoverageIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverageIssue::Duplicate { layer, x, y } => write!(f, "layer {layer}: duplicate pair ({x},{y})"),
            CoverageIssue::Missing { x, y } => write!(f, "missing pair ({x},{y})"),
            CoverageIssue::WrongAngle { layer, x, y, k } => {
                write!(f, "layer {layer}: pair ({x},{y}) has exponent {k}, expected {}", y - x)
            }
            CoverageIssue::DuplicateH { layer, q } => write!(f, "layer {layer}: duplicate H on {q}"),
            CoverageIssue::MissingH { q } => write!(f, "missing H on {q}"),
            CoverageIssue::Unmapped { layer, gate } => write!(f, "layer {layer}: {gate} acts on an unmapped qubit"),
            CoverageIssue::BareCnot { layer, gate } => write!(f, "layer {layer}: bare {gate} is not part of the QFT"),
        }
    }
}

/// Execution counts per logical pair and per H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageMatrix {
    pub n: usize,
    counts: Vec<u32>,
    pub h: Vec<u32>,
}

impl CoverageMatrix {
    pub fn count(&self, x: usize, y: usize) -> u32 {
        let (x, y) = (x.min(y), x.max(y));
        self.counts[x * self.n + y]
    }

    pub fn complete(&self) -> bool {
        self.h.iter().all(|&c| c == 1)
            && (0..self.n).all(|x| (x + 1..self.n).all(|y| self.counts[x * self.n + y] == 1))
    }
}

#[derive(Clone, Debug)]
pub struct CoverageReport {
    pub matrix: CoverageMatrix,
    pub issues: Vec<CoverageIssue>,
}

impl CoverageReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn check_coverage(c: &LayeredCircuit) -> CoverageReport {
    let n = c.n_logical;
    let mut m = CoverageMatrix { n, counts: vec![0; n * n], h: vec![0; n] };
    let mut issues = Vec::new();
    replay(c, |layer, g, x, y| match *g {
        Gate::H(_) => {
            if x == EMPTY {
                issues.push(CoverageIssue::Unmapped { layer, gate: *g });
                return;
            }
            m.h[x] += 1;
            if m.h[x] == 2 {
                issues.push(CoverageIssue::DuplicateH { layer, q: x });
            }
        }
        Gate::CPhase { k, .. } => {
            if x == EMPTY || y == EMPTY {
                issues.push(CoverageIssue::Unmapped { layer, gate: *g });
                return;
            }
            let (x, y) = (x.min(y), x.max(y));
            if k as usize != y - x {
                issues.push(CoverageIssue::WrongAngle { layer, x, y, k });
            }
            m.counts[x * n + y] += 1;
            if m.counts[x * n + y] == 2 {
                issues.push(CoverageIssue::Duplicate { layer, x, y });
            }
        }
        Gate::Cnot { .. } => issues.push(CoverageIssue::BareCnot { layer, gate: *g }),
        Gate::Swap { .. } => {}
    });
    for x in 0..n {
        for y in x + 1..n {
            if m.counts[x * n + y] == 0 {
                issues.push(CoverageIssue::Missing { x, y });
            }
        }
    }
    for q in 0..n {
        if m.h[q] == 0 {
            issues.push(CoverageIssue::MissingH { q });
        }
    }
    CoverageReport { matrix: m, issues }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("layer {layer}: {error}")]
pub struct DependenceFailure {
    pub layer: usize,
    pub error: OrderError,
}

/// Gates within a layer are qubit-disjoint, and every dependence edge shares a logical
/// qubit, so checking gates in layer order decides validity for every linearisation.
pub fn check_dependence(c: &LayeredCircuit, mode: Mode) -> Result<(), DependenceFailure> {
    let mut t = OrderTracker::new(c.n_logical, mode);
    let mut first: Option<DependenceFailure> = None;
    replay(c, |layer, g, x, y| {
        if first.is_some() {
            return;
        }
        let r = match *g {
            Gate::H(_) if x != EMPTY => t.step(x, x),
            Gate::CPhase { .. } if x != EMPTY && y != EMPTY && x != y => t.step(x, y),
            Gate::Swap { .. } => Ok(()),
            _ => Err(OrderError::NotPermutation(format!("{g} is not a QFT gate"))),
        };
        if let Err(error) = r {
            first = Some(DependenceFailure { layer, error });
        }
    });
    match first {
        Some(f) => Err(f),
        None if !t.complete() => Err(DependenceFailure {
            layer: c.layers.len(),
            error: OrderError::NotPermutation("circuit ends before every gate ran".into()),
        }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ComplianceError {
    #[error("layer {layer}: {gate} spans non-adjacent qubits")]
    NotAdjacent { layer: usize, gate: Gate },
    #[error("layer {layer}: {gate} is not allowed on a {kind:?} link")]
    WrongLink { layer: usize, gate: Gate, kind: crate::topology::EdgeKind },
    #[error("circuit has {found} physical qubits, graph has {expected}")]
    Size { expected: usize, found: usize },
}

pub fn check_compliance(c: &LayeredCircuit, g: &CouplingGraph) -> Result<(), ComplianceError> {
    if c.n_physical != g.n {
        return Err(ComplianceError::Size { expected: g.n, found: c.n_physical });
    }
    for (layer, gates) in c.layers.iter().enumerate() {
        for gate in gates {
            let (a, Some(b)) = gate.qubits() else { continue };
            match g.edge_kind(a, b) {
                None => return Err(ComplianceError::NotAdjacent { layer, gate: *gate }),
                Some(kind) if !kind.permits(gate) => {
                    return Err(ComplianceError::WrongLink { layer, gate: *gate, kind })
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}

/// Default size limit for the dense comparison; `QFTR_NMAX_ORACLE` overrides it.
pub fn oracle_nmax() -> usize {
    std::env::var("QFTR_NMAX_ORACLE").ok().and_then(|v| v.parse().ok()).unwrap_or(10)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} physical qubits exceed the oracle limit of {nmax}")]
    TooLarge { n: usize, nmax: usize },
}

/// Applies the physical gate list to basis state `|idx>`, bit `p` of the index being
/// physical qubit `p`.
fn run_column(c: &LayeredCircuit, idx: usize) -> Vec<Complex64> {
    let dim = 1usize << c.n_physical;
    let mut s = vec![Complex64::new(0.0, 0.0); dim];
    s[idx] = Complex64::new(1.0, 0.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for g in c.gates() {
        match *g {
            Gate::H(q) => {
                let bit = 1 << q;
                for i in 0..dim {
                    if i & bit == 0 {
                        let (u, v) = (s[i], s[i | bit]);
                        s[i] = (u + v) * r;
                        s[i | bit] = (u - v) * r;
                    }
                }
            }
            Gate::CPhase { a, b, k } => {
                let mask = (1 << a) | (1 << b);
                let phase = Complex64::from_polar(1.0, PI / 2f64.powi(k as i32));
                for (i, amp) in s.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp *= phase;
                    }
                }
            }
            Gate::Swap { a, b, .. } => {
                let (ba, bb) = (1 << a, 1 << b);
                for i in 0..dim {
                    if i & ba != 0 && i & bb == 0 {
                        s.swap(i, i ^ ba ^ bb);
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let (bc, bt) = (1 << control, 1 << target);
                for i in 0..dim {
                    if i & bc != 0 && i & bt == 0 {
                        s.swap(i, i | bt);
                    }
                }
            }
        }
    }
    s
}

/// Physical basis index for logical value `x` (logical qubit `i` is bit `n - 1 - i` of
/// `x`) placed according to `map`.
fn place(x: usize, n: usize, map: &[usize]) -> usize {
    (0..n).filter(|&i| x >> (n - 1 - i) & 1 == 1).map(|i| 1 << map[i]).sum()
}

/// Largest elementwise deviation from the QFT with bit-reversed output, after relabelling
/// inputs by the initial mapping and outputs by the final mapping, up to global phase.
///
/// Unmapped physical qubits start in `|0>` and must stay there.
pub fn unitary_oracle(c: &LayeredCircuit, nmax: usize) -> Result<f64, OracleError> {
    if c.n_physical > nmax {
        return Err(OracleError::TooLarge { n: c.n_physical, nmax });
    }
    let n = c.n_logical;
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    let rev = |y: usize| (0..n).fold(0, |acc, i| acc | ((y >> i & 1) << (n - 1 - i)));
    let expected = |x: usize, y: usize| {
        let e = (x * rev(y)) % dim;
        Complex64::from_polar(norm, 2.0 * PI * e as f64 / dim as f64)
    };
    let column = |x: usize| -> Vec<Complex64> {
        let s = run_column(c, place(x, n, &c.initial_map));
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        let mut leaked = 0.0;
        let mut mapped = vec![false; s.len()];
        for (y, o) in out.iter_mut().enumerate() {
            let i = place(y, n, &c.final_map);
            *o = s[i];
            mapped[i] = true;
        }
        for (i, a) in s.iter().enumerate() {
            if !mapped[i] {
                leaked += a.norm();
            }
        }
        if leaked > 0.0 {
            // Amplitude outside the mapped subspace counts as deviation.
            out[0] += Complex64::new(leaked, 0.0);
        }
        out
    };
    let first = column(0);
    let phase = first
        .iter()
        .zip(0..)
        .find(|(a, _)| a.norm() > 1e-12)
        .map(|(a, y)| expected(0, y) / a)
        .map(|p| p / p.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    let dev = (0..dim)
        .into_par_iter()
        .map(|x| {
            let col = if x == 0 { first.clone() } else { column(x) };
            col.iter()
                .enumerate()
                .map(|(y, a)| (a * phase - expected(x, y)).norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(dev)
}

/// Result of running every applicable check.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub coverage: CoverageReport,
    pub dependence: Result<(), DependenceFailure>,
    pub compliance: Option<Result<(), ComplianceError>>,
    pub oracle: Option<f64>,
}

pub const ORACLE_TOLERANCE: f64 = 1e-9;

impl Verdict {
    pub fn ok(&self) -> bool {
        self.coverage.ok()
            && self.dependence.is_ok()
            && !matches!(self.compliance, Some(Err(_)))
            && self.oracle.map_or(true, |d| d <= ORACLE_TOLERANCE)
    }

    /// First failing check, described in one line.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(i) = self.coverage.issues.first() {
            return Some(format!("coverage: {i} ({} issues)", self.coverage.issues.len()));
        }
        if let Err(e) = &self.dependence {
            return Some(format!("dependence: {e}"));
        }
        if let Some(Err(e)) = &self.compliance {
            return Some(format!("compliance: {e}"));
        }
        match self.oracle {
            Some(d) if d > ORACLE_TOLERANCE => Some(format!("unitary: deviation {d:.3e}")),
            _ => None,
        }
    }
}

pub fn verify(c: &LayeredCircuit, graph: Option<&CouplingGraph>, mode: Mode, nmax: usize) -> Verdict {
    Verdict {
        coverage: check_coverage(c),
        dependence: check_dependence(c, mode),
        compliance: graph.map(|g| check_compliance(c, g)),
        oracle: unitary_oracle(c, nmax).ok(),
    }
}

/// Deliberate corruptions used to confirm the checkers catch real faults.
pub mod mutations {
    use super::*;

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum Mutation {
        DropGate,
        DuplicateGate,
        WrongAngle,
        ReorderAcrossH,
        NonAdjacent,
    }

    pub const ALL: [Mutation; 5] = [
        Mutation::DropGate,
        Mutation::DuplicateGate,
        Mutation::WrongAngle,
        Mutation::ReorderAcrossH,
        Mutation::NonAdjacent,
    ];

    fn first_cphase(c: &LayeredCircuit) -> Option<(usize, usize)> {
        c.layers
            .iter()
            .enumerate()
            .find_map(|(l, gs)| gs.iter().position(|g| matches!(g, Gate::CPhase { .. })).map(|i| (l, i)))
    }

    fn rebuild(c: &LayeredCircuit, layers: Vec<Vec<Gate>>) -> LayeredCircuit {
        LayeredCircuit::new(c.n_logical, c.n_physical, c.initial_map.clone(), layers)
            .expect("mutation keeps layers well formed")
    }

    /// Applies `kind`, or returns `None` when the circuit offers no place for it.
    pub fn mutate(c: &LayeredCircuit, graph: &CouplingGraph, kind: Mutation) -> Option<LayeredCircuit> {
        let mut layers = c.layers.clone();
        match kind {
            Mutation::DropGate => {
                let (l, i) = first_cphase(c)?;
                layers[l].remove(i);
            }
            Mutation::DuplicateGate => {
                let (l, i) = first_cphase(c)?;
                let g = layers[l][i];
                layers.insert(l + 1, vec![g]);
            }
            Mutation::WrongAngle => {
                let (l, i) = first_cphase(c)?;
                if let Gate::CPhase { k, .. } = &mut layers[l][i] {
                    *k += 1;
                }
            }
            Mutation::ReorderAcrossH => {
                // Move an H ahead of the last CPHASE its logical qubit took part in.
                let mut last_cp: Vec<Option<(usize, usize)>> = vec![None; c.n_logical];
                let mut found = None;
                replay(c, |l, g, x, y| match *g {
                    _ if found.is_some() => {}
                    Gate::CPhase { a, b, .. } => {
                        for (lq, p) in [(x, a), (y, b)] {
                            if lq != EMPTY {
                                last_cp[lq] = Some((l, p));
                            }
                        }
                    }
                    Gate::H(p) if x != EMPTY => {
                        if let Some((lc, pc)) = last_cp[x] {
                            found = Some((l, p, lc, pc));
                        }
                    }
                    _ => {}
                });
                let (l, p, before, pc) = found?;
                layers[l].retain(|g| *g != Gate::H(p));
                layers.insert(before, vec![Gate::H(pc)]);
            }
            Mutation::NonAdjacent => {
                let (a, b) = (0..graph.n)
                    .flat_map(|a| (a + 1..graph.n).map(move |b| (a, b)))
                    .find(|&(a, b)| graph.edge_kind(a, b).is_none())?;
                // A SWAP and its inverse: the unitary is unchanged, only placement is wrong.
                layers.push(vec![Gate::swap(a, b)]);
                layers.push(vec![Gate::swap(a, b)]);
            }
        }
        layers.retain(|l| !l.is_empty());
        Some(rebuild(c, layers))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_logical_qft, layerize};
    use crate::lnn::map_qft_lnn;
    use crate::topology::build_lnn;

    fn logical(n: usize) -> LayeredCircuit {
        layerize(&build_logical_qft(n).gates, n, n, (0..n).collect()).unwrap()
    }

    #[test]
    fn textbook_circuit_matches_the_reference_matrix() {
        for n in 1..=4 {
            assert!(unitary_oracle(&logical(n), 10).unwrap() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn single_h_is_qft1() {
        let c = LayeredCircuit::new(1, 1, vec![0], vec![vec![Gate::H(0)]]).unwrap();
        assert!(unitary_oracle(&c, 10).unwrap() < 1e-15);
    }

    #[test]
    fn lnn_passes_everything() {
        for n in 2..7 {
            let c = map_qft_lnn(n);
            let v = verify(&c, Some(&build_lnn(n)), Mode::Strict, 10);
            assert!(v.ok(), "n={n}: {:?}", v.first_failure());
        }
    }

    #[test]
    fn corrupted_angle_moves_the_unitary() {
        let mut c = map_qft_lnn(3);
        for l in c.layers.iter_mut() {
            for g in l.iter_mut() {
                if let Gate::CPhase { k, .. } = g {
                    *k += 1;
                    break;
                }
            }
        }
        assert!(unitary_oracle(&c, 10).unwrap() > 0.1);
    }

    #[test]
    fn reversed_layers_fail_dependence() {
        // The line schedule is symmetric under time reversal, so use heavy-hex.
        let mut c = crate::heavyhex::map_qft_heavyhex(&crate::topology::build_heavyhex(2).unwrap());
        c.layers.reverse();
        assert!(check_dependence(&c, Mode::Relaxed).is_err());
    }

    #[test]
    fn oracle_size_limit() {
        assert_eq!(unitary_oracle(&map_qft_lnn(5), 4), Err(OracleError::TooLarge { n: 5, nmax: 4 }));
    }

    #[test]
    fn dropped_layer_lists_missing_pairs() {
        let mut c = map_qft_lnn(5);
        let idx = c.layers.iter().position(|l| l.iter().filter(|g| matches!(g, Gate::CPhase { .. })).count() == 2).unwrap();
        c.layers[idx].retain(|g| !matches!(g, Gate::CPhase { .. }));
        let r = check_coverage(&c);
        let missing = r.issues.iter().filter(|i| matches!(i, CoverageIssue::Missing { .. })).count();
        assert_eq!(missing, 2);
    }
}
