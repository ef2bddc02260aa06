//! Chain and shared-qubit dependence between QFT gates, and order validation.
//!
//! Gates are compared through their canonical slots `(min, max)`, with `H(q)` as `(q, q)`.
//! Chain rule: `(i, j)` must precede `(j, k)`. Shared-slot rule: gates sharing their first slot run in
//! increasing second slot, and gates sharing their second slot run in increasing first slot.
//! Relaxed mode keeps the chain rule only.

use std::fmt;

use crate::circuit::{Gate, LogicalCircuit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Strict,
    Relaxed,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "relaxed" => Ok(Mode::Relaxed),
            other => Err(format!("unknown order `{other}` (expected strict or relaxed)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Relaxed => "relaxed",
        })
    }
}

/// Whether two gates can be exchanged without changing the circuit.
pub fn commutes(g1: &Gate, g2: &Gate) -> bool {
    let (a1, b1) = g1.qubits();
    let (a2, b2) = g2.qubits();
    let overlap = [Some(a1), b1]
        .iter()
        .flatten()
        .any(|q| *q == a2 || Some(*q) == b2);
    if !overlap {
        return true;
    }
    match (g1, g2) {
        (Gate::CPhase { .. }, Gate::CPhase { .. }) => true,
        (Gate::H(x), Gate::H(y)) => x == y,
        _ => false,
    }
}

fn type_two(g1: (usize, usize), g2: (usize, usize)) -> bool {
    g1 != g2 && g1.1 == g2.0
}

fn type_one(g1: (usize, usize), g2: (usize, usize)) -> bool {
    (g1.0 == g2.0 && g1.1 < g2.1) || (g1.1 == g2.1 && g1.0 < g2.0)
}

/// Explicit must-precede edges over the gates of a logical circuit.
#[derive(Clone, Debug)]
pub struct DependenceGraph {
    pub nodes: Vec<Gate>,
    pub edges: Vec<(usize, usize)>,
}

impl DependenceGraph {
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    /// Kahn's algorithm.
    pub fn is_acyclic(&self) -> bool {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            indeg[v] += 1;
            out[u].push(v);
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut visited = 0;
        while let Some(u) = stack.pop() {
            visited += 1;
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        visited == n
    }

    pub fn node_index(&self, g: &Gate) -> Option<usize> {
        self.nodes.iter().position(|x| x == g)
    }
}

pub fn dependence_graph(c: &LogicalCircuit, mode: Mode) -> DependenceGraph {
    let slots: Vec<(usize, usize)> = c.gates.iter().map(Gate::slots).collect();
    let mut edges = Vec::new();
    for (u, &s1) in slots.iter().enumerate() {
        for (v, &s2) in slots.iter().enumerate() {
            if type_two(s1, s2) || (mode == Mode::Strict && type_one(s1, s2)) {
                edges.push((u, v));
            }
        }
    }
    DependenceGraph { nodes: c.gates.clone(), edges }
}

/// `earlier` has to run before `later`, but `later` ran first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub earlier: Gate,
    pub later: Gate,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} must precede {}", self.earlier, self.later)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderError {
    /// The sequence is not a reordering of the logical QFT gates.
    NotPermutation(String),
    Violation(Violation),
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::NotPermutation(s) => write!(f, "not a QFT gate permutation: {s}"),
            OrderError::Violation(v) => write!(f, "{v}"),
        }
    }
}

fn logical_cp(x: usize, y: usize) -> Gate {
    Gate::cphase(x, y, (y - x) as u32)
}

/// Incremental checker over logical `(x, y)` slots, O(1) amortised per gate.
///
/// Reports the lexicographically smallest unmet predecessor of the first offending gate.
#[derive(Clone, Debug)]
pub struct OrderTracker {
    n: usize,
    mode: Mode,
    done: Vec<u64>,
    h_done: Vec<bool>,
    incoming: Vec<usize>,
    /// Smallest `y > x` with `(x, y)` not yet executed.
    row_frontier: Vec<usize>,
    /// Smallest `x < y` with `(x, y)` not yet executed.
    col_frontier: Vec<usize>,
}

impl OrderTracker {
    pub fn new(n: usize, mode: Mode) -> OrderTracker {
        let words = (n * n).div_ceil(64);
        OrderTracker {
            n,
            mode,
            done: vec![0; words],
            h_done: vec![false; n],
            incoming: vec![0; n],
            row_frontier: (0..n).map(|x| x + 1).collect(),
            col_frontier: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_done(&self, x: usize, y: usize) -> bool {
        let (x, y) = (x.min(y), x.max(y));
        let i = x * self.n + y;
        self.done[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn h_done(&self, q: usize) -> bool {
        self.h_done[q]
    }

    fn mark(&mut self, x: usize, y: usize) {
        let i = x * self.n + y;
        self.done[i / 64] |= 1 << (i % 64);
        self.incoming[y] += 1;
        while self.row_frontier[x] < self.n && self.is_done(x, self.row_frontier[x]) {
            self.row_frontier[x] += 1;
        }
        while self.col_frontier[y] < y && self.is_done(self.col_frontier[y], y) {
            self.col_frontier[y] += 1;
        }
    }

    /// Whether CPHASE on logical pair `{p, q}` may run now under the tracker's mode.
    pub fn cp_ready(&self, p: usize, q: usize) -> bool {
        self.cp_ready_in(p, q, self.mode)
    }

    /// Same as [`cp_ready`](Self::cp_ready) but judged under `mode`.
    pub fn cp_ready_in(&self, p: usize, q: usize, mode: Mode) -> bool {
        let (x, y) = (p.min(q), p.max(q));
        if x == y || self.is_done(x, y) || !self.h_done[x] || self.h_done[y] {
            return false;
        }
        mode == Mode::Relaxed || (self.col_frontier[y] >= x && self.row_frontier[x] >= y)
    }

    pub fn h_ready(&self, q: usize) -> bool {
        !self.h_done[q] && self.incoming[q] == q
    }

    /// Records a gate given by its logical slots (`x == y` means H).
    pub fn step(&mut self, x: usize, y: usize) -> Result<(), OrderError> {
        let (x, y) = (x.min(y), x.max(y));
        if y >= self.n {
            return Err(OrderError::NotPermutation(format!("qubit {y} out of range")));
        }
        if x == y {
            if self.h_done[x] {
                return Err(OrderError::NotPermutation(format!("H({x}) repeated")));
            }
            if self.incoming[x] != x {
                let w = (0..x).find(|&w| !self.is_done(w, x)).unwrap_or(0);
                return Err(OrderError::Violation(Violation { earlier: logical_cp(w, x), later: Gate::H(x) }));
            }
            self.h_done[x] = true;
            return Ok(());
        }
        let later = logical_cp(x, y);
        if self.is_done(x, y) {
            return Err(OrderError::NotPermutation(format!("{later} repeated")));
        }
        if self.h_done[y] {
            // Only reachable when H(y) itself was accepted with this gate missing.
            return Err(OrderError::Violation(Violation { earlier: later, later: Gate::H(y) }));
        }
        if self.mode == Mode::Strict && self.col_frontier[y] < x {
            let earlier = logical_cp(self.col_frontier[y], y);
            return Err(OrderError::Violation(Violation { earlier, later }));
        }
        if !self.h_done[x] {
            return Err(OrderError::Violation(Violation { earlier: Gate::H(x), later }));
        }
        if self.mode == Mode::Strict && self.row_frontier[x] < y {
            let earlier = logical_cp(x, self.row_frontier[x]);
            return Err(OrderError::Violation(Violation { earlier, later }));
        }
        self.mark(x, y);
        Ok(())
    }

    pub fn complete(&self) -> bool {
        self.h_done.iter().all(|&h| h) && self.incoming.iter().enumerate().all(|(q, &c)| c == q)
    }
}

/// Whether `seq` is a topological order of the dependence graph in `mode`.
pub fn is_valid_order(seq: &[Gate], mode: Mode) -> Result<(), OrderError> {
    let n = seq.iter().map(|g| g.slots().1 + 1).max().unwrap_or(0);
    let expected = n + n * n.saturating_sub(1) / 2;
    if seq.len() != expected {
        return Err(OrderError::NotPermutation(format!("{} gates, expected {expected}", seq.len())));
    }
    let mut t = OrderTracker::new(n, mode);
    for g in seq {
        match *g {
            Gate::H(q) => t.step(q, q)?,
            Gate::CPhase { a, b, k } => {
                let (x, y) = (a.min(b), a.max(b));
                if a == b || k as usize != y - x {
                    return Err(OrderError::NotPermutation(format!("{g} is not a QFT gate")));
                }
                t.step(x, y)?
            }
            _ => return Err(OrderError::NotPermutation(format!("{g} is not a QFT gate"))),
        }
    }
    Ok(())
}
