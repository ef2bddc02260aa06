//! QFT on Sycamore, treating each pair of rows as a unit and running the line pattern
//! over units: intra-unit QFT, inter-unit interaction between neighbours, unit swaps.

use std::collections::HashSet;
use std::ops::Range;

use crate::circuit::{layerize, metrics, Gate, LatencyModel, LayeredCircuit};
use crate::dependence::Mode;
use crate::engine::Engine;
use crate::error::ConstraintError;
use crate::lnn::greedy_line;
use crate::topology::sycamore_qubit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseKind {
    Intra,
    Inter,
    UnitSwap,
}

/// A contiguous run of emitted gates belonging to one phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase {
    pub kind: PhaseKind,
    pub units: (usize, usize),
    pub gates: Range<usize>,
}

/// How units move between inter-unit phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitOrder {
    /// Line pattern over units: a pair that has met passes each other.
    Line,
    /// Also exchange units that have not met when that brings waiting pairs closer,
    /// largest gain first.
    Nearest,
}

/// Schedule builder for `k` units of two rows by `m` columns.
pub struct SycamoreSchedule {
    m: usize,
    units: Vec<Vec<usize>>,
    /// Logical unit held by each unit slot.
    content: Vec<usize>,
    /// Whether a slot's contents run backwards along its line.
    reversed: Vec<bool>,
    ia_done: Vec<bool>,
    ie_done: HashSet<(usize, usize)>,
    pub engine: Engine,
    pub phases: Vec<Phase>,
    pub policy: UnitOrder,
}

impl SycamoreSchedule {
    pub fn new(m: usize, k: usize, mode: Mode) -> SycamoreSchedule {
        let l = 2 * m;
        let units: Vec<Vec<usize>> = (0..k).map(|u| (0..l).map(|p| sycamore_qubit(m, u, p)).collect()).collect();
        let initial: Vec<usize> = units.iter().flatten().copied().collect();
        SycamoreSchedule {
            m,
            units,
            content: (0..k).collect(),
            reversed: vec![false; k],
            ia_done: vec![false; k],
            ie_done: HashSet::new(),
            engine: Engine::new(initial, mode),
            phases: Vec::new(),
            policy: UnitOrder::Line,
        }
    }

    fn line_len(&self) -> usize {
        2 * self.m
    }

    fn record(&mut self, kind: PhaseKind, units: (usize, usize), start: usize) {
        let end = self.engine.gates.len();
        if end > start {
            self.phases.push(Phase { kind, units, gates: start..end });
        }
    }

    /// Line QFT inside the unit at `slot`; its contents end reversed.
    pub fn intra_unit(&mut self, slot: usize) {
        let start = self.engine.gates.len();
        let mut line = self.units[slot].clone();
        if self.reversed[slot] {
            line.reverse();
        }
        greedy_line(&mut self.engine, &line);
        self.reversed[slot] = !self.reversed[slot];
        self.ia_done[self.content[slot]] = true;
        self.record(PhaseKind::Intra, (slot, slot), start);
    }

    /// Every cross CPHASE between slots `up` and `up + 1`.
    ///
    /// Both lines shift in lockstep by odd-even transposition rounds. Each round first
    /// fires the diagonal links, then swaps; a same-column pair that is ready gets one
    /// unit swapped first so it lands on a diagonal, runs, and the other unit catches up.
    /// Rounds are padded to a multiple of the line length so contents end mirrored or
    /// restored.
    pub fn inter_unit(&mut self, up: usize) -> usize {
        let start = self.engine.gates.len();
        let l = self.line_len();
        let a = self.units[up].clone();
        let b = self.units[up + 1].clone();
        let mut left = l * l;
        let mut rnd = 0;
        while left > 0 {
            for side in [-1isize, 1] {
                for p in (1..l).step_by(2) {
                    let q = p as isize + side;
                    if q < 0 || q >= l as isize {
                        continue;
                    }
                    let q = q as usize;
                    if self.engine.ready(a[p], b[q]) {
                        self.engine.cp(a[p], b[q]);
                        left -= 1;
                    }
                }
            }
            if left == 0 {
                break;
            }
            let mut first = Vec::new();
            let mut second = Vec::new();
            let mut fix = Vec::new();
            for p in (rnd % 2..l - 1).step_by(2) {
                let l_pend = self.engine.ready(a[p], b[p]);
                let r_pend = self.engine.ready(a[p + 1], b[p + 1]);
                if l_pend || r_pend {
                    let a_first = if l_pend { p % 2 == 0 } else { p % 2 == 1 };
                    fix.push(if a_first == l_pend { (a[p + 1], b[p]) } else { (a[p], b[p + 1]) });
                    if a_first {
                        first.push((a[p], a[p + 1]));
                        second.push((b[p], b[p + 1]));
                    } else {
                        first.push((b[p], b[p + 1]));
                        second.push((a[p], a[p + 1]));
                    }
                } else {
                    first.push((a[p], a[p + 1]));
                    first.push((b[p], b[p + 1]));
                }
            }
            for (x, y) in first {
                self.engine.swap(x, y);
            }
            for (x, y) in fix {
                self.engine.cp(x, y);
                left -= 1;
            }
            for (x, y) in second {
                self.engine.swap(x, y);
            }
            rnd += 1;
        }
        // Only a unit still waiting for its intra-unit QFT needs its line back in order;
        // strict readiness depends on positions, so there both units are restored.
        let restore = |s: &Self, slot: usize| s.engine.mode == Mode::Strict || !s.ia_done[s.content[slot]];
        let (fix_a, fix_b) = (restore(self, up), restore(self, up + 1));
        while rnd % l != 0 {
            for p in (rnd % 2..l - 1).step_by(2) {
                if fix_a {
                    self.engine.swap(a[p], a[p + 1]);
                }
                if fix_b {
                    self.engine.swap(b[p], b[p + 1]);
                }
            }
            rnd += 1;
        }
        if rnd % (2 * l) == l {
            if fix_a {
                self.reversed[up] = !self.reversed[up];
            }
            if fix_b {
                self.reversed[up + 1] = !self.reversed[up + 1];
            }
        }
        let (x, y) = (self.content[up], self.content[up + 1]);
        self.ie_done.insert((x.min(y), x.max(y)));
        self.record(PhaseKind::Inter, (up, up + 1), start);
        rnd
    }

    /// Exchanges the contents of slots `up` and `up + 1` in three SWAP layers.
    pub fn unit_swap(&mut self, up: usize) {
        let start = self.engine.gates.len();
        for (x, y) in unit_swap_pairs(self.m, up).into_iter().flatten() {
            self.engine.swap(x, y);
        }
        self.content.swap(up, up + 1);
        self.reversed.swap(up, up + 1);
        self.record(PhaseKind::UnitSwap, (up, up + 1), start);
    }

    fn try_intra(&mut self) {
        for s in 0..self.units.len() {
            let u = self.content[s];
            if !self.ia_done[u] && (0..u).all(|x| self.ie_done.contains(&(x, u))) {
                self.intra_unit(s);
            }
        }
    }

    fn met(&self, x: usize, y: usize) -> bool {
        self.ie_done.contains(&(x.min(y), x.max(y)))
    }

    /// Whether the units in slots `s`, `s + 1` can run their inter-unit phase now.
    fn ie_eligible(&self, s: usize) -> bool {
        let (a, b) = (self.content[s], self.content[s + 1]);
        let (lo, hi) = (a.min(b), a.max(b));
        if !self.ia_done[lo] || self.ia_done[hi] || self.met(lo, hi) {
            return false;
        }
        match self.engine.mode {
            Mode::Relaxed => true,
            Mode::Strict => a < b && (0..lo).all(|x| self.met(x, hi)) && (lo + 1..hi).all(|y| self.met(lo, y)),
        }
    }

    /// Change in summed slot distance over unit pairs that have not met if slots `s`,
    /// `s + 1` exchange contents.
    fn swap_gain(&self, s: usize) -> isize {
        let k = self.units.len();
        let (a, b) = (self.content[s], self.content[s + 1]);
        let mut delta = 0;
        for t in 0..k {
            if t == s || t == s + 1 {
                continue;
            }
            let u = self.content[t];
            for (x, from, to) in [(a, s, s + 1), (b, s + 1, s)] {
                if !self.met(x, u) {
                    delta += t.abs_diff(to) as isize - t.abs_diff(from) as isize;
                }
            }
        }
        delta
    }

    /// Runs the unit-level line pattern to completion.
    pub fn run(&mut self) {
        let k = self.units.len();
        let pairs = k * (k - 1) / 2;
        self.try_intra();
        let mut rounds = 0;
        while self.ie_done.len() < pairs {
            rounds += 1;
            assert!(rounds <= 4 * k + 4, "unit schedule stalled");
            let mut busy = vec![false; k];
            for s in 0..k - 1 {
                if !busy[s] && !busy[s + 1] && self.ie_eligible(s) {
                    self.inter_unit(s);
                    busy[s] = true;
                    busy[s + 1] = true;
                }
            }
            // Line pattern: a finished pair passes each other. Any other exchange has to
            // bring waiting pairs closer. Largest gains go first.
            let mut cands: Vec<(isize, usize)> = Vec::new();
            if self.ie_done.len() < pairs {
                for s in 0..k - 1 {
                    let (a, b) = (self.content[s], self.content[s + 1]);
                    let gain = self.swap_gain(s);
                    let passes = a < b && self.met(a, b);
                    match self.policy {
                        UnitOrder::Line if passes => cands.push((0, s)),
                        UnitOrder::Nearest if (passes && gain <= 0) || gain < 0 => cands.push((gain, s)),
                        _ => {}
                    }
                }
            }
            if cands.is_empty() && !busy.iter().any(|&b| b) && self.ie_done.len() < pairs {
                // Nothing else can move: fall back to the plain line pattern.
                cands = (0..k - 1).filter(|&s| self.content[s] < self.content[s + 1] && self.met(self.content[s], self.content[s + 1])).map(|s| (0, s)).collect();
            }
            cands.sort();
            let mut moved = vec![false; k];
            for (_, s) in cands {
                if !moved[s] && !moved[s + 1] {
                    self.unit_swap(s);
                    moved[s] = true;
                    moved[s + 1] = true;
                }
            }
            self.try_intra();
        }
        self.try_intra();
    }

    /// Two-qubit depth of a recorded phase when run on its own.
    pub fn phase_depth(&self, phase: &Phase) -> u64 {
        slice_depth(&self.engine.gates[phase.gates.clone()], self.engine.n())
    }
}

fn slice_depth(gates: &[Gate], n: usize) -> u64 {
    let c = layerize(gates, n, n, (0..n).collect()).expect("gate slice is well formed");
    metrics(&c, &LatencyModel::nisq()).depth
}

/// SWAP pairs of the three unit-swap layers between slots `up` and `up + 1`.
pub fn unit_swap_pairs(m: usize, up: usize) -> [Vec<(usize, usize)>; 3] {
    let a = |p| sycamore_qubit(m, up, p);
    let b = |p| sycamore_qubit(m, up + 1, p);
    let cross: Vec<(usize, usize)> = (0..m).map(|c| (a(2 * c + 1), b(2 * c))).collect();
    let inner: Vec<(usize, usize)> = (0..m).flat_map(|c| [(a(2 * c), a(2 * c + 1)), (b(2 * c), b(2 * c + 1))]).collect();
    [cross.clone(), inner, cross]
}

/// Unit swap between two slots as three SWAP layers; the slots must be neighbours.
pub fn unit_swap(m: usize, unit_a: usize, unit_b: usize) -> Result<Vec<Vec<Gate>>, ConstraintError> {
    if unit_a.abs_diff(unit_b) != 1 {
        return Err(ConstraintError::NotAdjacent(unit_a, unit_b));
    }
    let pairs = unit_swap_pairs(m, unit_a.min(unit_b));
    Ok(pairs.iter().map(|l| l.iter().map(|&(x, y)| Gate::swap(x, y)).collect()).collect())
}

pub fn map_qft_sycamore(m: usize, mode: Mode) -> Result<LayeredCircuit, ConstraintError> {
    Ok(schedule_sycamore(m, mode)?.engine.into_circuit())
}

/// Full schedule with its phase record. In relaxed mode both unit orders are tried and
/// the shallower one kept, fewer SWAPs breaking ties; strict mode uses the line pattern.
pub fn schedule_sycamore(m: usize, mode: Mode) -> Result<SycamoreSchedule, ConstraintError> {
    if m % 2 == 1 {
        return Err(ConstraintError::OddM);
    }
    if m < 2 {
        return Err(ConstraintError::TooSmall { what: "m", min: 2 });
    }
    let cost = |s: &SycamoreSchedule| {
        let c = s.engine.clone().into_circuit();
        let mt = metrics(&c, &LatencyModel::nisq());
        (mt.depth, mt.swap_count)
    };
    let policies: &[UnitOrder] = match mode {
        Mode::Strict => &[UnitOrder::Line],
        Mode::Relaxed => &[UnitOrder::Line, UnitOrder::Nearest],
    };
    let best = policies
        .iter()
        .map(|&policy| schedule_with(m, mode, policy))
        .min_by_key(|s| cost(s))
        .expect("at least one candidate");
    Ok(best)
}

/// Schedule for `m` with a fixed unit order.
pub fn schedule_with(m: usize, mode: Mode, policy: UnitOrder) -> SycamoreSchedule {
    let mut s = SycamoreSchedule::new(m, m / 2, mode);
    s.policy = policy;
    s.run();
    s
}

/// Two units of `m` columns: intra-unit QFT on the top one, then the inter-unit
/// interaction. Returns the depth of each phase.
pub fn two_unit_depths(m: usize, mode: Mode) -> (u64, u64) {
    let mut s = SycamoreSchedule::new(m, 2, mode);
    s.intra_unit(0);
    s.inter_unit(0);
    (s.phase_depth(&s.phases[0]), s.phase_depth(&s.phases[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_m_rejected() {
        assert_eq!(map_qft_sycamore(3, Mode::Relaxed).unwrap_err(), ConstraintError::OddM);
    }

    #[test]
    fn two_by_two_is_a_line() {
        let c = map_qft_sycamore(2, Mode::Relaxed).unwrap();
        let mt = metrics(&c, &LatencyModel::nisq());
        assert_eq!((mt.depth, mt.swap_count), (10, 6));
    }

    #[test]
    fn unit_swap_exchanges_contents() {
        for m in [2, 3, 4, 6] {
            let layers = unit_swap(m, 0, 1).unwrap();
            assert_eq!(layers.len(), 3);
            let mut occ: Vec<usize> = (0..4 * m).collect();
            for g in layers.iter().flatten() {
                if let Gate::Swap { a, b, .. } = *g {
                    occ.swap(a, b);
                }
            }
            for u in 0..2 {
                for p in 0..2 * m {
                    let here = occ[sycamore_qubit(m, u, p)];
                    assert_eq!(here, sycamore_qubit(m, 1 - u, p), "m={m} u={u} p={p}");
                }
            }
        }
        assert!(unit_swap(4, 0, 2).is_err());
    }

    #[test]
    fn three_column_unit_swap_has_twelve_swaps() {
        let n: usize = unit_swap(3, 0, 1).unwrap().iter().map(Vec::len).sum();
        assert_eq!(n, 12);
    }

    #[test]
    fn inter_unit_mirrors_units() {
        let mut s = SycamoreSchedule::new(4, 2, Mode::Relaxed);
        s.intra_unit(0);
        let before: Vec<usize> = (0..8).map(|p| s.engine.at(sycamore_qubit(4, 1, p))).collect();
        s.inter_unit(0);
        let after: Vec<usize> = (0..8).map(|p| s.engine.at(sycamore_qubit(4, 1, p))).collect();
        let mirrored: Vec<usize> = before.iter().rev().copied().collect();
        assert!(after == mirrored || after == before);
    }
}
