//! QFT on a lattice-surgery grid. Rows are units; rows pair into blocks that first run a
//! combined two-row pattern, then interact with other blocks while rows move past each
//! other through transversal vertical swaps.

use std::collections::HashSet;

use crate::circuit::{Gate, LayeredCircuit};
use crate::dependence::Mode;
use crate::engine::Engine;
use crate::error::ConstraintError;

/// Row-pair blocks in column zigzag order: logical `2mk + 2c + r % 2` at row `r` of
/// block `k`, column `c`. With odd `m` the last row is a block of its own in row order.
pub fn lattice_initial_map(m: usize) -> Vec<usize> {
    let n = m * m;
    let mut map = vec![0; n];
    for r in 0..m {
        for c in 0..m {
            let l = if m % 2 == 1 && r == m - 1 { r * m + c } else { 2 * m * (r / 2) + 2 * c + r % 2 };
            map[l] = r * m + c;
        }
    }
    map
}

/// One layer of CNOT-built SWAPs exchanging two neighbouring rows.
pub fn transversal_unit_swap(m: usize, row_a: usize, row_b: usize) -> Result<Vec<Gate>, ConstraintError> {
    if row_a.abs_diff(row_b) != 1 || row_a.max(row_b) >= m {
        return Err(ConstraintError::NotAdjacent(row_a, row_b));
    }
    let r = row_a.min(row_b);
    Ok((0..m).map(|c| Gate::slow_swap(r * m + c, (r + 1) * m + c)).collect())
}

pub struct LatticeSchedule {
    m: usize,
    pub engine: Engine,
    /// Unit held by each row.
    row_unit: Vec<usize>,
    /// Whether a row's contents run right to left.
    reversed: Vec<bool>,
    ie_done: HashSet<(usize, usize)>,
    ia_done: Vec<bool>,
}

impl LatticeSchedule {
    pub fn new(m: usize) -> LatticeSchedule {
        LatticeSchedule {
            m,
            engine: Engine::new(lattice_initial_map(m), Mode::Relaxed),
            row_unit: (0..m).collect(),
            reversed: vec![false; m],
            ie_done: HashSet::new(),
            ia_done: vec![false; m.div_ceil(2)],
        }
    }

    fn q(&self, r: usize, c: usize) -> usize {
        r * self.m + c
    }

    fn blocks(&self) -> usize {
        self.m.div_ceil(2)
    }

    fn units_in(&self, b: usize) -> Vec<usize> {
        [2 * b, 2 * b + 1].into_iter().filter(|&u| u < self.m).collect()
    }

    fn row_of(&self, u: usize) -> usize {
        self.row_unit.iter().position(|&x| x == u).expect("unit is placed")
    }

    fn line(&self, r: usize) -> Vec<usize> {
        let mut line: Vec<usize> = (0..self.m).map(|c| self.q(r, c)).collect();
        if self.reversed[r] {
            line.reverse();
        }
        line
    }

    /// Combined two-row QFT over a block: vertical pairs, then increasing neighbours
    /// along each row, then swaps of finished neighbours. Runs in strict order.
    pub fn two_by_n(&mut self, top: usize, bottom: Option<usize>) {
        let m = self.m;
        let mut rows = vec![self.line(top)];
        if let Some(b) = bottom {
            rows.push(self.line(b));
        }
        let all: Vec<usize> = rows.iter().flatten().copied().collect();
        let e = &mut self.engine;
        e.try_h(all.iter().copied());
        loop {
            let mut progress = false;
            let mut busy = HashSet::new();
            if let Some(b) = bottom {
                for c in 0..m {
                    let (p, q) = (top * m + c, b * m + c);
                    if e.ready_in(p, q, Mode::Strict) {
                        e.cp(p, q);
                        busy.insert(p);
                        busy.insert(q);
                        progress = true;
                    }
                }
            }
            for line in &rows {
                for w in line.windows(2) {
                    let (p, q) = (w[0], w[1]);
                    if busy.contains(&p) || busy.contains(&q) {
                        continue;
                    }
                    if e.at(p) < e.at(q) && e.ready_in(p, q, Mode::Strict) {
                        e.cp(p, q);
                        busy.insert(p);
                        busy.insert(q);
                        progress = true;
                    }
                }
            }
            let mut moved = HashSet::new();
            for line in &rows {
                for w in line.windows(2) {
                    let (p, q) = (w[0], w[1]);
                    if moved.contains(&p) || moved.contains(&q) {
                        continue;
                    }
                    if e.at(p) < e.at(q) && e.is_done(p, q) {
                        e.swap(p, q);
                        moved.insert(p);
                        moved.insert(q);
                        progress = true;
                    }
                }
            }
            progress |= e.try_h(all.iter().copied());
            if !progress {
                break;
            }
        }
        self.reversed[top] = !self.reversed[top];
        if let Some(b) = bottom {
            self.reversed[b] = !self.reversed[b];
        }
    }

    /// `m` rounds of odd-even transposition on row `r`, reversing its contents.
    fn reverse_row(&mut self, r: usize) {
        let m = self.m;
        for t in 0..m {
            for p in (t % 2..m - 1).step_by(2) {
                self.engine.swap(r * m + p, r * m + p + 1);
            }
        }
        self.reversed[r] = !self.reversed[r];
    }

    /// All cross CPHASEs between each listed row `r` and row `r + 1`.
    ///
    /// The moving rows shift by odd-even transposition, each offset by its parity, so
    /// every qubit passes every qubit of the facing row over `m` rounds. Partner rows of
    /// blocks that have not run their two-row pattern move along to keep orientations
    /// matched.
    pub fn pure_ie(&mut self, pairs: &[usize]) {
        let m = self.m;
        let mut rows: Vec<usize> = pairs.iter().flat_map(|&r| [r, r + 1]).collect();
        for r in rows.clone() {
            let b = self.row_unit[r] / 2;
            if !self.ia_done[b] {
                for u in self.units_in(b) {
                    rows.push(self.row_of(u));
                }
            }
        }
        rows.sort_unstable();
        rows.dedup();
        let mut t = 0;
        loop {
            for par in 0..2 {
                for &r in pairs.iter().filter(|&&r| r % 2 == par) {
                    for c in 0..m {
                        let (p, q) = (self.q(r, c), self.q(r + 1, c));
                        if self.engine.ready(p, q) {
                            self.engine.cp(p, q);
                        }
                    }
                }
            }
            if t >= m {
                break;
            }
            for &r in &rows {
                for p in ((t + r) % 2..m - 1).step_by(2) {
                    self.engine.swap(self.q(r, p), self.q(r, p + 1));
                }
            }
            t += 1;
        }
        for &r in &rows {
            self.reversed[r] = !self.reversed[r];
        }
        for &r in pairs {
            let (x, y) = (self.row_unit[r], self.row_unit[r + 1]);
            debug_assert!((0..m).all(|c| (0..m).all(|d| self.engine.is_done(self.q(r, c), self.q(r + 1, d)))));
            self.ie_done.insert((x.min(y), x.max(y)));
        }
    }

    pub fn unit_swap(&mut self, r: usize) {
        for g in transversal_unit_swap(self.m, r, r + 1).expect("rows are adjacent") {
            if let Gate::Swap { a, b, .. } = g {
                self.engine.slow_swap(a, b);
            }
        }
        self.row_unit.swap(r, r + 1);
        self.reversed.swap(r, r + 1);
    }

    fn block_ready(&self, b: usize) -> bool {
        self.units_in(b).iter().all(|&y| (0..2 * b).all(|x| self.ie_done.contains(&(x, y))))
    }

    /// Rows `r`, `r + 1` hold units of different blocks, the lower one finished with its
    /// two-row pattern and the higher one not, and they have not met yet.
    fn wants_ie(&self, r: usize) -> bool {
        let (x, y) = (self.row_unit[r], self.row_unit[r + 1]);
        let (lo, hi) = (x.min(y), x.max(y));
        lo / 2 != hi / 2 && self.ia_done[lo / 2] && !self.ia_done[hi / 2] && !self.ie_done.contains(&(lo, hi))
    }

    /// Two-row pattern for block `b` if its rows are neighbours; returns whether it ran.
    pub fn intra_block(&mut self, b: usize) -> bool {
        let us = self.units_in(b);
        let rs: Vec<usize> = us.iter().map(|&u| self.row_of(u)).collect();
        if let [r0, r1] = rs[..] {
            if r0.abs_diff(r1) != 1 {
                return false;
            }
            let (top, bottom) = (r0.min(r1), r0.max(r1));
            if self.reversed[top] != self.reversed[bottom] {
                self.reverse_row(bottom);
            }
            self.two_by_n(top, Some(bottom));
            self.ie_done.insert((us[0], us[1]));
        } else {
            self.two_by_n(rs[0], None);
        }
        self.ia_done[b] = true;
        true
    }

    pub fn run(&mut self) {
        let m = self.m;
        let nb = self.blocks();
        let mut rounds = 0;
        while self.ia_done.iter().any(|d| !d) {
            rounds += 1;
            assert!(rounds <= 10 * m, "lattice schedule stalled");
            // Pairs among rows already waiting go first so they overlap with the two-row
            // pattern; pairs opened by a block that just finished follow it.
            for stage in 0..2 {
                let pairs: Vec<usize> = (0..m - 1).filter(|&r| self.wants_ie(r)).collect();
                if !pairs.is_empty() {
                    self.pure_ie(&pairs);
                }
                if stage == 0 {
                    for b in 0..nb {
                        if !self.ia_done[b] && self.block_ready(b) {
                            self.intra_block(b);
                        }
                    }
                }
            }
            // Two unit-swap layers; the second also moves rows toward pending partners.
            let mut just = vec![false; m];
            for second in [false, true] {
                let mut now = vec![false; m];
                let mut r = 0;
                while r + 1 < m {
                    let (x, y) = (self.row_unit[r], self.row_unit[r + 1]);
                    let ok = self.ie_done.contains(&(x.min(y), x.max(y))) || (second && self.wants_ie(r));
                    if x / 2 < y / 2 && ok && !just[r] {
                        self.unit_swap(r);
                        now[r] = true;
                        r += 2;
                    } else {
                        r += 1;
                    }
                }
                just = now;
            }
        }
    }
}

pub fn map_qft_lattice(m: usize) -> Result<LayeredCircuit, ConstraintError> {
    if m < 2 {
        return Err(ConstraintError::TooSmall { what: "m", min: 2 });
    }
    let mut s = LatticeSchedule::new(m);
    s.run();
    Ok(s.engine.into_circuit())
}
