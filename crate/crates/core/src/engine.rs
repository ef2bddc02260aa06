//! Bookkeeping shared by the mappers: where each logical qubit sits, which gates have
//! run, and the emitted physical gate stream.

use crate::circuit::{layerize, Gate, LayeredCircuit};
use crate::dependence::{Mode, OrderTracker};

#[derive(Clone, Debug)]
pub struct Engine {
    pub mode: Mode,
    initial: Vec<usize>,
    pos: Vec<usize>,
    occ: Vec<usize>,
    order: OrderTracker,
    pub gates: Vec<Gate>,
}

impl Engine {
    /// `initial_map[l]` is the physical home of logical `l`; logical and physical counts match.
    pub fn new(initial_map: Vec<usize>, mode: Mode) -> Engine {
        let n = initial_map.len();
        let mut occ = vec![usize::MAX; n];
        for (l, &p) in initial_map.iter().enumerate() {
            occ[p] = l;
        }
        Engine {
            mode,
            pos: initial_map.clone(),
            initial: initial_map,
            occ,
            order: OrderTracker::new(n, Mode::Relaxed),
            gates: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    /// Logical qubit on physical `p`.
    pub fn at(&self, p: usize) -> usize {
        self.occ[p]
    }

    pub fn is_done(&self, p: usize, q: usize) -> bool {
        self.order.is_done(self.occ[p], self.occ[q])
    }

    pub fn ready(&self, p: usize, q: usize) -> bool {
        self.order.cp_ready_in(self.occ[p], self.occ[q], self.mode)
    }

    pub fn ready_in(&self, p: usize, q: usize, mode: Mode) -> bool {
        self.order.cp_ready_in(self.occ[p], self.occ[q], mode)
    }

    pub fn h_done(&self, p: usize) -> bool {
        self.order.h_done(self.occ[p])
    }

    pub fn h_done_logical(&self, l: usize) -> bool {
        self.order.h_done(l)
    }

    pub fn done_logical(&self, x: usize, y: usize) -> bool {
        self.order.is_done(x, y)
    }

    pub fn cp(&mut self, p: usize, q: usize) {
        let (x, y) = (self.occ[p], self.occ[q]);
        debug_assert!(self.order.cp_ready_in(x, y, Mode::Relaxed), "CP({x},{y}) not ready");
        self.order.step(x, y).expect("mapper emitted an out-of-order CPHASE");
        let (a, b) = if x < y { (p, q) } else { (q, p) };
        self.gates.push(Gate::cphase(a, b, x.abs_diff(y) as u32));
    }

    fn exchange(&mut self, p: usize, q: usize) {
        let (x, y) = (self.occ[p], self.occ[q]);
        self.occ.swap(p, q);
        self.pos[x] = q;
        self.pos[y] = p;
    }

    pub fn swap(&mut self, p: usize, q: usize) {
        self.exchange(p, q);
        self.gates.push(Gate::swap(p, q));
    }

    /// SWAP built from three CNOTs.
    pub fn slow_swap(&mut self, p: usize, q: usize) {
        self.exchange(p, q);
        self.gates.push(Gate::slow_swap(p, q));
    }

    pub fn h(&mut self, p: usize) {
        let l = self.occ[p];
        self.order.step(l, l).expect("mapper emitted an early H");
        self.gates.push(Gate::H(p));
    }

    /// Applies H on every listed physical qubit whose logical qubit has finished its inputs.
    pub fn try_h(&mut self, phys: impl IntoIterator<Item = usize>) -> bool {
        let mut any = false;
        for p in phys {
            if self.order.h_ready(self.occ[p]) {
                self.h(p);
                any = true;
            }
        }
        any
    }

    pub fn all_h_done(&self) -> bool {
        (0..self.n()).all(|l| self.order.h_done(l))
    }

    pub fn into_circuit(self) -> LayeredCircuit {
        let n = self.pos.len();
        layerize(&self.gates, n, n, self.initial).expect("mapper output is well formed")
    }
}
