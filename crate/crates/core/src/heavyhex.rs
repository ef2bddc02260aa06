//! QFT on the simplified heavy-hex graph: the line pattern runs along the main line and
//! the smallest active qubit is parked on each dangling point it passes.

use crate::circuit::LayeredCircuit;
use crate::dependence::Mode;
use crate::engine::Engine;
use crate::topology::HeavyHex;

pub fn map_qft_heavyhex(hh: &HeavyHex) -> LayeredCircuit {
    let g = hh.groups;
    let main = hh.main_len();
    let n = hh.graph.n;
    let mut e = Engine::new(hh.initial_map.clone(), Mode::Relaxed);
    let hang = |p: usize| -> Option<usize> { (p % 4 == 3).then(|| hh.dangling(p / 4)) };
    let attach: Vec<usize> = (0..g).map(HeavyHex::attachment).collect();
    let mut parked = vec![false; n];
    let total = n * (n - 1) / 2;
    let mut done = 0;

    e.try_h(0..n);
    let mut rounds = 0;
    while done < total {
        rounds += 1;
        assert!(rounds <= 8 * n + 16, "heavy-hex schedule stalled");
        let cand = (0..main).map(|p| e.at(p)).filter(|&l| !parked[l]).min();

        // Main-line CPHASEs first, then dangling links that are still free.
        let mut busy = vec![false; main];
        for p in 0..main - 1 {
            if busy[p] || busy[p + 1] {
                continue;
            }
            if e.at(p) < e.at(p + 1) && e.ready(p, p + 1) {
                e.cp(p, p + 1);
                busy[p] = true;
                busy[p + 1] = true;
                done += 1;
            }
        }
        for &a in &attach {
            let d = hang(a).unwrap();
            if !busy[a] && e.ready(a, d) {
                e.cp(a, d);
                busy[a] = true;
                done += 1;
            }
        }

        // Attachments still owing a CPHASE to their dangling qubit.
        let mut pending = vec![false; main];
        for &a in &attach {
            let d = hang(a).unwrap();
            pending[a] = !e.is_done(a, d) && !(e.h_done(a) && e.h_done(d));
        }

        let mut moved = vec![false; main];
        for &a in &attach {
            let d = hang(a).unwrap();
            let (y, x) = (e.at(a), e.at(d));
            if Some(y) == cand && !parked[x] && e.is_done(a, d) && y < x {
                e.swap(a, d);
                parked[y] = true;
                moved[a] = true;
            }
        }
        for p in 0..main - 1 {
            if moved[p] || moved[p + 1] {
                continue;
            }
            if !(e.at(p) < e.at(p + 1) && e.is_done(p, p + 1)) {
                continue;
            }
            // Keep the candidate under its dangling point until it can park.
            if let Some(d) = hang(p) {
                if Some(e.at(p)) == cand && !parked[e.at(d)] {
                    continue;
                }
            }
            let blocked = |q: usize| pending[q] && hang(q).is_some_and(|d| e.ready(q, d));
            if blocked(p) || blocked(p + 1) {
                continue;
            }
            e.swap(p, p + 1);
            moved[p] = true;
            moved[p + 1] = true;
        }
        e.try_h(0..n);
    }
    e.into_circuit()
}
