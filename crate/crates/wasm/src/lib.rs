//! WebAssembly bindings for the demo page in `www/`: compile a QFT for one layout, step
//! through its layers, and sweep sizes.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qftr::circuit::{metrics, Gate, LatencyModel};
use qftr::verifier::{verify, MappingTrace};
use qftr::{bench, compile, Arch, Compiled, Mode};

/// Largest instance the page will compile; keeps the tab responsive.
pub const MAX_QUBITS: usize = 1024;

fn parse(arch: &str, order: &str) -> Result<(Arch, Mode), String> {
    Ok((arch.parse()?, order.parse()?))
}

fn qubits(arch: Arch, size: usize) -> usize {
    match arch {
        Arch::Lnn => size,
        Arch::HeavyHex => 5 * size,
        Arch::Sycamore | Arch::Lattice => size * size,
    }
}

fn gate_json(g: &Gate) -> Value {
    match *g {
        Gate::H(q) => json!({"kind": "h", "a": q}),
        Gate::CPhase { a, b, k } => json!({"kind": "cp", "a": a, "b": b, "k": k}),
        Gate::Swap { a, b, cnot } => json!({"kind": if cnot { "swap3" } else { "swap" }, "a": a, "b": b}),
        Gate::Cnot { control, target } => json!({"kind": "cx", "a": control, "b": target}),
    }
}

/// One compiled circuit kept alive between calls from the page.
#[wasm_bindgen]
pub struct Session {
    compiled: Compiled,
    mode: Mode,
    trace: MappingTrace,
}

impl Session {
    pub fn create(arch: &str, size: usize, order: &str) -> Result<Session, String> {
        let (arch, mode) = parse(arch, order)?;
        if qubits(arch, size) > MAX_QUBITS {
            return Err(format!("at most {MAX_QUBITS} qubits in the browser"));
        }
        let compiled = compile(arch, size, mode).map_err(|e| e.to_string())?;
        let trace = MappingTrace::new(&compiled.circuit);
        Ok(Session { compiled, mode, trace })
    }

    /// Metrics, verifier verdict and the coupling graph.
    pub fn summary_json(&self) -> String {
        let c = &self.compiled.circuit;
        let g = &self.compiled.graph;
        let steps = metrics(c, &LatencyModel::nisq());
        let weighted = metrics(c, &LatencyModel::lattice());
        let v = verify(c, Some(g), self.mode, 10);
        let edges: Vec<Value> = g.edges.iter().map(|&(a, b, k)| json!([a, b, format!("{k:?}")])).collect();
        json!({
            "arch": self.compiled.arch.name(),
            "n": c.n_logical,
            "layers": c.layers.len(),
            "depth_steps": steps.depth,
            "depth_weighted": weighted.depth,
            "swaps": steps.swap_count,
            "cnots": steps.cnot_count,
            "cphases": steps.cphase_count,
            "verified": v.ok(),
            "failure": v.first_failure(),
            "oracle": v.oracle,
            "coords": g.coords,
            "edges": edges,
        })
        .to_string()
    }

    /// Gates of layer `i` and the logical qubit on each physical qubit before it.
    pub fn layer_json(&self, i: usize) -> Result<String, String> {
        let c = &self.compiled.circuit;
        let layer = c.layers.get(i).ok_or_else(|| format!("layer {i} out of range (0..{})", c.layers.len()))?;
        let mut occupant: Vec<Option<usize>> = vec![None; c.n_physical];
        for (l, &p) in self.trace.maps[i].iter().enumerate() {
            occupant[p] = Some(l);
        }
        Ok(json!({
            "index": i,
            "gates": layer.iter().map(gate_json).collect::<Vec<_>>(),
            "occupant": occupant,
        })
        .to_string())
    }
}

#[wasm_bindgen]
impl Session {
    #[wasm_bindgen(constructor)]
    pub fn new(arch: &str, size: usize, order: &str) -> Result<Session, JsError> {
        Session::create(arch, size, order).map_err(|e| JsError::new(&e))
    }

    pub fn summary(&self) -> String {
        self.summary_json()
    }

    #[wasm_bindgen(js_name = layerCount)]
    pub fn layer_count(&self) -> usize {
        self.compiled.circuit.layers.len()
    }

    pub fn layer(&self, i: usize) -> Result<String, JsError> {
        self.layer_json(i).map_err(|e| JsError::new(&e))
    }
}

/// CSV of a size sweep followed by the fit line, as in the `bench` command.
pub fn sweep_csv(arch: &str, sizes: &str, order: &str) -> Result<String, String> {
    let (arch, mode) = parse(arch, order)?;
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad size `{}`", s.trim())))
        .collect::<Result<_, _>>()?;
    if let Some(&s) = sizes.iter().find(|&&s| qubits(arch, s) > MAX_QUBITS) {
        return Err(format!("size {s} exceeds {MAX_QUBITS} qubits"));
    }
    let rows = bench::run(arch, &sizes, mode, &LatencyModel::lattice()).map_err(|e| e.to_string())?;
    let mut out = bench::to_csv(&rows);
    if let Some(fit) = bench::fit_report(&rows) {
        out.push_str(&format!("# {fit}\n"));
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn sweep(arch: &str, sizes: &str, order: &str) -> Result<String, JsError> {
    sweep_csv(arch, sizes, order).map_err(|e| JsError::new(&e))
}
