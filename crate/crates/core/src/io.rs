//! JSON import/export and OpenQASM 2 text output for layered circuits.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, LayeredCircuit};
use crate::error::ParseError;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    n_logical: usize,
    n_physical: usize,
    initial_map: Vec<usize>,
    layers: Vec<Vec<GateDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    kind: String,
    a: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    cnot: bool,
}

impl From<&Gate> for GateDoc {
    fn from(g: &Gate) -> GateDoc {
        let (a, b) = g.qubits();
        let (k, cnot) = match *g {
            Gate::CPhase { k, .. } => (Some(k), false),
            Gate::Swap { cnot, .. } => (None, cnot),
            _ => (None, false),
        };
        GateDoc { kind: g.kind_name().to_string(), a, b, k, cnot }
    }
}

impl GateDoc {
    fn to_gate(&self, layer: usize, gate: usize) -> Result<Gate, ParseError> {
        let err = |msg: String| ParseError::Gate { layer, gate, msg };
        let need_b = || self.b.ok_or_else(|| err(format!("`{}` needs field `b`", self.kind)));
        if self.cnot && self.kind != "swap" {
            return Err(err("field `cnot` only applies to swap".into()));
        }
        if self.k.is_some() && self.kind != "cp" {
            return Err(err("field `k` only applies to cp".into()));
        }
        let g = match self.kind.as_str() {
            "h" => {
                if self.b.is_some() {
                    return Err(err("`h` takes no field `b`".into()));
                }
                Gate::H(self.a)
            }
            "cp" => {
                let k = self.k.ok_or_else(|| err("`cp` needs field `k`".into()))?;
                Gate::CPhase { a: self.a, b: need_b()?, k }
            }
            "swap" => Gate::Swap { a: self.a, b: need_b()?, cnot: self.cnot },
            "cx" => Gate::Cnot { control: self.a, target: need_b()? },
            other => return Err(err(format!("unknown gate kind `{other}`"))),
        };
        Ok(g)
    }
}

pub fn export_json(c: &LayeredCircuit) -> String {
    let doc = CircuitDoc {
        n_logical: c.n_logical,
        n_physical: c.n_physical,
        initial_map: c.initial_map.clone(),
        layers: c.layers.iter().map(|l| l.iter().map(GateDoc::from).collect()).collect(),
    };
    serde_json::to_string(&doc).expect("circuit serialises")
}

pub fn import_json(text: &str) -> Result<LayeredCircuit, ParseError> {
    let doc: CircuitDoc = serde_json::from_str(text)?;
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (li, l) in doc.layers.iter().enumerate() {
        let gates = l.iter().enumerate().map(|(gi, g)| g.to_gate(li, gi)).collect::<Result<Vec<_>, _>>()?;
        layers.push(gates);
    }
    Ok(LayeredCircuit::new(doc.n_logical, doc.n_physical, doc.initial_map, layers)?)
}

fn angle(k: u32) -> String {
    match k {
        0 => "pi".to_string(),
        1..=62 => format!("pi/{}", 1u64 << k),
        _ => format!("pi/2**{k}"),
    }
}

/// OpenQASM 2 text, one gate per line and a `barrier` between layers.
///
/// The header records the initial mapping as a comment. CNOT-built SWAPs expand to
/// three `cx`.
pub fn export_qasm(c: &LayeredCircuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let map: Vec<String> = c.initial_map.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "// initial_map {}", map.join(" "));
    let _ = writeln!(out, "qreg q[{}];", c.n_physical);
    for (i, layer) in c.layers.iter().enumerate() {
        if i > 0 {
            out.push_str("barrier q;\n");
        }
        for g in layer {
            let _ = match *g {
                Gate::H(q) => writeln!(out, "h q[{q}];"),
                Gate::CPhase { a, b, k } => writeln!(out, "cp({}) q[{b}],q[{a}];", angle(k)),
                Gate::Swap { a, b, cnot: false } => writeln!(out, "swap q[{a}],q[{b}];"),
                Gate::Swap { a, b, cnot: true } => {
                    writeln!(out, "cx q[{a}],q[{b}];\ncx q[{b}],q[{a}];\ncx q[{a}],q[{b}];")
                }
                Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
            };
        }
    }
    out
}
