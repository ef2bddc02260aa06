//! Coupling graphs for the supported architectures.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::error::{ConstraintError, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    #[serde(rename = "std")]
    Standard,
    #[serde(rename = "fast")]
    FastSwap,
    #[serde(rename = "cx")]
    CnotOnly,
}

impl EdgeKind {
    /// CNOT-only links carry CPHASE and CNOT, and SWAP only as three CNOTs.
    pub fn permits(self, g: &Gate) -> bool {
        match g {
            Gate::H(_) => true,
            Gate::Swap { cnot: false, .. } => self != EdgeKind::CnotOnly,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, EdgeKind)>,
    /// Grid placement used for rendering.
    pub coords: Vec<(i64, i64)>,
    pub units: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), EdgeKind>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    edges: Vec<(usize, usize, EdgeKind)>,
    #[serde(default)]
    units: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize, EdgeKind)>,
        coords: Vec<(i64, i64)>,
        units: Vec<Vec<usize>>,
    ) -> Result<CouplingGraph, ParseError> {
        let mut index = HashMap::new();
        for &(u, v, k) in &edges {
            if u >= n || v >= n || u == v {
                return Err(ParseError::Graph(format!("bad edge ({u},{v}) for n={n}")));
            }
            if index.insert((u.min(v), u.max(v)), k).is_some() {
                return Err(ParseError::Graph(format!("duplicate edge ({u},{v})")));
            }
        }
        if !units.is_empty() {
            let mut seen = vec![false; n];
            for &q in units.iter().flatten() {
                if q >= n || seen[q] {
                    return Err(ParseError::Graph(format!("units do not partition 0..{n} (qubit {q})")));
                }
                seen[q] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(ParseError::Graph(format!("units do not cover 0..{n}")));
            }
        }
        Ok(CouplingGraph { n, edges, coords, units, index })
    }

    pub fn edge_kind(&self, a: usize, b: usize) -> Option<EdgeKind> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn degree(&self, q: usize) -> usize {
        self.edges.iter().filter(|(u, v, _)| *u == q || *v == q).count()
    }

    pub fn count_kind(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.2 == kind).count()
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc { n: self.n, edges: self.edges.clone(), units: self.units.clone() };
        serde_json::to_string(&doc).expect("graph serialises")
    }

    pub fn from_json(text: &str) -> Result<CouplingGraph, ParseError> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        CouplingGraph::new(doc.n, doc.edges, Vec::new(), doc.units)
    }
}

pub fn build_lnn(n: usize) -> CouplingGraph {
    let edges = (1..n).map(|i| (i - 1, i, EdgeKind::Standard)).collect();
    let coords = (0..n as i64).map(|i| (i, 0)).collect();
    CouplingGraph::new(n, edges, coords, vec![(0..n).collect()]).expect("path graph is valid")
}

/// Main line of `4g` qubits (physical `0..4g`) with one dangling qubit per group
/// (physical `4g + k`) hung below main-line position `4k + 3`.
#[derive(Clone, Debug)]
pub struct HeavyHex {
    pub groups: usize,
    pub graph: CouplingGraph,
    /// Logical → physical: group `k` holds logical `5k..5k+4` on main positions
    /// `4k..4k+3` and logical `5k+4` on its dangling qubit.
    pub initial_map: Vec<usize>,
}

impl HeavyHex {
    pub fn main_len(&self) -> usize {
        4 * self.groups
    }

    /// Main-line position carrying dangling qubit `k`.
    pub fn attachment(k: usize) -> usize {
        4 * k + 3
    }

    pub fn dangling(&self, k: usize) -> usize {
        4 * self.groups + k
    }
}

pub fn build_heavyhex(g: usize) -> Result<HeavyHex, ConstraintError> {
    if g < 1 {
        return Err(ConstraintError::TooSmall { what: "number of groups", min: 1 });
    }
    let main = 4 * g;
    let n = 5 * g;
    let mut edges: Vec<(usize, usize, EdgeKind)> = (1..main).map(|i| (i - 1, i, EdgeKind::Standard)).collect();
    let mut coords: Vec<(i64, i64)> = (0..main as i64).map(|i| (i, 0)).collect();
    for k in 0..g {
        edges.push((HeavyHex::attachment(k), main + k, EdgeKind::Standard));
        coords.push((HeavyHex::attachment(k) as i64, 1));
    }
    let mut initial_map = vec![0; n];
    for k in 0..g {
        for j in 0..4 {
            initial_map[5 * k + j] = 4 * k + j;
        }
        initial_map[5 * k + 4] = main + k;
    }
    let graph = CouplingGraph::new(n, edges, coords, Vec::new()).expect("heavy-hex graph is valid");
    Ok(HeavyHex { groups: g, graph, initial_map })
}

/// Physical index of line position `p` in Sycamore unit `u` (`m` columns).
///
/// Each unit is two rows; its line zigzags top, bottom, top, ... column by column.
pub fn sycamore_qubit(m: usize, u: usize, p: usize) -> usize {
    (2 * u + p % 2) * m + p / 2
}

/// `m × m` Sycamore modelled as `m/2` two-row units. Within a unit, line positions
/// `p` and `p + 1` are coupled. Between unit `u` and `u + 1`, odd position `p` of the
/// upper unit couples to positions `p - 1` and `p + 1` of the lower one.
pub fn build_sycamore(m: usize) -> Result<CouplingGraph, ConstraintError> {
    if m % 2 == 1 {
        return Err(ConstraintError::OddM);
    }
    if m < 2 {
        return Err(ConstraintError::TooSmall { what: "m", min: 2 });
    }
    let l = 2 * m;
    let k = m / 2;
    let mut edges = Vec::new();
    let mut units = Vec::new();
    for u in 0..k {
        let line: Vec<usize> = (0..l).map(|p| sycamore_qubit(m, u, p)).collect();
        for p in 1..l {
            edges.push((line[p - 1], line[p], EdgeKind::Standard));
        }
        units.push(line);
    }
    for u in 0..k.saturating_sub(1) {
        for p in (1..l).step_by(2) {
            for q in [p - 1, p + 1] {
                if q < l {
                    edges.push((sycamore_qubit(m, u, p), sycamore_qubit(m, u + 1, q), EdgeKind::Standard));
                }
            }
        }
    }
    let coords = (0..m * m).map(|q| ((q % m) as i64, (q / m) as i64)).collect();
    Ok(CouplingGraph::new(m * m, edges, coords, units).expect("sycamore graph is valid"))
}

/// `m × m` grid: fast-SWAP links along rows, CNOT-only links between rows.
pub fn build_lattice(m: usize) -> Result<CouplingGraph, ConstraintError> {
    if m < 2 {
        return Err(ConstraintError::TooSmall { what: "m", min: 2 });
    }
    let mut edges = Vec::new();
    for r in 0..m {
        for c in 1..m {
            edges.push((r * m + c - 1, r * m + c, EdgeKind::FastSwap));
        }
    }
    for r in 1..m {
        for c in 0..m {
            edges.push(((r - 1) * m + c, r * m + c, EdgeKind::CnotOnly));
        }
    }
    let coords = (0..m * m).map(|q| ((q % m) as i64, (q / m) as i64)).collect();
    let units = (0..m).map(|r| (r * m..(r + 1) * m).collect()).collect();
    Ok(CouplingGraph::new(m * m, edges, coords, units).expect("lattice graph is valid"))
}
