//! Architecture-aware QFT compilation: mappers for line, heavy-hex, Sycamore and
//! lattice-surgery layouts, plus a verifier for the circuits they emit.

pub mod bench;
pub mod circuit;
pub mod dependence;
pub mod engine;
pub mod error;
pub mod heavyhex;
pub mod io;
pub mod lattice;
pub mod lnn;
pub mod partition;
pub mod sycamore;
pub mod topology;
pub mod verifier;

pub use circuit::{build_logical_qft, layerize, metrics, Gate, LatencyModel, LayeredCircuit, LogicalCircuit, Metrics};
pub use dependence::Mode;
pub use error::{CircuitError, ConstraintError, ParseError};
pub use heavyhex::map_qft_heavyhex;
pub use lattice::map_qft_lattice;
pub use lnn::map_qft_lnn;
pub use sycamore::map_qft_sycamore;
pub use topology::{build_heavyhex, build_lattice, build_lnn, build_sycamore, CouplingGraph, EdgeKind};

/// Supported target layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arch {
    Lnn,
    HeavyHex,
    Sycamore,
    Lattice,
}

impl Arch {
    pub fn name(self) -> &'static str {
        match self {
            Arch::Lnn => "lnn",
            Arch::HeavyHex => "heavyhex",
            Arch::Sycamore => "sycamore",
            Arch::Lattice => "lattice",
        }
    }
}

impl std::str::FromStr for Arch {
    type Err = String;

    fn from_str(s: &str) -> Result<Arch, String> {
        match s {
            "lnn" => Ok(Arch::Lnn),
            "heavyhex" => Ok(Arch::HeavyHex),
            "sycamore" => Ok(Arch::Sycamore),
            "lattice" => Ok(Arch::Lattice),
            _ => Err(format!("unknown architecture `{s}` (expected lnn, heavyhex, sycamore or lattice)")),
        }
    }
}

/// A compiled circuit together with the coupling graph it targets.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub arch: Arch,
    pub circuit: LayeredCircuit,
    pub graph: CouplingGraph,
}

/// Coupling graph for `arch` at `size` (same units as [`compile`]).
pub fn graph_for(arch: Arch, size: usize) -> Result<CouplingGraph, ConstraintError> {
    match arch {
        Arch::Lnn => Ok(build_lnn(size)),
        Arch::HeavyHex => Ok(build_heavyhex(size)?.graph),
        Arch::Sycamore => build_sycamore(size),
        Arch::Lattice => build_lattice(size),
    }
}

/// Compiles the QFT for `arch`. `size` is the qubit count for `lnn`, the group count for
/// `heavyhex` and the grid side for `sycamore` and `lattice`.
pub fn compile(arch: Arch, size: usize, mode: Mode) -> Result<Compiled, ConstraintError> {
    let (circuit, graph) = match arch {
        Arch::Lnn => {
            if size < 1 {
                return Err(ConstraintError::TooSmall { what: "n", min: 1 });
            }
            (map_qft_lnn(size), build_lnn(size))
        }
        Arch::HeavyHex => {
            let hh = build_heavyhex(size)?;
            (map_qft_heavyhex(&hh), hh.graph)
        }
        Arch::Sycamore => (map_qft_sycamore(size, mode)?, build_sycamore(size)?),
        Arch::Lattice => (map_qft_lattice(size)?, build_lattice(size)?),
    };
    Ok(Compiled { arch, circuit, graph })
}
