use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("initial_map has {found} entries, expected {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("{n_logical} logical qubits do not fit on {n_physical} physical qubits")]
    TooFewPhysical { n_logical: usize, n_physical: usize },
    #[error("initial_map sends two logical qubits to physical {physical}")]
    MapNotInjective { physical: usize },
    #[error("qubit {qubit} out of range (n_physical = {n_physical}){}", at_layer(*.layer))]
    QubitOutOfRange { layer: Option<usize>, qubit: usize, n_physical: usize },
    #[error("layer {layer}: qubit {qubit} used by two gates")]
    QubitReused { layer: usize, qubit: usize },
    #[error("layer {layer}: two-qubit gate with both operands {qubit}")]
    SameOperands { layer: usize, qubit: usize },
    #[error("latencies must be at least 1")]
    ZeroLatency,
}

fn at_layer(layer: Option<usize>) -> String {
    match layer {
        Some(l) => format!(" in layer {l}"),
        None => String::new(),
    }
}

/// Size or shape constraints of an architecture.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("m must be even")]
    OddM,
    #[error("N must be a multiple of 5")]
    NotMultipleOfFive,
    #[error("{what} must be at least {min}")]
    TooSmall { what: &'static str, min: usize },
    #[error("units {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("invalid range list: {0}")]
    Ranges(String),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("JSON error at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("layer {layer}, gate {gate}: {msg}")]
    Gate { layer: usize, gate: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] CircuitError),
    #[error("graph: {0}")]
    Graph(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let msg = e.to_string();
        let msg = match msg.rfind(" at line ") {
            Some(i) => msg[..i].to_string(),
            None => msg,
        };
        ParseError::Json { line: e.line(), column: e.column(), msg }
    }
}
