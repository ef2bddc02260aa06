//! Splitting the QFT over contiguous qubit ranges into intra-range (IA) and
//! inter-range (IE) blocks.

use std::ops::Range;

use crate::circuit::Gate;
use crate::dependence::Mode;
use crate::error::ConstraintError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// QFT restricted to one range.
    Intra(Range<usize>),
    /// Every cross CPHASE between two ranges, in the listed order.
    Inter { a: Range<usize>, b: Range<usize>, gates: Vec<Gate> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPlan {
    pub ranges: Vec<Range<usize>>,
    pub steps: Vec<Step>,
}

impl PartitionPlan {
    pub fn flatten(&self) -> Vec<Gate> {
        let mut out = Vec::new();
        for step in &self.steps {
            match step {
                Step::Intra(r) => out.extend(intra_gates(r.clone())),
                Step::Inter { gates, .. } => out.extend_from_slice(gates),
            }
        }
        out
    }
}

/// Textbook QFT over `r`.
pub fn intra_gates(r: Range<usize>) -> Vec<Gate> {
    let mut out = Vec::new();
    for i in r.clone() {
        out.push(Gate::H(i));
        for j in i + 1..r.end {
            out.push(Gate::cphase(i, j, (j - i) as u32));
        }
    }
    out
}

/// Cross gates between `a` and `b` (`a` entirely below `b`).
///
/// Strict keeps the textbook order (by smaller qubit, then larger). Relaxed lists the same
/// gates grouped by the larger qubit, an order only valid once the shared-slot rule is dropped.
pub fn ie_gate_orders(a: Range<usize>, b: Range<usize>, mode: Mode) -> Vec<Gate> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    match mode {
        Mode::Strict => {
            for x in a.clone() {
                for y in b.clone() {
                    out.push(Gate::cphase(x, y, (y - x) as u32));
                }
            }
        }
        Mode::Relaxed => {
            for y in b.clone() {
                for x in a.clone().rev() {
                    out.push(Gate::cphase(x, y, (y - x) as u32));
                }
            }
        }
    }
    out
}

/// The QFT on `[0, split)`, the cross gates in original order, then the QFT on `[split, n)`.
pub fn two_partition(n: usize, split: usize) -> Result<Vec<Gate>, ConstraintError> {
    if split == 0 || split >= n {
        return Err(ConstraintError::Ranges(format!("split {split} outside 1..{n}")));
    }
    let mut out = intra_gates(0..split);
    out.extend(ie_gate_orders(0..split, split..n, Mode::Strict));
    out.extend(intra_gates(split..n));
    Ok(out)
}

/// Range 0 on its own, its cross blocks with ranges 1..k in turn, then the same over the
/// remaining ranges.
pub fn k_partition(ranges: &[Range<usize>]) -> Result<PartitionPlan, ConstraintError> {
    let mut expect = 0;
    for r in ranges {
        if r.start != expect || r.is_empty() {
            return Err(ConstraintError::Ranges(format!(
                "range {r:?} is empty or does not start at {expect}"
            )));
        }
        expect = r.end;
    }
    if ranges.is_empty() {
        return Err(ConstraintError::Ranges("no ranges".into()));
    }
    let mut steps = Vec::new();
    for (i, head) in ranges.iter().enumerate() {
        steps.push(Step::Intra(head.clone()));
        for tail in &ranges[i + 1..] {
            steps.push(Step::Inter {
                a: head.clone(),
                b: tail.clone(),
                gates: ie_gate_orders(head.clone(), tail.clone(), Mode::Strict),
            });
        }
    }
    Ok(PartitionPlan { ranges: ranges.to_vec(), steps })
}
