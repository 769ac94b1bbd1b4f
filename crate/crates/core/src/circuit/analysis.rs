//! Depth and gate accounting, plus dense unitary construction.

use super::{Circuit, CircuitError, Instruction};
use crate::quantum::embed_unitary;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Length of the longest chain of two-qubit entangling gates under
/// qubit-sharing dependency. Single-qubit gates are transparent; barriers add
/// no depth but fence the listed qubits into a common layer.
pub fn cnot_depth(c: &Circuit) -> usize {
    let mut depth = vec![0usize; c.num_qubits];
    let mut best = 0;
    for instr in &c.instructions {
        match instr {
            Instruction::Gate { gate, qubits }
            | Instruction::Conditional { gate, qubits, .. } => {
                if gate.is_entangling() {
                    let d = qubits.iter().map(|&q| depth[q]).max().unwrap_or(0) + 1;
                    for &q in qubits {
                        depth[q] = d;
                    }
                    best = best.max(d);
                }
            }
            Instruction::Barrier { qubits } => {
                let d = qubits.iter().map(|&q| depth[q]).max().unwrap_or(0);
                for &q in qubits {
                    depth[q] = d;
                }
            }
            _ => {}
        }
    }
    best
}

/// Multiset count of gate instructions per name (conditional gates counted
/// under their inner gate's name).
pub fn gate_counts(c: &Circuit) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for instr in &c.instructions {
        match instr {
            Instruction::Gate { gate, .. } | Instruction::Conditional { gate, .. } => {
                *out.entry(gate.name().to_string()).or_insert(0) += 1;
            }
            _ => {}
        }
    }
    out
}

/// Dense unitary of a measurement-free circuit. Terminal measurements are
/// skipped; any other non-unitary instruction is an error.
pub fn circuit_unitary(c: &Circuit) -> Result<DMatrix<Complex64>, CircuitError> {
    let dim = 1usize << c.num_qubits;
    if c.num_qubits > crate::QUBIT_CAP {
        return Err(CircuitError::Quantum(
            crate::quantum::QuantumError::ResourceLimit {
                requested: c.num_qubits,
                cap: crate::QUBIT_CAP,
            },
        ));
    }
    let mut u = DMatrix::identity(dim, dim);
    for (idx, instr) in c.instructions.iter().enumerate() {
        match instr {
            Instruction::Gate { gate, qubits } => {
                let g = embed_unitary(&gate.matrix(), qubits, c.num_qubits);
                u = g * u;
            }
            Instruction::Barrier { .. } => {}
            // a measurement is transparent when nothing acts on its qubit
            // afterwards
            Instruction::Measure { qubit, .. } => {
                let touched_later = c.instructions[idx + 1..]
                    .iter()
                    .any(|later| !matches!(later, Instruction::Barrier { .. } | Instruction::Measure { .. }) && later.qubits().contains(qubit));
                if touched_later {
                    return Err(CircuitError::Unsupported(format!(
                        "mid-circuit measurement on qubit {qubit} has no dense unitary"
                    )));
                }
            }
            other => {
                return Err(CircuitError::Unsupported(format!(
                    "non-unitary instruction {:?} in circuit",
                    other
                )))
            }
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn depth_empty_and_single_qubit_invariance() {
        let mut c = Circuit::new(3, 0);
        assert_eq!(cnot_depth(&c), 0);
        c.h(0).h(1).x(2);
        assert_eq!(cnot_depth(&c), 0);
        c.cx(0, 1);
        c.h(0);
        c.cx(1, 2);
        c.cx(0, 1);
        // chain: cx(0,1) -> cx(1,2) -> cx(0,1)? cx(0,1) depends on qubit1 depth 2
        assert_eq!(cnot_depth(&c), 3);
    }

    #[test]
    fn barriers_order_layers_without_adding_depth() {
        let mut a = Circuit::new(4, 0);
        a.cx(0, 1).cx(2, 3);
        assert_eq!(cnot_depth(&a), 1);
        let mut b = Circuit::new(4, 0);
        b.cx(0, 1).barrier(&[0, 1, 2, 3]).cx(2, 3);
        assert_eq!(cnot_depth(&b), 2);
    }

    #[test]
    fn counts() {
        let mut c = Circuit::new(2, 0);
        assert!(gate_counts(&c).is_empty());
        c.h(0).h(1).cx(0, 1).cx(1, 0).h(0);
        let counts = gate_counts(&c);
        assert_eq!(counts["h"], 3);
        assert_eq!(counts["cx"], 2);
    }

    #[test]
    fn unitary_matches_gate_product() {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1).measure(0, 0).measure(1, 1);
        let u = circuit_unitary(&c).unwrap();
        // column 0 should be the Bell state
        let col = u.column(0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((col[0].re - s).abs() < 1e-12);
        assert!((col[3].re - s).abs() < 1e-12);

        let mut with_reset = Circuit::new(1, 0);
        with_reset.reset(0);
        with_reset.h(0);
        assert!(matches!(
            circuit_unitary(&with_reset),
            Err(CircuitError::Unsupported(_))
        ));
        let _ = Gate::Swap;
    }
}
