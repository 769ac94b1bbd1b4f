//! Syndrome-extraction gadgets: non-fault-tolerant and flagged circuits.
//!
//! The syndrome qubit is always the entangling target, so X faults on it
//! commute through every coupling. Z-type generator letters couple with a
//! plain CNOT from the data qubit; X-type letters use the
//! Hadamard-conjugated equivalent. The flag qubit is prepared in |+>, acts
//! as the control of two CNOTs onto the syndrome qubit placed after the
//! first and before the last data coupling, and is measured in the X basis.

use crate::circuit::{Circuit, MeasureBasis};
use crate::code513::StabilizerCode;
use crate::quantum::{PauliLetter, PauliString, QuantumError};

/// A syndrome-extraction gadget with its wiring metadata.
#[derive(Debug, Clone)]
pub struct ExtractionCircuit {
    pub circuit: Circuit,
    pub data_qubits: [usize; 5],
    pub syndrome_qubit: usize,
    pub flag_qubit: Option<usize>,
    pub generator_index: usize,
    pub generator: PauliString,
    pub syndrome_clbit: usize,
    pub flag_clbit: Option<usize>,
}

fn check_indices(
    code: &StabilizerCode,
    generator_index: usize,
    data_qubits: &[usize; 5],
    ancillas: &[usize],
) -> Result<(), QuantumError> {
    if generator_index >= code.generators.len() {
        return Err(QuantumError::DimensionMismatch(format!(
            "generator index {generator_index} out of range"
        )));
    }
    let mut all: Vec<usize> = data_qubits.to_vec();
    all.extend_from_slice(ancillas);
    for (i, q) in all.iter().enumerate() {
        if all[..i].contains(q) {
            return Err(QuantumError::RepeatedTarget(*q));
        }
    }
    Ok(())
}

fn emit_coupling(c: &mut Circuit, letter: PauliLetter, data: usize, syndrome: usize) {
    match letter {
        PauliLetter::Z => {
            c.cx(data, syndrome);
        }
        PauliLetter::X => {
            c.h(data);
            c.cx(data, syndrome);
            c.h(data);
        }
        PauliLetter::Y => {
            // sdg/h conjugation measures Y; unused by this code's generators
            c.sdg(data);
            c.h(data);
            c.cx(data, syndrome);
            c.h(data);
            c.s(data);
        }
        PauliLetter::I => unreachable!("identity letters produce no coupling"),
    }
}

/// Non-fault-tolerant extraction: syndrome ancilla only.
pub fn nonft_syndrome_circuit(
    code: &StabilizerCode,
    generator_index: usize,
    data_qubits: [usize; 5],
    syndrome_qubit: usize,
) -> Result<ExtractionCircuit, QuantumError> {
    check_indices(code, generator_index, &data_qubits, &[syndrome_qubit])?;
    let generator = code.generators[generator_index].clone();
    let width = *data_qubits
        .iter()
        .chain([syndrome_qubit].iter())
        .max()
        .unwrap()
        + 1;
    let mut c = Circuit::new(width, 1)
        .with_name(&format!("nonft-extract-{generator}"));
    for pos in generator.support() {
        emit_coupling(&mut c, generator.letter(pos), data_qubits[pos], syndrome_qubit);
    }
    c.measure(syndrome_qubit, 0);
    Ok(ExtractionCircuit {
        circuit: c,
        data_qubits,
        syndrome_qubit,
        flag_qubit: None,
        generator_index,
        generator,
        syndrome_clbit: 0,
        flag_clbit: None,
    })
}

/// Flagged extraction: adds a |+>-prepared flag qubit coupled onto the
/// syndrome qubit after the first and before the last data coupling.
pub fn flagged_syndrome_circuit(
    code: &StabilizerCode,
    generator_index: usize,
    data_qubits: [usize; 5],
    syndrome_qubit: usize,
    flag_qubit: usize,
) -> Result<ExtractionCircuit, QuantumError> {
    check_indices(
        code,
        generator_index,
        &data_qubits,
        &[syndrome_qubit, flag_qubit],
    )?;
    let generator = code.generators[generator_index].clone();
    let support = generator.support();
    let width = *data_qubits
        .iter()
        .chain([syndrome_qubit, flag_qubit].iter())
        .max()
        .unwrap()
        + 1;
    let mut c = Circuit::new(width, 2)
        .with_name(&format!("flagged-extract-{generator}"));
    c.h(flag_qubit);
    let last = support.len() - 1;
    for (j, pos) in support.iter().enumerate() {
        if j == last {
            c.cx(flag_qubit, syndrome_qubit);
        }
        emit_coupling(&mut c, generator.letter(*pos), data_qubits[*pos], syndrome_qubit);
        if j == 0 {
            c.cx(flag_qubit, syndrome_qubit);
        }
    }
    c.measure(syndrome_qubit, 0);
    c.measure_in(flag_qubit, 1, MeasureBasis::X);
    Ok(ExtractionCircuit {
        circuit: c,
        data_qubits,
        syndrome_qubit,
        flag_qubit: Some(flag_qubit),
        generator_index,
        generator,
        syndrome_clbit: 0,
        flag_clbit: Some(1),
    })
}
