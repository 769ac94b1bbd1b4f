//! Exhaustive single-Pauli-fault enumeration over extraction gadgets.
//!
//! Every (instruction, qubit, Pauli) triple is simulated exactly once. A
//! fault is injected immediately after its instruction, except on
//! measurements where it is injected immediately before so that it can flip
//! the recorded bit. The residual data error is identified by comparing the
//! post-measurement data state against every Pauli-corrected reference and
//! reducing the match modulo the stabilizer group; logical operators are not
//! modded out, so an undetected logical residual counts as weight >= 2.

use super::extraction::ExtractionCircuit;
use crate::circuit::{Circuit, Gate, Instruction};
use crate::code513::{self, syndrome_of, Syndrome};
use crate::quantum::{PauliLetter, PauliString, QuantumError, StateVector};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FaultLocation {
    pub instruction_index: usize,
    pub qubit: usize,
    pub pauli: PauliLetter,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaultOutcome {
    pub syndrome_bit: u8,
    pub flag_bit: u8,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaultRecord {
    pub location: FaultLocation,
    pub outcomes: Vec<FaultOutcome>,
    pub flag_raised: bool,
    pub syndrome_flipped: bool,
    /// Residual data error reduced modulo the stabilizer group.
    pub residual: PauliString,
    pub residual_weight: usize,
    /// Weight >= 2 residual with the flag not raised.
    pub dangerous: bool,
}

/// Serializes to JSON as
/// `{"circuit_name", "flagged", "records": [{"location": {"instruction_index",
/// "qubit", "pauli"}, "outcomes": [...], "flag_raised", "syndrome_flipped",
/// "residual", "residual_weight", "dangerous"}], "dangerous": [...]}`.
#[derive(Debug, Clone, Serialize)]
pub struct FaultReport {
    pub circuit_name: String,
    pub flagged: bool,
    pub records: Vec<FaultRecord>,
    pub dangerous: Vec<FaultLocation>,
}

/// Exact pure-state runner for noiseless circuits with measurements.
/// Returns (creg, probability, state) per classical branch.
fn run_pure_exact(
    c: &Circuit,
    initial: &StateVector,
) -> Result<Vec<(Vec<u8>, f64, StateVector)>, QuantumError> {
    let mut branches = vec![(vec![0u8; c.num_clbits], 1.0f64, initial.clone())];
    for instr in &c.instructions {
        match instr {
            Instruction::Barrier { .. } => {}
            Instruction::Gate { gate, qubits } => {
                let m = gate.matrix();
                for (_, _, state) in branches.iter_mut() {
                    state.apply_in_place(&m, qubits);
                }
            }
            Instruction::Conditional {
                clbit,
                gate,
                qubits,
            } => {
                let m = gate.matrix();
                for (creg, _, state) in branches.iter_mut() {
                    if creg[*clbit] == 1 {
                        state.apply_in_place(&m, qubits);
                    }
                }
            }
            Instruction::Reset { qubit } => {
                let mut next = Vec::new();
                for (creg, p, state) in branches.drain(..) {
                    for (outcome, bp, mut post) in
                        state.measure_exact(*qubit, crate::circuit::MeasureBasis::Z)?
                    {
                        if outcome == 1 {
                            post.apply_in_place(&crate::quantum::gates::pauli_x(), &[*qubit]);
                        }
                        next.push((creg.clone(), p * bp, post));
                    }
                }
                branches = next;
            }
            Instruction::Measure {
                qubit,
                clbit,
                basis,
            } => {
                let mut next = Vec::new();
                for (creg, p, state) in branches.drain(..) {
                    for (outcome, bp, post) in state.measure_exact(*qubit, *basis)? {
                        let mut creg = creg.clone();
                        creg[*clbit] = outcome;
                        next.push((creg, p * bp, post));
                    }
                }
                branches = next;
            }
        }
    }
    Ok(branches)
}

/// Embed a 5-qubit state onto `positions` of a `width`-qubit register.
pub(crate) fn embed_state(
    psi: &StateVector,
    positions: &[usize; 5],
    width: usize,
) -> Result<StateVector, QuantumError> {
    let dim = 1usize << width;
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); dim];
    for (idx, a) in psi.amplitudes().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let mut full = 0usize;
        for (j, &pos) in positions.iter().enumerate() {
            if (idx >> (4 - j)) & 1 == 1 {
                full |= 1 << (width - 1 - pos);
            }
        }
        amps[full] = *a;
    }
    StateVector::from_amplitudes(width, amps)
}

/// A code state that is not an eigenstate of any logical operator, so its
/// stabilizer group is exactly the 16-element code group. Matching damaged
/// states against Pauli-corrected copies of it identifies residual errors
/// modulo the stabilizer group without collapsing logical components.
fn generic_code_state() -> StateVector {
    let minus = code513::logical_minus_state();
    let zl = code513::five_qubit_code().logical_z.clone();
    let zl_minus = minus.apply_pauli(&zl);
    // |0>_L and |1>_L up to normalisation
    let dim = minus.dim();
    let mut amps0 = vec![num_complex::Complex64::new(0.0, 0.0); dim];
    let mut amps1 = amps0.clone();
    for i in 0..dim {
        amps0[i] = minus.amplitudes()[i] + zl_minus.amplitudes()[i];
        amps1[i] = minus.amplitudes()[i] - zl_minus.amplitudes()[i];
    }
    let (theta, phi) = (0.62f64, 0.77f64);
    let (a, b) = (
        num_complex::Complex64::new(theta.cos(), 0.0),
        num_complex::Complex64::from_polar(theta.sin(), phi),
    );
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); dim];
    let n0: f64 = amps0.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let n1: f64 = amps1.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for i in 0..dim {
        amps[i] = a * amps0[i] / n0 + b * amps1[i] / n1;
    }
    let norm: f64 = amps.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in amps.iter_mut() {
        *v /= norm;
    }
    StateVector::from_amplitudes(5, amps).unwrap()
}

fn all_unsigned_paulis() -> Vec<PauliString> {
    let letters = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ];
    let mut out = Vec::with_capacity(1024);
    for code in 0..1024usize {
        let mut ls = Vec::with_capacity(5);
        let mut c = code;
        for _ in 0..5 {
            ls.push(letters[c % 4]);
            c /= 4;
        }
        out.push(PauliString::new(ls, 1));
    }
    out
}

/// Pull the data-qubit state out of a full-register branch state. The
/// ancillas are measured out, so the branch is a product and the data part
/// is pure.
fn data_state(
    full: &StateVector,
    data_qubits: &[usize; 5],
) -> Result<StateVector, QuantumError> {
    let rho = full.to_density().partial_trace(&data_qubits.to_vec())?;
    let sym = nalgebra::SymmetricEigen::new(rho.matrix().clone());
    let (mut best, mut best_idx) = (f64::MIN, 0);
    for (i, v) in sym.eigenvalues.iter().enumerate() {
        if *v > best {
            best = *v;
            best_idx = i;
        }
    }
    if best < 1.0 - 1e-9 {
        return Err(QuantumError::InvalidState(format!(
            "data register is not pure after measurement (top eigenvalue {best})"
        )));
    }
    let col = sym.eigenvectors.column(best_idx);
    StateVector::from_amplitudes(5, col.iter().copied().collect())
}

fn gate_for(pauli: PauliLetter) -> Gate {
    match pauli {
        PauliLetter::X => Gate::X,
        PauliLetter::Y => Gate::Y,
        PauliLetter::Z => Gate::Z,
        PauliLetter::I => unreachable!(),
    }
}

/// Simulate every single-fault injection over the gadget on `input` (a
/// 5-qubit code state) and classify the damage.
pub fn enumerate_single_faults(
    ec: &ExtractionCircuit,
    input: &StateVector,
) -> Result<FaultReport, QuantumError> {
    assert!(
        ec.data_qubits.windows(2).all(|w| w[0] < w[1]),
        "enumeration expects ascending data wires"
    );
    let width = ec.circuit.num_qubits;
    let initial = embed_state(input, &ec.data_qubits, width)?;
    let generic = generic_code_state();
    let generic_initial = embed_state(&generic, &ec.data_qubits, width)?;
    let refs: Vec<(PauliString, StateVector)> = all_unsigned_paulis()
        .into_iter()
        .map(|p| {
            let damaged = generic.apply_pauli(&p);
            (p, damaged)
        })
        .collect();

    let mut records = Vec::new();
    for (idx, instr) in ec.circuit.instructions.iter().enumerate() {
        if matches!(instr, Instruction::Barrier { .. }) {
            continue;
        }
        let before = matches!(instr, Instruction::Measure { .. });
        for qubit in instr.qubits() {
            for pauli in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
                let mut faulty = ec.circuit.clone();
                let at = if before { idx } else { idx + 1 };
                faulty.instructions.insert(
                    at,
                    Instruction::Gate {
                        gate: gate_for(pauli),
                        qubits: vec![qubit],
                    },
                );
                let branches = run_pure_exact(&faulty, &initial)?;
                let mut outcomes = Vec::new();
                let mut dominant: Option<(f64, Vec<u8>, StateVector)> = None;
                for (creg, p, state) in branches {
                    if p < 1e-9 {
                        continue;
                    }
                    outcomes.push(FaultOutcome {
                        syndrome_bit: creg[ec.syndrome_clbit],
                        flag_bit: ec.flag_clbit.map(|fc| creg[fc]).unwrap_or(0),
                        probability: p,
                    });
                    if dominant.as_ref().map(|(dp, _, _)| p > *dp).unwrap_or(true) {
                        dominant = Some((p, creg, state));
                    }
                }
                let (dp, creg, _state) =
                    dominant.ok_or_else(|| QuantumError::InvalidState("no branch".into()))?;
                debug_assert!(
                    dp > 1.0 - 1e-9,
                    "single Pauli faults give deterministic outcomes (p = {dp})"
                );
                // identify the residual on the generic code state, whose
                // stabilizer group carries no logical element
                let gen_branches = run_pure_exact(&faulty, &generic_initial)?;
                let (mut gp, mut gen_state) = (f64::MIN, None);
                for (gcreg, p, state) in gen_branches {
                    if p > gp && gcreg == creg {
                        gp = p;
                        gen_state = Some(state);
                    }
                }
                let gen_state = gen_state.ok_or_else(|| {
                    QuantumError::InvalidState(
                        "generic-state branch structure diverged from the input run".into(),
                    )
                })?;
                let phi = data_state(&gen_state, &ec.data_qubits)?;
                let mut matches: Vec<&PauliString> = refs
                    .iter()
                    .filter(|(_, r)| phi.inner(r).norm_sqr() > 1.0 - 1e-7)
                    .map(|(p, _)| p)
                    .collect();
                if matches.is_empty() {
                    return Err(QuantumError::InvalidState(format!(
                        "residual at instruction {idx} is not a Pauli error"
                    )));
                }
                matches.sort_by_key(|p| (p.weight(), p.letters().to_vec()));
                let residual = matches[0].clone();
                let flag_raised = ec.flag_clbit.map(|fc| creg[fc] == 1).unwrap_or(false);
                let syndrome_flipped = creg[ec.syndrome_clbit] == 1;
                let residual_weight = residual.weight();
                records.push(FaultRecord {
                    location: FaultLocation {
                        instruction_index: idx,
                        qubit,
                        pauli,
                    },
                    outcomes,
                    flag_raised,
                    syndrome_flipped,
                    residual,
                    residual_weight,
                    dangerous: residual_weight >= 2 && !flag_raised,
                });
            }
        }
    }
    let dangerous = records
        .iter()
        .filter(|r| r.dangerous)
        .map(|r| r.location)
        .collect();
    Ok(FaultReport {
        circuit_name: ec.circuit.name.clone(),
        flagged: ec.flag_qubit.is_some(),
        records,
        dangerous,
    })
}

/// Correction table for flag-raised branches of one generator's gadget:
/// maps full 4-bit syndromes to the correlated residual errors produced by
/// flagged faults; syndromes never produced fall back to the weight-<=1
/// decoder.
pub fn extended_lookup(generator_index: usize) -> &'static [PauliString; 16] {
    use once_cell::sync::Lazy;
    static TABLES: Lazy<[[PauliString; 16]; 4]> = Lazy::new(|| {
        std::array::from_fn(|gi| {
            let code = code513::five_qubit_code();
            let ec = super::extraction::flagged_syndrome_circuit(
                code,
                gi,
                [0, 1, 2, 3, 4],
                5,
                6,
            )
            .unwrap();
            let report =
                enumerate_single_faults(&ec, &code513::logical_minus_state()).unwrap();
            let mut table: [Option<PauliString>; 16] = Default::default();
            for rec in report.records.iter().filter(|r| r.flag_raised) {
                let syn = syndrome_of(&rec.residual).unwrap();
                match &table[syn.as_index()] {
                    None => table[syn.as_index()] = Some(rec.residual.clone()),
                    Some(existing) => {
                        let quotient = existing.mul_unsigned(&rec.residual);
                        assert!(
                            code513::reduce_mod_stabilizers(&quotient).is_identity(),
                            "flagged residuals with equal syndrome must agree mod stabilizers"
                        );
                    }
                }
            }
            std::array::from_fn(|s| {
                table[s]
                    .clone()
                    .unwrap_or_else(|| decode_owned(Syndrome::from_index(s)))
            })
        })
    });
    &TABLES[generator_index]
}

fn decode_owned(s: Syndrome) -> PauliString {
    code513::decode(s).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code513::{five_qubit_code, logical_minus_state};
    use crate::flag::extraction::{flagged_syndrome_circuit, nonft_syndrome_circuit};

    #[test]
    fn flagged_gadget_has_no_dangerous_faults() {
        let code = five_qubit_code();
        let ec = flagged_syndrome_circuit(code, 3, [0, 1, 2, 3, 4], 5, 6).unwrap();
        let report = enumerate_single_faults(&ec, &logical_minus_state()).unwrap();
        assert!(
            report.dangerous.is_empty(),
            "dangerous: {:?}",
            report.dangerous
        );
    }

    #[test]
    fn nonft_gadget_has_dangerous_faults() {
        let code = five_qubit_code();
        let ec = nonft_syndrome_circuit(code, 0, [0, 1, 2, 3, 4], 5).unwrap();
        let report = enumerate_single_faults(&ec, &logical_minus_state()).unwrap();
        assert!(!report.dangerous.is_empty());
    }

    #[test]
    fn x_faults_on_syndrome_qubit_never_spread() {
        let code = five_qubit_code();
        let ec = flagged_syndrome_circuit(code, 0, [0, 1, 2, 3, 4], 5, 6).unwrap();
        let report = enumerate_single_faults(&ec, &logical_minus_state()).unwrap();
        for rec in report
            .records
            .iter()
            .filter(|r| r.location.qubit == 5 && r.location.pauli == PauliLetter::X)
        {
            assert_eq!(
                rec.residual_weight, 0,
                "X fault at instruction {} spread",
                rec.location.instruction_index
            );
        }
    }

    #[test]
    fn fault_on_final_measurement_flips_syndrome_only() {
        let code = five_qubit_code();
        let ec = nonft_syndrome_circuit(code, 0, [0, 1, 2, 3, 4], 5).unwrap();
        let report = enumerate_single_faults(&ec, &logical_minus_state()).unwrap();
        let meas_idx = ec.circuit.instructions.len() - 1;
        let rec = report
            .records
            .iter()
            .find(|r| {
                r.location.instruction_index == meas_idx && r.location.pauli == PauliLetter::X
            })
            .unwrap();
        assert!(rec.syndrome_flipped);
        assert_eq!(rec.residual_weight, 0);
    }

    #[test]
    fn z_fault_between_flag_couplings_raises_flag() {
        let code = five_qubit_code();
        let ec = flagged_syndrome_circuit(code, 0, [0, 1, 2, 3, 4], 5, 6).unwrap();
        // find the two flag couplings cx(6, 5)
        let flag_cx: Vec<usize> = ec
            .circuit
            .instructions
            .iter()
            .enumerate()
            .filter_map(|(i, instr)| match instr {
                Instruction::Gate { gate, qubits }
                    if gate.name() == "cx" && qubits == &vec![6, 5] =>
                {
                    Some(i)
                }
                _ => None,
            })
            .collect();
        assert_eq!(flag_cx.len(), 2);
        let report = enumerate_single_faults(&ec, &logical_minus_state()).unwrap();
        for rec in report.records.iter().filter(|r| {
            r.location.qubit == 5
                && r.location.pauli == PauliLetter::Z
                && r.location.instruction_index >= flag_cx[0]
                && r.location.instruction_index < flag_cx[1]
        }) {
            assert!(
                rec.flag_raised,
                "unflagged Z at instruction {}",
                rec.location.instruction_index
            );
        }
    }

    #[test]
    fn extended_lookup_consistency() {
        for gi in 0..4 {
            let table = extended_lookup(gi);
            for (s, p) in table.iter().enumerate() {
                let syn = syndrome_of(p).unwrap();
                assert_eq!(syn.as_index(), s, "entry {s} decodes wrong syndrome");
            }
        }
    }
}
