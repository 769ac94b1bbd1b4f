//! The ideal and hardware-constrained correction protocols.
//!
//! The ideal flow verifies preparation with three flagged stabilizer
//! measurements (reusing one reset ancilla pair), then measures the main
//! stabilizer flagged: a raised flag escalates to non-fault-tolerant
//! re-extraction of all four syndromes; otherwise the remaining three are
//! measured flagged with the same escalation rule.
//!
//! The hardware flow forbids reset and in-circuit classical control: the
//! main stabilizer is measured with one flagged ancilla pair, and follow-up
//! syndrome measurements run non-fault-tolerantly on fresh ancillas; the
//! flag branch only selects which records enter post-processing, and the
//! decoded correction is applied to the data virtually (Pauli-frame).

use super::extraction::{flagged_syndrome_circuit, nonft_syndrome_circuit};
use super::faults::extended_lookup;
use crate::circuit::{self, Circuit, CircuitError, Gate, Instruction};
use crate::code513::{self, decode, logical_minus_state, Syndrome};
use crate::noise::NoiseModel;
use crate::quantum::{DensityMatrix, PauliLetter, PauliString, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// How a shot's syndrome information was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SyndromeRecord {
    /// All flags stayed down; bits come from flagged extractions in
    /// generator order.
    Unflagged { syndrome: [u8; 4] },
    /// A flag was raised during extraction of `generator_index`; bits come
    /// from the non-fault-tolerant re-extraction of all four generators.
    Flagged {
        generator_index: usize,
        syndrome: [u8; 4],
    },
}

impl SyndromeRecord {
    pub fn key(&self) -> String {
        match self {
            SyndromeRecord::Unflagged { syndrome } => format!(
                "f0-{}",
                syndrome.iter().map(|b| b.to_string()).collect::<String>()
            ),
            SyndromeRecord::Flagged {
                generator_index,
                syndrome,
            } => format!(
                "f1@g{generator_index}-{}",
                syndrome.iter().map(|b| b.to_string()).collect::<String>()
            ),
        }
    }

    fn correction(&self) -> PauliString {
        match self {
            SyndromeRecord::Unflagged { syndrome } => decode(Syndrome(*syndrome)).clone(),
            SyndromeRecord::Flagged {
                generator_index,
                syndrome,
            } => extended_lookup(*generator_index)[Syndrome(*syndrome).as_index()].clone(),
        }
    }
}

/// Conjugate a 5-qubit state by the correction the record calls for.
pub fn apply_virtual_correction(
    rho: &DensityMatrix,
    record: &SyndromeRecord,
) -> Result<DensityMatrix, crate::quantum::QuantumError> {
    if rho.num_qubits() != 5 {
        return Err(crate::quantum::QuantumError::DimensionMismatch(format!(
            "virtual correction expects a 5-qubit state, got {}",
            rho.num_qubits()
        )));
    }
    Ok(rho.apply_pauli(&record.correction()))
}

/// A single Pauli planted on the syndrome qubit of the main flagged
/// extraction, landing right after the `after_coupling`-th data coupling.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InjectedFault {
    pub after_coupling: usize,
    pub pauli: PauliLetter,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolOptions {
    pub main_generator: usize,
    /// Generators verified after preparation (ideal protocol only).
    pub verification_generators: Vec<usize>,
    pub injected_fault: Option<InjectedFault>,
}

impl ProtocolOptions {
    pub fn ideal() -> Self {
        ProtocolOptions {
            main_generator: 0,
            verification_generators: vec![0, 1, 2],
            injected_fault: None,
        }
    }

    pub fn hardware() -> Self {
        ProtocolOptions {
            main_generator: 3,
            verification_generators: vec![],
            injected_fault: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordStats {
    pub count: usize,
    /// Mean corrected data state of the shots with this record.
    pub mean_state: DensityMatrix,
}

/// Serializes to JSON with scalar statistics plus `per_record`, a map from
/// syndrome-record keys (`"f0-SSSS"` / `"f1@gN-SSSS"`) to shot counts and
/// mean corrected states (density matrices as nested `[re, im]` pairs).
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolResult {
    pub shots: usize,
    pub rejected_count: usize,
    pub f0_count: usize,
    pub f1_count: usize,
    /// Ideal protocol: verification-passed fraction. Hardware protocol:
    /// fraction of shots with main (syndrome, flag) = (0, 0).
    pub accepted_fraction: f64,
    /// Mean fidelity of the corrected data state against logical |->.
    pub logical_fidelity: f64,
    /// Same trajectories without the correction step.
    pub uncorrected_fidelity: f64,
    /// Hardware protocol: corrected fidelity over (0,0)-conditioned shots.
    pub conditioned_fidelity: Option<f64>,
    pub per_record: BTreeMap<String, RecordStats>,
}

/// (fidelity of data wires to a pure 5-qubit target) for a product-form
/// full-register state: sum over ancilla basis states of |<target, a|psi>|^2.
fn data_fidelity_to(full: &StateVector, target: &StateVector, data: &[usize; 5]) -> f64 {
    let width = full.num_qubits();
    let anc_count = width - 5;
    let mut acc = vec![Complex64::new(0.0, 0.0); 1 << anc_count];
    let anc_positions: Vec<usize> = (0..width).filter(|w| !data.contains(w)).collect();
    for (idx, amp) in full.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let mut d = 0usize;
        for (j, &pos) in data.iter().enumerate() {
            if (idx >> (width - 1 - pos)) & 1 == 1 {
                d |= 1 << (4 - j);
            }
        }
        let mut a = 0usize;
        for (j, &pos) in anc_positions.iter().enumerate() {
            if (idx >> (width - 1 - pos)) & 1 == 1 {
                a |= 1 << (anc_count - 1 - j);
            }
        }
        acc[a] += target.amplitudes()[d].conj() * amp;
    }
    acc.iter().map(|v| v.norm_sqr()).sum()
}

/// Reduced data-qubit density matrix of a full-register pure state.
fn data_density(full: &StateVector, data: &[usize; 5]) -> DensityMatrix {
    let width = full.num_qubits();
    let anc_count = width - 5;
    let anc_positions: Vec<usize> = (0..width).filter(|w| !data.contains(w)).collect();
    // c[d][a] coefficients
    let mut coeff = vec![vec![Complex64::new(0.0, 0.0); 1 << anc_count]; 32];
    for (idx, amp) in full.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let mut d = 0usize;
        for (j, &pos) in data.iter().enumerate() {
            if (idx >> (width - 1 - pos)) & 1 == 1 {
                d |= 1 << (4 - j);
            }
        }
        let mut a = 0usize;
        for (j, &pos) in anc_positions.iter().enumerate() {
            if (idx >> (width - 1 - pos)) & 1 == 1 {
                a |= 1 << (anc_count - 1 - j);
            }
        }
        coeff[d][a] += amp;
    }
    let mut mat = DMatrix::zeros(32, 32);
    for d1 in 0..32 {
        for d2 in 0..32 {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..(1 << anc_count) {
                acc += coeff[d1][a] * coeff[d2][a].conj();
            }
            mat[(d1, d2)] = acc;
        }
    }
    DensityMatrix::from_raw(5, mat)
}

fn apply_pauli_at(state: &mut StateVector, p: &PauliString, data: &[usize; 5]) {
    for (j, letter) in p.letters().iter().enumerate() {
        let m = match letter {
            PauliLetter::I => continue,
            l => l.matrix(),
        };
        state.apply_in_place(&m, &[data[j]]);
    }
}

struct ShotOutput {
    rejected: bool,
    flag_raised: bool,
    record: Option<SyndromeRecord>,
    corrected_fidelity: f64,
    uncorrected_fidelity: f64,
    accepted_00: bool,
    corrected_state: Option<DensityMatrix>,
}

fn run_segment(
    state: &mut StateVector,
    segment: &Circuit,
    noise: Option<&NoiseModel>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u8>, CircuitError> {
    let ops = circuit::sim_internals::instrument(segment, noise)?;
    let mut creg = vec![0u8; segment.num_clbits];
    circuit::sim_internals::execute_ops(state, &mut creg, &ops, noise, rng)?;
    Ok(creg)
}

/// Insert `fault` after its data coupling inside a flagged gadget circuit.
fn inject_fault(circuit: &mut Circuit, syndrome_qubit: usize, flag_qubit: usize, fault: &InjectedFault) {
    let mut coupling_seen = 0usize;
    let mut at = None;
    for (i, instr) in circuit.instructions.iter().enumerate() {
        if let Instruction::Gate { gate, qubits } = instr {
            if gate.name() == "cx" && qubits[1] == syndrome_qubit && qubits[0] != flag_qubit {
                coupling_seen += 1;
                if coupling_seen == fault.after_coupling {
                    at = Some(i + 1);
                    break;
                }
            }
        }
    }
    let at = at.expect("fault coupling index within the gadget");
    let gate = match fault.pauli {
        PauliLetter::X => Gate::X,
        PauliLetter::Y => Gate::Y,
        PauliLetter::Z => Gate::Z,
        PauliLetter::I => return,
    };
    circuit.instructions.insert(
        at,
        Instruction::Gate {
            gate,
            qubits: vec![syndrome_qubit],
        },
    );
}

const DATA: [usize; 5] = [0, 1, 2, 3, 4];

fn ideal_shot(
    noise: Option<&NoiseModel>,
    options: &ProtocolOptions,
    target: &StateVector,
    rng: &mut ChaCha8Rng,
) -> Result<ShotOutput, CircuitError> {
    let code = code513::five_qubit_code();
    let mut state = StateVector::zero(7)?;
    let prep = code513::prep_minus_logical(code513::PrepVariant::IdealDepth3);
    let prep7 = prep.circuit.mapped_qubits(&[0, 1, 2, 3, 4], 7);
    run_segment(&mut state, &prep7, noise, rng)?;

    // verification round: flagged extraction of three generators, reset
    // ancillas in between; any nonzero outcome rejects the shot
    for &gi in &options.verification_generators {
        let ec = flagged_syndrome_circuit(code, gi, DATA, 5, 6).map_err(CircuitError::Quantum)?;
        let mut seg = Circuit::new(7, 2);
        seg.reset(5);
        seg.reset(6);
        for instr in &ec.circuit.instructions {
            seg.try_push(instr.clone())?;
        }
        let bits = run_segment(&mut state, &seg, noise, rng)?;
        if bits[0] != 0 || bits[1] != 0 {
            return Ok(ShotOutput {
                rejected: true,
                flag_raised: false,
                record: None,
                corrected_fidelity: 0.0,
                uncorrected_fidelity: 0.0,
                accepted_00: false,
                corrected_state: None,
            });
        }
    }

    // main flagged extraction with optional planted fault
    let main = options.main_generator;
    let ec = flagged_syndrome_circuit(code, main, DATA, 5, 6).map_err(CircuitError::Quantum)?;
    let mut seg = Circuit::new(7, 2);
    seg.reset(5);
    seg.reset(6);
    let mut gadget = ec.circuit.clone();
    if let Some(fault) = &options.injected_fault {
        inject_fault(&mut gadget, 5, 6, fault);
    }
    for instr in &gadget.instructions {
        seg.try_push(instr.clone())?;
    }
    let bits = run_segment(&mut state, &seg, noise, rng)?;
    let (main_syndrome, main_flag) = (bits[0], bits[1]);

    let mut record = None;
    let mut flag_raised = main_flag == 1;
    if !flag_raised {
        // flagged extraction of the remaining three, escalating on any flag
        let mut syndrome = [0u8; 4];
        syndrome[main] = main_syndrome;
        for gi in (0..4).filter(|g| *g != main) {
            let ec = flagged_syndrome_circuit(code, gi, DATA, 5, 6)
                .map_err(CircuitError::Quantum)?;
            let mut seg = Circuit::new(7, 2);
            seg.reset(5);
            seg.reset(6);
            for instr in &ec.circuit.instructions {
                seg.try_push(instr.clone())?;
            }
            let bits = run_segment(&mut state, &seg, noise, rng)?;
            if bits[1] == 1 {
                flag_raised = true;
                record = Some(escalate(&mut state, gi, noise, rng)?);
                break;
            }
            syndrome[gi] = bits[0];
        }
        if record.is_none() && !flag_raised {
            record = Some(SyndromeRecord::Unflagged { syndrome });
        }
    } else {
        record = Some(escalate(&mut state, main, noise, rng)?);
    }
    let record = record.expect("record assigned on every path");

    let uncorrected_fidelity = data_fidelity_to(&state, target, &DATA);
    apply_pauli_at(&mut state, &record.correction(), &DATA);
    let corrected_fidelity = data_fidelity_to(&state, target, &DATA);
    Ok(ShotOutput {
        rejected: false,
        flag_raised,
        record: Some(record.clone()),
        corrected_fidelity,
        uncorrected_fidelity,
        accepted_00: main_syndrome == 0 && main_flag == 0,
        corrected_state: Some(data_density(&state, &DATA)),
    })
}

/// Non-fault-tolerant re-extraction of all four syndromes (reset ancilla).
fn escalate(
    state: &mut StateVector,
    flagged_generator: usize,
    noise: Option<&NoiseModel>,
    rng: &mut ChaCha8Rng,
) -> Result<SyndromeRecord, CircuitError> {
    let code = code513::five_qubit_code();
    let mut syndrome = [0u8; 4];
    for gi in 0..4 {
        let ec = nonft_syndrome_circuit(code, gi, DATA, 5).map_err(CircuitError::Quantum)?;
        let mut seg = Circuit::new(7, 1);
        seg.reset(5);
        for instr in &ec.circuit.instructions {
            seg.try_push(instr.clone())?;
        }
        let bits = run_segment(state, &seg, noise, rng)?;
        syndrome[gi] = bits[0];
    }
    Ok(SyndromeRecord::Flagged {
        generator_index: flagged_generator,
        syndrome,
    })
}

fn hardware_shot(
    noise: Option<&NoiseModel>,
    options: &ProtocolOptions,
    target: &StateVector,
    rng: &mut ChaCha8Rng,
) -> Result<ShotOutput, CircuitError> {
    let code = code513::five_qubit_code();
    // data 0-4, flagged pair (5,6), four fresh non-FT ancillas 7-10
    let mut state = StateVector::zero(11)?;
    let prep = code513::prep_minus_logical(code513::PrepVariant::IdealDepth3);
    let prep11 = prep.circuit.mapped_qubits(&[0, 1, 2, 3, 4], 11);
    run_segment(&mut state, &prep11, noise, rng)?;

    let main = options.main_generator;
    let ec = flagged_syndrome_circuit(code, main, DATA, 5, 6).map_err(CircuitError::Quantum)?;
    let mut gadget = Circuit::new(11, 2);
    for instr in &ec.circuit.instructions {
        gadget.try_push(instr.clone())?;
    }
    let bits = run_segment(&mut state, &gadget, noise, rng)?;
    let (main_syndrome, main_flag) = (bits[0], bits[1]);

    let record = if main_flag == 0 {
        // keep the flagged result, measure the other three on fresh ancillas
        let mut syndrome = [0u8; 4];
        syndrome[main] = main_syndrome;
        let mut fresh = 7usize;
        for gi in (0..4).filter(|g| *g != main) {
            let ec = nonft_syndrome_circuit(code, gi, DATA, fresh)
                .map_err(CircuitError::Quantum)?;
            let seg = ec.circuit.mapped_qubits(
                &(0..ec.circuit.num_qubits).collect::<Vec<_>>(),
                11,
            );
            let bits = run_segment(&mut state, &seg, noise, rng)?;
            syndrome[gi] = bits[0];
            fresh += 1;
        }
        SyndromeRecord::Unflagged { syndrome }
    } else {
        // throw the flagged measurement away, measure all four fresh
        let mut syndrome = [0u8; 4];
        for (slot, gi) in (0..4).enumerate() {
            let ec = nonft_syndrome_circuit(code, gi, DATA, 7 + slot)
                .map_err(CircuitError::Quantum)?;
            let seg = ec.circuit.mapped_qubits(
                &(0..ec.circuit.num_qubits).collect::<Vec<_>>(),
                11,
            );
            let bits = run_segment(&mut state, &seg, noise, rng)?;
            syndrome[gi] = bits[0];
        }
        SyndromeRecord::Flagged {
            generator_index: main,
            syndrome,
        }
    };

    let uncorrected_fidelity = data_fidelity_to(&state, target, &DATA);
    // virtual (Pauli-frame) correction: conjugate the tracked state
    apply_pauli_at(&mut state, &record.correction(), &DATA);
    let corrected_fidelity = data_fidelity_to(&state, target, &DATA);
    Ok(ShotOutput {
        rejected: false,
        flag_raised: main_flag == 1,
        record: Some(record),
        corrected_fidelity,
        uncorrected_fidelity,
        accepted_00: main_syndrome == 0 && main_flag == 0,
        corrected_state: Some(data_density(&state, &DATA)),
    })
}

fn aggregate(
    shots: usize,
    outputs: Vec<ShotOutput>,
    conditioned: bool,
) -> ProtocolResult {
    let mut rejected_count = 0;
    let mut f0 = 0;
    let mut f1 = 0;
    let mut corrected_sum = 0.0;
    let mut uncorrected_sum = 0.0;
    let mut kept = 0usize;
    let mut accepted_00 = 0usize;
    let mut cond_sum = 0.0;
    let mut per_record: BTreeMap<String, (usize, DMatrix<Complex64>)> = BTreeMap::new();
    for o in outputs {
        if o.rejected {
            rejected_count += 1;
            continue;
        }
        kept += 1;
        if o.flag_raised {
            f1 += 1;
        } else {
            f0 += 1;
        }
        corrected_sum += o.corrected_fidelity;
        uncorrected_sum += o.uncorrected_fidelity;
        if o.accepted_00 {
            accepted_00 += 1;
            cond_sum += o.corrected_fidelity;
        }
        if let (Some(rec), Some(state)) = (o.record, o.corrected_state) {
            let entry = per_record
                .entry(rec.key())
                .or_insert_with(|| (0, DMatrix::zeros(32, 32)));
            entry.0 += 1;
            entry.1 += state.matrix();
        }
    }
    let per_record = per_record
        .into_iter()
        .map(|(k, (count, sum))| {
            let mean = sum / Complex64::new(count as f64, 0.0);
            (
                k,
                RecordStats {
                    count,
                    mean_state: DensityMatrix::from_raw(5, mean),
                },
            )
        })
        .collect();
    let accepted_fraction = if conditioned {
        accepted_00 as f64 / shots as f64
    } else {
        kept as f64 / shots as f64
    };
    ProtocolResult {
        shots,
        rejected_count,
        f0_count: f0,
        f1_count: f1,
        accepted_fraction,
        logical_fidelity: if kept > 0 {
            corrected_sum / kept as f64
        } else {
            0.0
        },
        uncorrected_fidelity: if kept > 0 {
            uncorrected_sum / kept as f64
        } else {
            0.0
        },
        conditioned_fidelity: if conditioned {
            Some(if accepted_00 > 0 {
                cond_sum / accepted_00 as f64
            } else {
                0.0
            })
        } else {
            None
        },
        per_record,
    }
}

/// Simulator-mode protocol: reset and in-circuit branching allowed.
pub fn run_ideal_protocol(
    noise: Option<&NoiseModel>,
    shots: usize,
    seed: u64,
    options: &ProtocolOptions,
) -> Result<ProtocolResult, CircuitError> {
    let target = logical_minus_state();
    let outputs: Result<Vec<ShotOutput>, CircuitError> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(circuit::sim_internals::mix_seed(seed, shot as u64));
            ideal_shot(noise, options, &target, &mut rng)
        })
        .collect();
    Ok(aggregate(shots, outputs?, false))
}

/// Hardware-faithful protocol: fresh ancillas, terminal measurement only,
/// branch selection and correction in classical post-processing.
pub fn run_hardware_protocol(
    noise: Option<&NoiseModel>,
    shots: usize,
    seed: u64,
    options: &ProtocolOptions,
) -> Result<ProtocolResult, CircuitError> {
    let target = logical_minus_state();
    let outputs: Result<Vec<ShotOutput>, CircuitError> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(circuit::sim_internals::mix_seed(seed, shot as u64));
            hardware_shot(noise, options, &target, &mut rng)
        })
        .collect();
    Ok(aggregate(shots, outputs?, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_ideal_protocol_is_perfect() {
        let r = run_ideal_protocol(None, 20, 1, &ProtocolOptions::ideal()).unwrap();
        assert_eq!(r.rejected_count, 0);
        assert!((r.accepted_fraction - 1.0).abs() < 1e-12);
        assert!((r.logical_fidelity - 1.0).abs() < 1e-9);
        assert_eq!(r.f1_count, 0);
    }

    #[test]
    fn noiseless_hardware_protocol_is_perfect_and_seed_independent() {
        let a = run_hardware_protocol(None, 50, 1, &ProtocolOptions::hardware()).unwrap();
        let b = run_hardware_protocol(None, 50, 999, &ProtocolOptions::hardware()).unwrap();
        assert!((a.accepted_fraction - 1.0).abs() < 1e-12);
        assert!((a.logical_fidelity - 1.0).abs() < 1e-9);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn injected_danger_zone_fault_is_caught_and_corrected() {
        let mut opts = ProtocolOptions::ideal();
        opts.injected_fault = Some(InjectedFault {
            after_coupling: 2,
            pauli: PauliLetter::Z,
        });
        let r = run_ideal_protocol(None, 4, 3, &ProtocolOptions::ideal()).unwrap();
        assert!((r.logical_fidelity - 1.0).abs() < 1e-9);
        let r = run_ideal_protocol(None, 4, 3, &opts).unwrap();
        // flag must catch the danger-zone fault and the extended decode
        // must return the state to the codespace
        assert_eq!(r.f1_count, 4);
        for stats in r.per_record.values() {
            let exp = code513::verify_codestate(&stats.mean_state).unwrap();
            for g in exp.generators {
                assert!((g - 1.0).abs() < 1e-9, "generator expectation {g}");
            }
        }
    }

    #[test]
    fn flag_readout_error_drives_f1_fraction() {
        let noise = NoiseModel::new().with_readout_on(11, 6, 0.05);
        let shots = 4000;
        let r = run_hardware_protocol(Some(&noise), shots, 7, &ProtocolOptions::hardware())
            .unwrap();
        let frac = r.f1_count as f64 / shots as f64;
        // binomial 3-sigma around 0.05
        let sigma = (0.05 * 0.95 / shots as f64).sqrt();
        assert!(
            (frac - 0.05).abs() < 3.5 * sigma,
            "f1 fraction {frac} vs expected 0.05"
        );
    }

    #[test]
    fn weight_one_error_corrected_by_unflagged_record() {
        // X3 |-> with its syndrome corrects back to |->
        let minus = logical_minus_state();
        let e = PauliString::single(5, 3, PauliLetter::X);
        let damaged = minus.apply_pauli(&e).to_density();
        let syn = code513::syndrome_of(&e).unwrap();
        let rec = SyndromeRecord::Unflagged { syndrome: syn.0 };
        let fixed = apply_virtual_correction(&damaged, &rec).unwrap();
        let f = crate::quantum::fidelity_to_pure(&minus, &fixed).unwrap();
        assert!((f - 1.0).abs() < 1e-10);
        // trivial syndrome leaves the state alone
        let rec0 = SyndromeRecord::Unflagged { syndrome: [0; 4] };
        let same = apply_virtual_correction(&damaged, &rec0).unwrap();
        let d = (same.matrix() - damaged.matrix())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-12);
    }
}
