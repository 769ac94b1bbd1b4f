//! Exact density-matrix simulation (branching over mid-circuit measurement
//! outcomes) and Monte-Carlo trajectory simulation.

use super::schedule::{compute_schedule, ScheduleError};
use super::{Circuit, CircuitError, Instruction, MeasureBasis};
use crate::noise::NoiseModel;
use crate::quantum::{DensityMatrix, KrausChannel, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

const PRUNE_TOL: f64 = 1e-15;

/// One classical-outcome branch of an exact simulation.
#[derive(Debug, Clone)]
pub struct ExactBranch {
    pub creg: Vec<u8>,
    pub probability: f64,
    pub density: DensityMatrix,
}

/// One sampled shot of a trajectory simulation.
#[derive(Debug, Clone)]
pub struct ShotRecord {
    pub bits: Vec<u8>,
    pub state: Option<StateVector>,
}

/// Output of either simulation mode.
///
/// `distribution` maps classical bitstrings (clbit 0 first) to exact
/// probabilities (density mode) or to shot counts (trajectory mode).
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub distribution: BTreeMap<String, f64>,
    pub branches: Option<Vec<ExactBranch>>,
    pub final_density: Option<DensityMatrix>,
    pub shots: Option<Vec<ShotRecord>>,
}

impl SimulationResult {
    pub fn probability_of(&self, bits: &str) -> f64 {
        self.distribution.get(bits).copied().unwrap_or(0.0)
    }

    /// Distribution normalised to probabilities (identity for density mode).
    pub fn normalized_distribution(&self) -> BTreeMap<String, f64> {
        let total: f64 = self.distribution.values().sum();
        if total <= 0.0 {
            return self.distribution.clone();
        }
        self.distribution
            .iter()
            .map(|(k, v)| (k.clone(), v / total))
            .collect()
    }
}

pub(crate) fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

pub(crate) enum SimOp<'a> {
    Instr(&'a Instruction),
    Idle { qubit: usize, duration: f64 },
}

impl From<ScheduleError> for CircuitError {
    fn from(e: ScheduleError) -> Self {
        CircuitError::Unsupported(e.to_string())
    }
}

/// Interleave idle-decoherence pseudo-ops based on the ASAP schedule.
pub(crate) fn instrument<'a>(
    c: &'a Circuit,
    noise: Option<&NoiseModel>,
) -> Result<Vec<SimOp<'a>>, CircuitError> {
    let with_idle = noise.map(|n| n.has_idle()).unwrap_or(false);
    let mut ops = Vec::with_capacity(c.instructions.len());
    if with_idle {
        let noise = noise.unwrap();
        let schedule = compute_schedule(c, noise)?;
        let mut gaps_by_instr: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
        for g in &schedule.idle_gaps {
            gaps_by_instr
                .entry(g.before_instr)
                .or_default()
                .push((g.qubit, g.duration));
        }
        for (idx, instr) in c.instructions.iter().enumerate() {
            if let Some(gaps) = gaps_by_instr.get(&idx) {
                for &(qubit, duration) in gaps {
                    ops.push(SimOp::Idle { qubit, duration });
                }
            }
            // id gates act purely as idle windows of their own duration
            if let Instruction::Gate { gate, qubits } = instr {
                if gate.name() == "id" {
                    if let Some(d) = noise.duration_of("id", qubits) {
                        ops.push(SimOp::Idle {
                            qubit: qubits[0],
                            duration: d,
                        });
                        continue;
                    }
                }
            }
            ops.push(SimOp::Instr(instr));
        }
    } else {
        ops.extend(c.instructions.iter().map(SimOp::Instr));
    }
    Ok(ops)
}

/// Static check that classical conditions only read previously written bits.
fn validate_conditions(c: &Circuit) -> Result<(), CircuitError> {
    let mut written = vec![false; c.num_clbits];
    for instr in &c.instructions {
        match instr {
            Instruction::Measure { clbit, .. } => written[*clbit] = true,
            Instruction::Conditional { clbit, .. } => {
                if !written[*clbit] {
                    return Err(CircuitError::ConditionOnUnwrittenBit { clbit: *clbit });
                }
            }
            _ => {}
        }
    }
    Ok(())
}

struct Branch {
    creg: Vec<u8>,
    probability: f64,
    rho: DensityMatrix,
}

/// Exact simulation; mid-circuit measurements branch over outcomes, a
/// trailing block of single-measurement-per-qubit instructions is folded
/// into the joint outcome distribution analytically.
pub fn simulate_density(
    c: &Circuit,
    noise: Option<&NoiseModel>,
) -> Result<SimulationResult, CircuitError> {
    simulate_density_impl(c, noise, false, None)
}

/// Exact simulation that keeps per-branch post-measurement states (no
/// terminal-measurement folding).
pub fn simulate_density_with_states(
    c: &Circuit,
    noise: Option<&NoiseModel>,
) -> Result<SimulationResult, CircuitError> {
    simulate_density_impl(c, noise, true, None)
}

/// Exact simulation from a caller-supplied initial state.
pub fn simulate_density_from(
    c: &Circuit,
    noise: Option<&NoiseModel>,
    initial: DensityMatrix,
    keep_states: bool,
) -> Result<SimulationResult, CircuitError> {
    simulate_density_impl(c, noise, keep_states, Some(initial))
}

fn simulate_density_impl(
    c: &Circuit,
    noise: Option<&NoiseModel>,
    keep_states: bool,
    initial: Option<DensityMatrix>,
) -> Result<SimulationResult, CircuitError> {
    validate_conditions(c)?;
    let ops = instrument(c, noise)?;

    // terminal run of measurements with distinct qubits (barriers ignored)
    let mut suffix_start = ops.len();
    if !keep_states {
        let mut seen = Vec::new();
        for (i, op) in ops.iter().enumerate().rev() {
            match op {
                SimOp::Instr(Instruction::Measure { qubit, .. }) => {
                    if seen.contains(qubit) {
                        break;
                    }
                    seen.push(*qubit);
                    suffix_start = i;
                }
                SimOp::Instr(Instruction::Barrier { .. }) => {
                    suffix_start = i;
                }
                _ => break,
            }
        }
    }

    let rho0 = match initial {
        Some(rho) => {
            if rho.num_qubits() != c.num_qubits {
                return Err(CircuitError::Quantum(
                    crate::quantum::QuantumError::DimensionMismatch(format!(
                        "initial state has {} qubits, circuit has {}",
                        rho.num_qubits(),
                        c.num_qubits
                    )),
                ));
            }
            rho
        }
        None => DensityMatrix::zero(c.num_qubits)?,
    };
    let mut branches = vec![Branch {
        creg: vec![0u8; c.num_clbits],
        probability: 1.0,
        rho: rho0,
    }];

    for op in &ops[..suffix_start] {
        match op {
            SimOp::Idle { qubit, duration } => {
                if let Some(ch) = noise.and_then(|n| n.idle_channel(*qubit, *duration)) {
                    for b in &mut branches {
                        b.rho = b.rho.apply_kraus(&ch, &[*qubit])?;
                    }
                }
            }
            SimOp::Instr(instr) => {
                apply_exact_instr(instr, &mut branches, noise)?;
            }
        }
    }
    branches.retain(|b| b.probability > PRUNE_TOL);

    // weighted average of the pre-suffix states
    let mut final_density = None;
    if !branches.is_empty() {
        let dim = branches[0].rho.dim();
        let mut acc = nalgebra::DMatrix::zeros(dim, dim);
        for b in &branches {
            acc += b.rho.matrix() * num_complex::Complex64::new(b.probability, 0.0);
        }
        final_density = Some(DensityMatrix::from_raw(c.num_qubits, acc));
    }

    // fold the terminal measurement block analytically
    let suffix: Vec<(usize, usize, MeasureBasis)> = ops[suffix_start..]
        .iter()
        .filter_map(|op| match op {
            SimOp::Instr(Instruction::Measure {
                qubit,
                clbit,
                basis,
            }) => Some((*qubit, *clbit, *basis)),
            _ => None,
        })
        .collect();

    let mut distribution: BTreeMap<String, f64> = BTreeMap::new();
    if suffix.is_empty() {
        for b in &branches {
            *distribution.entry(bits_to_string(&b.creg)).or_insert(0.0) += b.probability;
        }
    } else {
        let m = suffix.len();
        for b in &branches {
            let mut rotated = b.rho.clone();
            for (qubit, _, basis) in &suffix {
                if let Some(v) = basis.rotation() {
                    rotated = rotated.apply_unchecked(&v, &[*qubit]);
                }
            }
            let diag = rotated.diagonal_probabilities();
            // joint distribution over the measured qubits, suffix order
            let mut joint = vec![0.0f64; 1 << m];
            for (idx, p) in diag.iter().enumerate() {
                if *p <= 0.0 {
                    continue;
                }
                let mut key = 0usize;
                for (pos, (qubit, _, _)) in suffix.iter().enumerate() {
                    if crate::quantum::bit_of(idx, *qubit, c.num_qubits) == 1 {
                        key |= 1 << (m - 1 - pos);
                    }
                }
                joint[key] += p;
            }
            // classical readout confusion
            let flips: Vec<(f64, f64)> = suffix
                .iter()
                .map(|(q, _, _)| noise.map(|n| n.readout_flips(*q)).unwrap_or((0.0, 0.0)))
                .collect();
            for (true_bits, p_true) in joint.iter().enumerate() {
                if *p_true <= 0.0 {
                    continue;
                }
                emit_confused(
                    true_bits,
                    *p_true * b.probability,
                    &flips,
                    &suffix,
                    &b.creg,
                    &mut distribution,
                );
            }
        }
    }

    Ok(SimulationResult {
        distribution,
        branches: if keep_states {
            Some(
                branches
                    .into_iter()
                    .map(|b| ExactBranch {
                        creg: b.creg,
                        probability: b.probability,
                        density: b.rho,
                    })
                    .collect(),
            )
        } else {
            None
        },
        final_density,
        shots: None,
    })
}

/// Spread a true outcome over recorded outcomes via per-qubit flip rates.
fn emit_confused(
    true_bits: usize,
    weight: f64,
    flips: &[(f64, f64)],
    suffix: &[(usize, usize, MeasureBasis)],
    creg: &[u8],
    out: &mut BTreeMap<String, f64>,
) {
    let m = flips.len();
    // enumerate recorded vectors; skip flip work when all rates are zero
    let any_flip = flips.iter().any(|(a, b)| *a > 0.0 || *b > 0.0);
    if !any_flip {
        let mut bits = creg.to_vec();
        for (pos, (_, clbit, _)) in suffix.iter().enumerate() {
            bits[*clbit] = ((true_bits >> (m - 1 - pos)) & 1) as u8;
        }
        *out.entry(bits_to_string(&bits)).or_insert(0.0) += weight;
        return;
    }
    for recorded in 0..(1usize << m) {
        let mut w = weight;
        for (pos, (e0, e1)) in flips.iter().enumerate() {
            let t = (true_bits >> (m - 1 - pos)) & 1;
            let r = (recorded >> (m - 1 - pos)) & 1;
            let f = match (t, r) {
                (0, 0) => 1.0 - e0,
                (0, 1) => *e0,
                (1, 1) => 1.0 - e1,
                (1, 0) => *e1,
                _ => unreachable!(),
            };
            w *= f;
            if w == 0.0 {
                break;
            }
        }
        if w <= 0.0 {
            continue;
        }
        let mut bits = creg.to_vec();
        for (pos, (_, clbit, _)) in suffix.iter().enumerate() {
            bits[*clbit] = ((recorded >> (m - 1 - pos)) & 1) as u8;
        }
        *out.entry(bits_to_string(&bits)).or_insert(0.0) += w;
    }
}

fn apply_exact_instr(
    instr: &Instruction,
    branches: &mut Vec<Branch>,
    noise: Option<&NoiseModel>,
) -> Result<(), CircuitError> {
    match instr {
        Instruction::Barrier { .. } => {}
        Instruction::Gate { gate, qubits } => {
            if gate.name() != "id" {
                let m = gate.matrix();
                for b in branches.iter_mut() {
                    b.rho = b.rho.apply_unchecked(&m, qubits);
                }
            }
            if let Some(ch) = noise.and_then(|n| n.gate_channel(gate.name(), qubits)) {
                for b in branches.iter_mut() {
                    b.rho = b.rho.apply_kraus(&ch, qubits)?;
                }
            }
        }
        Instruction::Conditional {
            clbit,
            gate,
            qubits,
        } => {
            let m = gate.matrix();
            let ch = noise.and_then(|n| n.gate_channel(gate.name(), qubits));
            for b in branches.iter_mut() {
                if b.creg[*clbit] == 1 {
                    b.rho = b.rho.apply_unchecked(&m, qubits);
                    if let Some(ch) = &ch {
                        b.rho = b.rho.apply_kraus(ch, qubits)?;
                    }
                }
            }
        }
        Instruction::Reset { qubit } => {
            let ch = KrausChannel::reset();
            for b in branches.iter_mut() {
                b.rho = b.rho.apply_kraus(&ch, &[*qubit])?;
            }
        }
        Instruction::Measure {
            qubit,
            clbit,
            basis,
        } => {
            let mut next = Vec::with_capacity(branches.len() * 2);
            for b in branches.drain(..) {
                let outcomes = b.rho.measure_exact(*qubit, *basis)?;
                let (e0, e1) = noise.map(|n| n.readout_flips(*qubit)).unwrap_or((0.0, 0.0));
                for (outcome, p, post) in outcomes {
                    let flip = if outcome == 0 { e0 } else { e1 };
                    for (recorded, w) in [(outcome, 1.0 - flip), (1 - outcome, flip)] {
                        if w <= 0.0 {
                            continue;
                        }
                        let mut creg = b.creg.clone();
                        creg[*clbit] = recorded;
                        next.push(Branch {
                            creg,
                            probability: b.probability * p * w,
                            rho: post.clone(),
                        });
                    }
                }
            }
            next.retain(|b| b.probability > PRUNE_TOL);
            *branches = next;
        }
    }
    Ok(())
}

pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 over (seed, index)
    let mut z = seed
        .wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Monte-Carlo trajectory simulation over `shots` samples.
pub fn simulate_trajectory(
    c: &Circuit,
    noise: Option<&NoiseModel>,
    shots: usize,
    seed: u64,
) -> Result<SimulationResult, CircuitError> {
    simulate_trajectory_impl(c, noise, shots, seed, false)
}

/// Trajectory simulation retaining the final statevector of every shot.
pub fn simulate_trajectory_with_states(
    c: &Circuit,
    noise: Option<&NoiseModel>,
    shots: usize,
    seed: u64,
) -> Result<SimulationResult, CircuitError> {
    simulate_trajectory_impl(c, noise, shots, seed, true)
}

fn simulate_trajectory_impl(
    c: &Circuit,
    noise: Option<&NoiseModel>,
    shots: usize,
    seed: u64,
    keep_states: bool,
) -> Result<SimulationResult, CircuitError> {
    validate_conditions(c)?;
    let ops = instrument(c, noise)?;
    let records: Result<Vec<ShotRecord>, CircuitError> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, shot as u64));
            run_shot(c, &ops, noise, &mut rng, keep_states)
        })
        .collect();
    let records = records?;
    let mut distribution: BTreeMap<String, f64> = BTreeMap::new();
    for r in &records {
        *distribution.entry(bits_to_string(&r.bits)).or_insert(0.0) += 1.0;
    }
    Ok(SimulationResult {
        distribution,
        branches: None,
        final_density: None,
        shots: Some(records),
    })
}

pub(crate) fn sample_kraus<R: Rng>(
    state: &StateVector,
    ch: &KrausChannel,
    targets: &[usize],
    rng: &mut R,
) -> StateVector {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last: Option<StateVector> = None;
    for k in ch.operators() {
        let cand = state.apply_unchecked(k, targets);
        let p = cand.norm_sqr();
        acc += p;
        if u < acc && p > 0.0 {
            let amps = cand
                .amplitudes()
                .iter()
                .map(|a| a / num_complex::Complex64::new(p.sqrt(), 0.0))
                .collect();
            return StateVector::from_amplitudes(state.num_qubits(), amps)
                .unwrap_or_else(|_| cand.clone());
        }
        if p > 0.0 {
            last = Some(cand);
        }
    }
    // numerical fallback: renormalise the last non-null candidate
    let cand = last.expect("Kraus channel produced no outcome");
    let p = cand.norm_sqr();
    let amps = cand
        .amplitudes()
        .iter()
        .map(|a| a / num_complex::Complex64::new(p.sqrt(), 0.0))
        .collect();
    StateVector::from_amplitudes(state.num_qubits(), amps).unwrap()
}

fn run_shot(
    c: &Circuit,
    ops: &[SimOp<'_>],
    noise: Option<&NoiseModel>,
    rng: &mut ChaCha8Rng,
    keep_states: bool,
) -> Result<ShotRecord, CircuitError> {
    let mut state = StateVector::zero(c.num_qubits)?;
    let mut creg = vec![0u8; c.num_clbits];
    execute_ops(&mut state, &mut creg, ops, noise, rng)?;
    Ok(ShotRecord {
        bits: creg,
        state: if keep_states { Some(state) } else { None },
    })
}

/// Execute instrumented ops on a caller-owned register (trajectory mode).
pub(crate) fn execute_ops(
    state: &mut StateVector,
    creg: &mut [u8],
    ops: &[SimOp<'_>],
    noise: Option<&NoiseModel>,
    rng: &mut ChaCha8Rng,
) -> Result<(), CircuitError> {
    for op in ops {
        match op {
            SimOp::Idle { qubit, duration } => {
                if let Some(ch) = noise.and_then(|n| n.idle_channel(*qubit, *duration)) {
                    *state = sample_kraus(state, &ch, &[*qubit], rng);
                }
            }
            SimOp::Instr(instr) => match instr {
                Instruction::Barrier { .. } => {}
                Instruction::Gate { gate, qubits } => {
                    if gate.name() != "id" {
                        state.apply_in_place(&gate.matrix(), qubits);
                    }
                    if let Some(ch) = noise.and_then(|n| n.gate_channel(gate.name(), qubits)) {
                        *state = sample_kraus(state, &ch, qubits, rng);
                    }
                }
                Instruction::Conditional {
                    clbit,
                    gate,
                    qubits,
                } => {
                    if creg[*clbit] == 1 {
                        state.apply_in_place(&gate.matrix(), qubits);
                        if let Some(ch) =
                            noise.and_then(|n| n.gate_channel(gate.name(), qubits))
                        {
                            *state = sample_kraus(state, &ch, qubits, rng);
                        }
                    }
                }
                Instruction::Reset { qubit } => {
                    let (outcome, _, post) = state.measure_sample(*qubit, MeasureBasis::Z, rng)?;
                    *state = post;
                    if outcome == 1 {
                        state.apply_in_place(&crate::quantum::gates::pauli_x(), &[*qubit]);
                    }
                }
                Instruction::Measure {
                    qubit,
                    clbit,
                    basis,
                } => {
                    let (outcome, _, post) = state.measure_sample(*qubit, *basis, rng)?;
                    *state = post;
                    let (e0, e1) =
                        noise.map(|n| n.readout_flips(*qubit)).unwrap_or((0.0, 0.0));
                    let flip = if outcome == 0 { e0 } else { e1 };
                    let recorded = if flip > 0.0 && rng.gen::<f64>() < flip {
                        1 - outcome
                    } else {
                        outcome
                    };
                    creg[*clbit] = recorded;
                }
            },
        }
    }
    Ok(())
}
