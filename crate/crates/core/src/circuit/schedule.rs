//! ASAP scheduling against a device duration table.
//!
//! Runtime follows the convention of reporting, per qubit, the accumulated
//! busy-plus-wait time before that qubit's first measurement; measurement
//! duration itself is excluded. Unmeasured qubits contribute their last
//! activity end time.

use super::{Circuit, Instruction};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("no duration for gate '{name}' in the device model")]
    MissingDuration { name: String },
}

/// Provider of per-gate durations in microseconds.
pub trait DurationSource {
    /// Duration for `name` acting on `qubits`, honouring per-qubit or
    /// per-edge overrides when present.
    fn gate_duration(&self, name: &str, qubits: &[usize]) -> Option<f64>;
}

/// An interval during which a qubit sits idle between operations.
#[derive(Debug, Clone, PartialEq)]
pub struct IdleGap {
    pub qubit: usize,
    /// Index into `Circuit::instructions` of the op the qubit was waiting for.
    pub before_instr: usize,
    pub start: f64,
    pub duration: f64,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    /// (start, end) per instruction, in microseconds.
    pub instr_spans: Vec<(f64, f64)>,
    /// Idle waits detected between operations, for decoherence modelling.
    pub idle_gaps: Vec<IdleGap>,
    /// Per qubit: start of its first measurement, or last activity end.
    pub qubit_stop: Vec<f64>,
    /// max over qubits of `qubit_stop`.
    pub runtime_us: f64,
}

const GAP_TOL: f64 = 1e-12;

pub fn compute_schedule(
    c: &Circuit,
    durations: &dyn DurationSource,
) -> Result<Schedule, ScheduleError> {
    let mut clock = vec![0.0f64; c.num_qubits];
    let mut measured_at: Vec<Option<f64>> = vec![None; c.num_qubits];
    let mut spans = Vec::with_capacity(c.instructions.len());
    let mut gaps = Vec::new();

    for (idx, instr) in c.instructions.iter().enumerate() {
        let qs = instr.qubits();
        let start = qs.iter().map(|&q| clock[q]).fold(0.0, f64::max);
        for &q in &qs {
            let wait = start - clock[q];
            if wait > GAP_TOL {
                gaps.push(IdleGap {
                    qubit: q,
                    before_instr: idx,
                    start: clock[q],
                    duration: wait,
                });
            }
        }
        let dur = match instr {
            Instruction::Gate { gate, qubits }
            | Instruction::Conditional { gate, qubits, .. } => durations
                .gate_duration(gate.name(), qubits)
                .ok_or_else(|| ScheduleError::MissingDuration {
                    name: gate.name().to_string(),
                })?,
            Instruction::Barrier { .. } => 0.0,
            Instruction::Measure { qubit, .. } => {
                if measured_at[*qubit].is_none() {
                    measured_at[*qubit] = Some(start);
                }
                0.0
            }
            Instruction::Reset { .. } => 0.0,
        };
        let end = start + dur;
        for &q in &qs {
            clock[q] = end;
        }
        spans.push((start, end));
    }

    let qubit_stop: Vec<f64> = (0..c.num_qubits)
        .map(|q| measured_at[q].unwrap_or(clock[q]))
        .collect();
    let runtime_us = qubit_stop.iter().copied().fold(0.0, f64::max);
    Ok(Schedule {
        instr_spans: spans,
        idle_gaps: gaps,
        qubit_stop,
        runtime_us,
    })
}

/// Maximum over qubits of accumulated busy+wait time before measurement.
pub fn estimate_runtime(
    c: &Circuit,
    durations: &dyn DurationSource,
) -> Result<f64, ScheduleError> {
    Ok(compute_schedule(c, durations)?.runtime_us)
}

#[cfg(test)]
pub(crate) struct FixedDurations(pub std::collections::HashMap<String, f64>);

#[cfg(test)]
impl DurationSource for FixedDurations {
    fn gate_duration(&self, name: &str, _qubits: &[usize]) -> Option<f64> {
        self.0.get(name).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn table() -> FixedDurations {
        let mut m = HashMap::new();
        m.insert("u2".to_string(), 0.0978);
        m.insert("h".to_string(), 0.0978);
        m.insert("cx".to_string(), 1.002);
        m.insert("id".to_string(), 0.0533);
        FixedDurations(m)
    }

    #[test]
    fn empty_circuit_runs_zero() {
        let c = Circuit::new(3, 0);
        assert_eq!(estimate_runtime(&c, &table()).unwrap(), 0.0);
    }

    #[test]
    fn single_u2_mean_duration() {
        let mut c = Circuit::new(1, 0);
        c.gate(crate::circuit::Gate::U2(0.0, 0.0), &[0]);
        assert!((estimate_runtime(&c, &table()).unwrap() - 0.0978).abs() < 1e-12);
    }

    #[test]
    fn sequential_cx_chain() {
        let mut c = Circuit::new(3, 0);
        c.cx(0, 1).cx(1, 2);
        assert!((estimate_runtime(&c, &table()).unwrap() - 2.0 * 1.002).abs() < 1e-12);
    }

    #[test]
    fn runtime_excludes_measure_and_is_monotone() {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1);
        let r1 = estimate_runtime(&c, &table()).unwrap();
        c.measure(0, 0).measure(1, 1);
        let r2 = estimate_runtime(&c, &table()).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
        let mut c3 = c.clone();
        c3.instructions.truncate(2);
        c3.h(1);
        let r3 = estimate_runtime(&c3, &table()).unwrap();
        assert!(r3 >= r1);
    }

    #[test]
    fn missing_duration_is_an_error() {
        let mut c = Circuit::new(1, 0);
        c.s(0);
        assert!(matches!(
            estimate_runtime(&c, &table()),
            Err(ScheduleError::MissingDuration { .. })
        ));
    }

    #[test]
    fn idle_gap_detection() {
        // qubit 1 waits while qubit 0 runs two single-qubit gates
        let mut c = Circuit::new(2, 0);
        c.h(0).h(0).cx(0, 1);
        let s = compute_schedule(&c, &table()).unwrap();
        assert_eq!(s.idle_gaps.len(), 1);
        let g = &s.idle_gaps[0];
        assert_eq!(g.qubit, 1);
        assert_eq!(g.before_instr, 2);
        assert!((g.duration - 2.0 * 0.0978).abs() < 1e-12);
    }

    #[test]
    fn barrier_waits_are_recorded() {
        let mut c = Circuit::new(2, 0);
        c.h(0).barrier(&[0, 1]).h(1);
        let s = compute_schedule(&c, &table()).unwrap();
        assert!(s
            .idle_gaps
            .iter()
            .any(|g| g.qubit == 1 && (g.duration - 0.0978).abs() < 1e-12));
    }
}
