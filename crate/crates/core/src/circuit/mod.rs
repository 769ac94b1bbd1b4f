//! Circuit representation, noisy simulation, gate/depth accounting and
//! ASAP-schedule runtime estimation.

mod analysis;
mod schedule;
mod sim;

pub use analysis::{circuit_unitary, cnot_depth, gate_counts};
pub use schedule::{compute_schedule, estimate_runtime, DurationSource, IdleGap, Schedule};
pub use sim::{
    simulate_density, simulate_density_from, simulate_density_with_states,
    simulate_trajectory, simulate_trajectory_with_states, ExactBranch, ShotRecord,
    SimulationResult,
};

pub(crate) mod sim_internals {
    pub(crate) use super::sim::{execute_ops, instrument, mix_seed};
}

pub use crate::quantum::MeasureBasis;
use crate::quantum::{gates, QuantumError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("unsupported gate '{0}'")]
    UnsupportedGate(String),
    #[error("gate '{name}' expects {expected} parameter(s), got {got}")]
    BadParamCount {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("gate '{name}' expects {expected} qubit argument(s), got {got}")]
    BadQubitCount {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("qubit index {index} out of range (register width {width})")]
    QubitOutOfRange { index: usize, width: usize },
    #[error("classical bit index {index} out of range (register width {width})")]
    ClbitOutOfRange { index: usize, width: usize },
    #[error("duplicate qubit argument {0}")]
    DuplicateQubit(usize),
    #[error("classical condition reads bit {clbit} before any measurement writes it")]
    ConditionOnUnwrittenBit { clbit: usize },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Supported gate set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Id,
    U1(f64),
    U2(f64, f64),
    U3(f64, f64, f64),
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    Cx,
    Cz,
    Swap,
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Id => "id",
            Gate::U1(_) => "u1",
            Gate::U2(..) => "u2",
            Gate::U3(..) => "u3",
            Gate::H => "h",
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::S => "s",
            Gate::Sdg => "sdg",
            Gate::Cx => "cx",
            Gate::Cz => "cz",
            Gate::Swap => "swap",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Cx | Gate::Cz | Gate::Swap => 2,
            _ => 1,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self {
            Gate::U1(l) => vec![*l],
            Gate::U2(p, l) => vec![*p, *l],
            Gate::U3(t, p, l) => vec![*t, *p, *l],
            _ => vec![],
        }
    }

    pub fn is_entangling(&self) -> bool {
        self.arity() == 2
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        match self {
            Gate::Id => gates::identity(2),
            Gate::U1(l) => gates::u1(*l),
            Gate::U2(p, l) => gates::u2(*p, *l),
            Gate::U3(t, p, l) => gates::u3(*t, *p, *l),
            Gate::H => gates::hadamard(),
            Gate::X => gates::pauli_x(),
            Gate::Y => gates::pauli_y(),
            Gate::Z => gates::pauli_z(),
            Gate::S => gates::s_gate(),
            Gate::Sdg => gates::sdg_gate(),
            Gate::Cx => gates::cx(),
            Gate::Cz => gates::cz(),
            Gate::Swap => gates::swap(),
        }
    }

    pub fn from_name(name: &str, params: &[f64]) -> Result<Gate, CircuitError> {
        let expect = |n: usize| -> Result<(), CircuitError> {
            if params.len() != n {
                Err(CircuitError::BadParamCount {
                    name: name.to_string(),
                    expected: n,
                    got: params.len(),
                })
            } else {
                Ok(())
            }
        };
        let g = match name {
            "id" => {
                expect(0)?;
                Gate::Id
            }
            "u1" => {
                expect(1)?;
                Gate::U1(params[0])
            }
            "u2" => {
                expect(2)?;
                Gate::U2(params[0], params[1])
            }
            "u3" => {
                expect(3)?;
                Gate::U3(params[0], params[1], params[2])
            }
            "h" => {
                expect(0)?;
                Gate::H
            }
            "x" => {
                expect(0)?;
                Gate::X
            }
            "y" => {
                expect(0)?;
                Gate::Y
            }
            "z" => {
                expect(0)?;
                Gate::Z
            }
            "s" => {
                expect(0)?;
                Gate::S
            }
            "sdg" => {
                expect(0)?;
                Gate::Sdg
            }
            "cx" => {
                expect(0)?;
                Gate::Cx
            }
            "cz" => {
                expect(0)?;
                Gate::Cz
            }
            "swap" => {
                expect(0)?;
                Gate::Swap
            }
            other => return Err(CircuitError::UnsupportedGate(other.to_string())),
        };
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Instruction {
    Gate {
        gate: Gate,
        qubits: Vec<usize>,
    },
    Barrier {
        qubits: Vec<usize>,
    },
    Measure {
        qubit: usize,
        clbit: usize,
        basis: MeasureBasis,
    },
    Reset {
        qubit: usize,
    },
    /// `if (c[clbit] == 1) gate ...`
    Conditional {
        clbit: usize,
        gate: Gate,
        qubits: Vec<usize>,
    },
}

impl Instruction {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::Gate { qubits, .. } | Instruction::Barrier { qubits } => qubits.clone(),
            Instruction::Measure { qubit, .. } | Instruction::Reset { qubit } => vec![*qubit],
            Instruction::Conditional { qubits, .. } => qubits.clone(),
        }
    }
}

/// Ordered instruction list over one quantum and one classical register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub instructions: Vec<Instruction>,
    pub name: String,
    /// Logical-to-physical annotation carried by routed/fixture circuits.
    pub initial_layout: Option<Vec<usize>>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            instructions: Vec::new(),
            name: String::new(),
            initial_layout: None,
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn try_push(&mut self, instr: Instruction) -> Result<(), CircuitError> {
        let qs = instr.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    index: q,
                    width: self.num_qubits,
                });
            }
            if !matches!(instr, Instruction::Barrier { .. }) && qs[..i].contains(&q) {
                return Err(CircuitError::DuplicateQubit(q));
            }
        }
        match &instr {
            Instruction::Gate { gate, qubits } | Instruction::Conditional { gate, qubits, .. } => {
                if qubits.len() != gate.arity() {
                    return Err(CircuitError::BadQubitCount {
                        name: gate.name().to_string(),
                        expected: gate.arity(),
                        got: qubits.len(),
                    });
                }
            }
            Instruction::Measure { clbit, .. } => {
                if *clbit >= self.num_clbits {
                    return Err(CircuitError::ClbitOutOfRange {
                        index: *clbit,
                        width: self.num_clbits,
                    });
                }
            }
            _ => {}
        }
        if let Instruction::Conditional { clbit, .. } = &instr {
            if *clbit >= self.num_clbits {
                return Err(CircuitError::ClbitOutOfRange {
                    index: *clbit,
                    width: self.num_clbits,
                });
            }
        }
        self.instructions.push(instr);
        Ok(())
    }

    fn push(&mut self, instr: Instruction) {
        self.try_push(instr).expect("invalid instruction");
    }

    pub fn gate(&mut self, gate: Gate, qubits: &[usize]) -> &mut Self {
        self.push(Instruction::Gate {
            gate,
            qubits: qubits.to_vec(),
        });
        self
    }

    pub fn id(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Id, &[q])
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::H, &[q])
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::X, &[q])
    }

    pub fn y(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Y, &[q])
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Z, &[q])
    }

    pub fn s(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::S, &[q])
    }

    pub fn sdg(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Sdg, &[q])
    }

    pub fn cx(&mut self, c: usize, t: usize) -> &mut Self {
        self.gate(Gate::Cx, &[c, t])
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::Cz, &[a, b])
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::Swap, &[a, b])
    }

    pub fn barrier(&mut self, qubits: &[usize]) -> &mut Self {
        self.push(Instruction::Barrier {
            qubits: qubits.to_vec(),
        });
        self
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        self.measure_in(qubit, clbit, MeasureBasis::Z)
    }

    pub fn measure_in(&mut self, qubit: usize, clbit: usize, basis: MeasureBasis) -> &mut Self {
        self.push(Instruction::Measure {
            qubit,
            clbit,
            basis,
        });
        self
    }

    pub fn reset(&mut self, qubit: usize) -> &mut Self {
        self.push(Instruction::Reset { qubit });
        self
    }

    pub fn conditional(&mut self, clbit: usize, gate: Gate, qubits: &[usize]) -> &mut Self {
        self.push(Instruction::Conditional {
            clbit,
            gate,
            qubits: qubits.to_vec(),
        });
        self
    }

    /// Relabel qubits through `map` (old index -> new index) onto a register
    /// of `new_width` qubits. Classical bits are unchanged.
    pub fn mapped_qubits(&self, map: &[usize], new_width: usize) -> Circuit {
        let mut out = Circuit::new(new_width, self.num_clbits);
        out.name = self.name.clone();
        for instr in &self.instructions {
            let remap = |qs: &[usize]| qs.iter().map(|&q| map[q]).collect::<Vec<_>>();
            let mapped = match instr {
                Instruction::Gate { gate, qubits } => Instruction::Gate {
                    gate: gate.clone(),
                    qubits: remap(qubits),
                },
                Instruction::Barrier { qubits } => Instruction::Barrier {
                    qubits: remap(qubits),
                },
                Instruction::Measure {
                    qubit,
                    clbit,
                    basis,
                } => Instruction::Measure {
                    qubit: map[*qubit],
                    clbit: *clbit,
                    basis: *basis,
                },
                Instruction::Reset { qubit } => Instruction::Reset { qubit: map[*qubit] },
                Instruction::Conditional {
                    clbit,
                    gate,
                    qubits,
                } => Instruction::Conditional {
                    clbit: *clbit,
                    gate: gate.clone(),
                    qubits: remap(qubits),
                },
            };
            out.push(mapped);
        }
        out
    }

    /// Structural equality with per-parameter tolerance.
    pub fn approx_eq(&self, other: &Circuit, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits
            || self.num_clbits != other.num_clbits
            || self.instructions.len() != other.instructions.len()
        {
            return false;
        }
        self.instructions
            .iter()
            .zip(&other.instructions)
            .all(|(a, b)| match (a, b) {
                (
                    Instruction::Gate { gate: ga, qubits: qa },
                    Instruction::Gate { gate: gb, qubits: qb },
                ) => qa == qb && gate_approx_eq(ga, gb, tol),
                (
                    Instruction::Conditional {
                        clbit: ca,
                        gate: ga,
                        qubits: qa,
                    },
                    Instruction::Conditional {
                        clbit: cb,
                        gate: gb,
                        qubits: qb,
                    },
                ) => ca == cb && qa == qb && gate_approx_eq(ga, gb, tol),
                (x, y) => x == y,
            })
    }
}

fn gate_approx_eq(a: &Gate, b: &Gate, tol: f64) -> bool {
    if a.name() != b.name() {
        return false;
    }
    a.params()
        .iter()
        .zip(b.params())
        .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_validation() {
        let mut c = Circuit::new(2, 1);
        assert!(c
            .try_push(Instruction::Gate {
                gate: Gate::Cx,
                qubits: vec![0, 1]
            })
            .is_ok());
        assert!(matches!(
            c.try_push(Instruction::Gate {
                gate: Gate::Cx,
                qubits: vec![0, 2]
            }),
            Err(CircuitError::QubitOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            c.try_push(Instruction::Gate {
                gate: Gate::Cx,
                qubits: vec![1, 1]
            }),
            Err(CircuitError::DuplicateQubit(1))
        ));
        assert!(matches!(
            c.try_push(Instruction::Measure {
                qubit: 0,
                clbit: 3,
                basis: MeasureBasis::Z
            }),
            Err(CircuitError::ClbitOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn qubit_relabeling() {
        let mut c = Circuit::new(2, 1);
        c.h(0).cx(0, 1).measure(1, 0);
        let m = c.mapped_qubits(&[5, 3], 6);
        assert_eq!(m.num_qubits, 6);
        assert_eq!(
            m.instructions[1],
            Instruction::Gate {
                gate: Gate::Cx,
                qubits: vec![5, 3]
            }
        );
    }
}
