//! Benchmarking toolkit for flag-based fault-tolerant syndrome extraction on
//! the [[5,1,3]] perfect code.
//!
//! The crate bundles an exact density-matrix / trajectory circuit simulator,
//! the five-qubit code with flagged extraction gadgets and exhaustive
//! single-fault analysis, a deterministic SWAP-insertion router for device
//! coupling maps, conditional state tomography with readout-error mitigation,
//! and a depolarizing-channel fit of post-stabilizer states. A batch CLI
//! (`flagqec`) reproduces the experiment roster end to end and emits JSON
//! reports.
//!
//! Qubit ordering convention used everywhere: qubit 0 is the first tensor
//! factor, i.e. the most significant bit of a basis-state index. Classical
//! bitstrings are printed clbit-0-first.

pub mod channel_fit;
pub mod circuit;
pub mod code513;
pub mod device;
pub mod experiment;
pub mod flag;
pub mod noise;
pub mod qasm;
pub mod quantum;
pub mod tomography;
pub mod transpile;

pub use circuit::{Circuit, Gate, Instruction, MeasureBasis, SimulationResult};
pub use device::{CalibrationMatrix, DeviceModel};
pub use noise::NoiseModel;
pub use quantum::{DensityMatrix, KrausChannel, PauliLetter, PauliString, StateVector};

/// Default cap on register width for dense simulation objects.
pub const QUBIT_CAP: usize = 12;
