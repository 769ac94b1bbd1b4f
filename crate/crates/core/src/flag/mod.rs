//! Flagged and unflagged syndrome-extraction circuits, the ideal and
//! hardware-constrained correction protocols, and exhaustive single-fault
//! verification of the gadgets' fault-tolerance.

mod extraction;
mod faults;
mod protocol;

pub use extraction::{flagged_syndrome_circuit, nonft_syndrome_circuit, ExtractionCircuit};
pub use faults::{
    enumerate_single_faults, extended_lookup, FaultLocation, FaultOutcome, FaultRecord,
    FaultReport,
};
pub use protocol::{
    apply_virtual_correction, run_hardware_protocol, run_ideal_protocol, InjectedFault,
    ProtocolOptions, ProtocolResult, SyndromeRecord,
};
