//! The [[5,1,3]] perfect code: generators, logical operators, logical-state
//! preparation circuits, syndrome computation and lookup decoding.
//!
//! Generator order is fixed as the cyclic family XZZXI, IXZZX, XIXZZ, ZXIXZ;
//! syndrome bit i is the anticommutation indicator against generator i.
//! The logical |-> state is the 5-cycle graph state (a |+> on every qubit,
//! CZ on each cycle edge); it satisfies <g_i> = +1 and <X_L> = -1.

use crate::circuit::Circuit;
use crate::quantum::{DensityMatrix, PauliLetter, PauliString, QuantumError, StateVector};
use once_cell::sync::Lazy;

pub const N: usize = 5;

/// Stabilizer code data: four generators plus the logical pair.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub generators: [PauliString; 4],
    pub logical_x: PauliString,
    pub logical_z: PauliString,
}

/// 4-bit syndrome ordered by generator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(pub [u8; 4]);

impl Syndrome {
    pub fn is_trivial(&self) -> bool {
        self.0 == [0, 0, 0, 0]
    }

    pub fn as_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn from_index(idx: usize) -> Self {
        Syndrome([
            ((idx >> 3) & 1) as u8,
            ((idx >> 2) & 1) as u8,
            ((idx >> 1) & 1) as u8,
            (idx & 1) as u8,
        ])
    }
}

impl std::fmt::Display for Syndrome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// The [[5,1,3]] code with the cyclic generator convention.
pub fn five_qubit_code() -> &'static StabilizerCode {
    static CODE: Lazy<StabilizerCode> = Lazy::new(|| StabilizerCode {
        n: 5,
        k: 1,
        d: 3,
        generators: [
            PauliString::parse("XZZXI").unwrap(),
            PauliString::parse("IXZZX").unwrap(),
            PauliString::parse("XIXZZ").unwrap(),
            PauliString::parse("ZXIXZ").unwrap(),
        ],
        logical_x: PauliString::parse("XXXXX").unwrap(),
        logical_z: PauliString::parse("ZZZZZ").unwrap(),
    });
    &CODE
}

/// The 16 unsigned elements of the stabilizer group (letter patterns).
pub fn stabilizer_group() -> &'static Vec<PauliString> {
    static GROUP: Lazy<Vec<PauliString>> = Lazy::new(|| {
        let code = five_qubit_code();
        let mut out = Vec::with_capacity(16);
        for mask in 0..16usize {
            let mut p = PauliString::identity(N);
            for (i, g) in code.generators.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    p = p.mul_unsigned(g);
                }
            }
            out.push(p);
        }
        out
    });
    &GROUP
}

/// Syndrome of a 5-qubit Pauli error.
pub fn syndrome_of(err: &PauliString) -> Result<Syndrome, QuantumError> {
    if err.num_qubits() != N {
        return Err(QuantumError::DimensionMismatch(format!(
            "syndrome expects a 5-qubit Pauli, got {}",
            err.num_qubits()
        )));
    }
    let code = five_qubit_code();
    let mut bits = [0u8; 4];
    for (i, g) in code.generators.iter().enumerate() {
        bits[i] = err.anticommutes_with(g) as u8;
    }
    Ok(Syndrome(bits))
}

/// Unique weight-<=1 Pauli with the given syndrome (the perfect-code lookup).
pub fn decode(s: Syndrome) -> &'static PauliString {
    static TABLE: Lazy<[PauliString; 16]> = Lazy::new(|| {
        let mut table: [Option<PauliString>; 16] = Default::default();
        table[0] = Some(PauliString::identity(N));
        for q in 0..N {
            for l in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
                let e = PauliString::single(N, q, l);
                let syn = syndrome_of(&e).unwrap().as_index();
                assert!(
                    table[syn].is_none(),
                    "syndrome collision while building the lookup table"
                );
                table[syn] = Some(e);
            }
        }
        table.map(|o| o.expect("perfect code covers all 16 syndromes"))
    });
    &TABLE[s.as_index()]
}

/// Reduce a Pauli modulo the stabilizer group: the representative of its
/// coset with minimal (weight, letters) order. Logical operators are not
/// modded out.
pub fn reduce_mod_stabilizers(p: &PauliString) -> PauliString {
    stabilizer_group()
        .iter()
        .map(|s| p.mul_unsigned(s))
        .min_by_key(|cand| (cand.weight(), cand.letters().to_vec()))
        .unwrap()
}

/// Generator and logical-X expectations of a 5-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeExpectations {
    pub generators: [f64; 4],
    pub logical_x: f64,
}

pub fn verify_codestate(state: &DensityMatrix) -> Result<CodeExpectations, QuantumError> {
    if state.num_qubits() != N {
        return Err(QuantumError::DimensionMismatch(format!(
            "verify_codestate expects 5 qubits, got {}",
            state.num_qubits()
        )));
    }
    let code = five_qubit_code();
    let mut generators = [0.0; 4];
    for (i, g) in code.generators.iter().enumerate() {
        generators[i] = state.expectation(g);
    }
    Ok(CodeExpectations {
        generators,
        logical_x: state.expectation(&code.logical_x),
    })
}

/// Named preparation-circuit variants for the logical |-> state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepVariant {
    /// Depth-3 CZ layering on all-to-all connectivity.
    IdealDepth3,
    /// 6-entangling-gate construction fitting the 15-qubit ladder, CNOT
    /// depth 4; output has qubits 0 and 1 exchanged.
    MelbourneDepth4,
    /// Plain SWAP-inserted routing, CNOT depth 6; output has qubits 1 and 4
    /// exchanged.
    MelbourneDepth6,
    /// 5-qubit T-topology construction; input roles (1,2,0,3,4) end at
    /// (2,0,1,4,3).
    Vigo,
}

impl PrepVariant {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "ideal-depth3" => Some(PrepVariant::IdealDepth3),
            "melbourne-depth4" => Some(PrepVariant::MelbourneDepth4),
            "melbourne-depth6" => Some(PrepVariant::MelbourneDepth6),
            "vigo" => Some(PrepVariant::Vigo),
            _ => None,
        }
    }
}

/// A preparation circuit plus the wire each logical qubit ends on.
#[derive(Debug, Clone)]
pub struct PreparedCircuit {
    pub circuit: Circuit,
    /// `output_positions[l]` = wire holding logical qubit `l` afterwards.
    pub output_positions: [usize; 5],
}

/// The cycle edges defining the graph state, in depth-3 layer order.
pub const CYCLE_EDGES: [(usize, usize); 5] = [(0, 1), (2, 3), (1, 2), (3, 4), (4, 0)];

/// Preparation circuit for the logical |-> state.
///
/// All variants are unitarily equivalent to the ideal circuit up to the
/// documented output permutation: noiseless simulation yields the 5-cycle
/// graph state with logical qubit `l` on wire `output_positions[l]`.
pub fn prep_minus_logical(variant: PrepVariant) -> PreparedCircuit {
    match variant {
        PrepVariant::IdealDepth3 => {
            let mut c = Circuit::new(5, 0).with_name("prep-ideal-depth3");
            for q in 0..5 {
                c.h(q);
            }
            for (a, b) in CYCLE_EDGES {
                c.cz(a, b);
            }
            PreparedCircuit {
                circuit: c,
                output_positions: [0, 1, 2, 3, 4],
            }
        }
        PrepVariant::MelbourneDepth4 => {
            // hardware wires form the path 0-1-2-3-4 plus the chord (1,4);
            // the closing cycle edge is absorbed into a combined CZ+SWAP
            // block on (0,1): h a; cx a,b; cx b,a; h b == SWAP(a,b) CZ(a,b)
            let mut c = Circuit::new(5, 0).with_name("prep-melbourne-depth4");
            for q in 0..5 {
                c.h(q);
            }
            c.cz(1, 2);
            c.cz(3, 4);
            c.cz(2, 3);
            c.h(0);
            c.cx(0, 1);
            c.cx(1, 0);
            c.h(1);
            c.cz(4, 1);
            PreparedCircuit {
                circuit: c,
                output_positions: [1, 0, 2, 3, 4],
            }
        }
        PrepVariant::MelbourneDepth6 => {
            let mut c = Circuit::new(5, 0).with_name("prep-melbourne-depth6");
            for q in 0..5 {
                c.h(q);
            }
            c.cz(0, 1);
            c.cz(2, 3);
            c.cz(1, 2);
            c.cz(3, 4);
            c.cx(4, 1);
            c.cx(1, 4);
            c.cx(4, 1);
            c.cz(1, 0);
            PreparedCircuit {
                circuit: c,
                output_positions: [0, 4, 2, 3, 1],
            }
        }
        PrepVariant::Vigo => {
            // T topology: edges (0,1), (1,2), (1,3), (3,4); logical roles
            // start at wires (1,2,0,3,4) and finish at (2,0,1,4,3)
            let mut c = Circuit::new(5, 0).with_name("prep-vigo");
            for q in 0..5 {
                c.h(q);
            }
            c.cz(1, 2); // CZ(c0,c1)
            c.cx(0, 1);
            c.cx(1, 0);
            c.cx(0, 1); // swap(0,1) -> c0@0, c2@1
            c.cz(1, 2); // CZ(c2,c1)
            c.cz(1, 3); // CZ(c2,c3)
            c.h(3);
            c.cx(3, 4);
            c.cx(4, 3);
            c.h(4); // combined CZ(c3,c4)+SWAP(3,4)
            c.cx(0, 1);
            c.cx(1, 0);
            c.cx(0, 1); // swap(0,1) -> c2@0, c0@1
            c.cz(1, 3); // CZ(c0,c4)
            c.cx(1, 2);
            c.cx(2, 1);
            c.cx(1, 2); // swap(1,2)
            c.cx(0, 1);
            c.cx(1, 0);
            c.cx(0, 1); // swap(0,1)
            PreparedCircuit {
                circuit: c,
                output_positions: [2, 0, 1, 4, 3],
            }
        }
    }
}

/// The logical |-> state with logical qubit `l` on wire `positions[l]` of a
/// `num_qubits`-wide register (other wires |0>).
pub fn logical_minus_state_at(
    positions: &[usize; 5],
    num_qubits: usize,
) -> Result<StateVector, QuantumError> {
    let mut s = StateVector::zero(num_qubits)?;
    let h = crate::quantum::gates::hadamard();
    for &p in positions {
        s = s.apply_unitary(&h, &[p])?;
    }
    let cz = crate::quantum::gates::cz();
    for (a, b) in CYCLE_EDGES {
        s = s.apply_unitary(&cz, &[positions[a], positions[b]])?;
    }
    Ok(s)
}

/// The logical |-> state on wires 0..5.
pub fn logical_minus_state() -> StateVector {
    logical_minus_state_at(&[0, 1, 2, 3, 4], 5).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{cnot_depth, gate_counts, simulate_density};
    use crate::quantum::fidelity_to_pure;

    #[test]
    fn generator_family() {
        let code = five_qubit_code();
        assert_eq!(format!("{}", code.generators[0]), "XZZXI");
        assert_eq!(format!("{}", code.generators[3]), "ZXIXZ");
        assert_eq!(format!("{}", code.logical_x), "XXXXX");
        // mutual commutation
        for a in &code.generators {
            for b in &code.generators {
                assert!(!a.anticommutes_with(b));
            }
            assert!(!code.logical_x.anticommutes_with(a));
            assert!(!code.logical_z.anticommutes_with(a));
        }
        assert!(code.logical_x.anticommutes_with(&code.logical_z));
    }

    #[test]
    fn generators_independent_over_gf2() {
        // rank of the 4x10 symplectic matrix must be 4
        let code = five_qubit_code();
        let mut rows: Vec<u16> = code
            .generators
            .iter()
            .map(|g| {
                let mut r: u16 = 0;
                for (q, l) in g.letters().iter().enumerate() {
                    let (x, z) = match l {
                        PauliLetter::I => (0, 0),
                        PauliLetter::X => (1, 0),
                        PauliLetter::Z => (0, 1),
                        PauliLetter::Y => (1, 1),
                    };
                    r |= (x as u16) << q;
                    r |= (z as u16) << (q + 5);
                }
                r
            })
            .collect();
        let mut rank = 0;
        for bit in 0..10 {
            if let Some(pos) = (rank..rows.len()).find(|&i| (rows[i] >> bit) & 1 == 1) {
                rows.swap(rank, pos);
                for i in 0..rows.len() {
                    if i != rank && (rows[i] >> bit) & 1 == 1 {
                        rows[i] ^= rows[rank];
                    }
                }
                rank += 1;
            }
        }
        assert_eq!(rank, 4);
    }

    #[test]
    fn syndrome_of_x_on_first_qubit() {
        let e = PauliString::single(5, 0, PauliLetter::X);
        assert_eq!(syndrome_of(&e).unwrap(), Syndrome([0, 0, 0, 1]));
    }

    #[test]
    fn perfect_code_syndromes_distinct_and_decode_roundtrip() {
        let mut seen = std::collections::BTreeSet::new();
        for q in 0..5 {
            for l in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
                let e = PauliString::single(5, q, l);
                let s = syndrome_of(&e).unwrap();
                assert!(!s.is_trivial());
                assert!(seen.insert(s.as_index()), "duplicate syndrome {s}");
                assert_eq!(decode(s), &e);
            }
        }
        assert_eq!(seen.len(), 15);
        assert!(decode(Syndrome([0, 0, 0, 0])).is_identity());
    }

    #[test]
    fn stabilizer_group_weight_distribution() {
        // the perfect code group: identity plus 15 weight-4 elements
        let mut weights = std::collections::BTreeMap::new();
        for p in stabilizer_group() {
            *weights.entry(p.weight()).or_insert(0usize) += 1;
        }
        assert_eq!(weights.get(&0), Some(&1));
        assert_eq!(weights.get(&4), Some(&15));
    }

    #[test]
    fn codestate_expectations() {
        let minus = logical_minus_state().to_density();
        let e = verify_codestate(&minus).unwrap();
        for g in e.generators {
            assert!((g - 1.0).abs() < 1e-12);
        }
        assert!((e.logical_x + 1.0).abs() < 1e-12);

        let mm = DensityMatrix::maximally_mixed(5).unwrap();
        let em = verify_codestate(&mm).unwrap();
        for g in em.generators {
            assert!(g.abs() < 1e-12);
        }
        assert!(em.logical_x.abs() < 1e-12);
    }

    #[test]
    fn single_paulis_flip_matching_generators() {
        let minus = logical_minus_state();
        for q in 0..5 {
            for l in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
                let e = PauliString::single(5, q, l);
                let s = syndrome_of(&e).unwrap();
                let damaged = minus.apply_pauli(&e).to_density();
                let exp = verify_codestate(&damaged).unwrap();
                for (i, g) in exp.generators.iter().enumerate() {
                    let want = if s.0[i] == 1 { -1.0 } else { 1.0 };
                    assert!((g - want).abs() < 1e-12, "{e} gen {i}");
                }
            }
        }
    }

    #[test]
    fn all_prep_variants_produce_logical_minus() {
        for variant in [
            PrepVariant::IdealDepth3,
            PrepVariant::MelbourneDepth4,
            PrepVariant::MelbourneDepth6,
            PrepVariant::Vigo,
        ] {
            let prep = prep_minus_logical(variant);
            let r = simulate_density(&prep.circuit, None).unwrap();
            let target = logical_minus_state_at(&prep.output_positions, 5).unwrap();
            let f = fidelity_to_pure(&target, &r.final_density.unwrap()).unwrap();
            assert!(f > 1.0 - 1e-9, "{variant:?}: fidelity {f}");
        }
    }

    #[test]
    fn melbourne_variants_hit_published_depths() {
        let p4 = prep_minus_logical(PrepVariant::MelbourneDepth4);
        assert_eq!(cnot_depth(&p4.circuit), 4);
        assert_eq!(gate_counts(&p4.circuit).get("cx"), Some(&2));
        assert_eq!(gate_counts(&p4.circuit).get("cz"), Some(&4));
        let p6 = prep_minus_logical(PrepVariant::MelbourneDepth6);
        assert_eq!(cnot_depth(&p6.circuit), 6);
    }

    #[test]
    fn ideal_prep_gate_counts() {
        let prep = prep_minus_logical(PrepVariant::IdealDepth3);
        let counts = gate_counts(&prep.circuit);
        assert_eq!(counts.get("cz"), Some(&5));
        assert_eq!(counts.get("h"), Some(&5));
        assert_eq!(cnot_depth(&prep.circuit), 3);
    }

    #[test]
    fn vigo_output_permutation() {
        let prep = prep_minus_logical(PrepVariant::Vigo);
        assert_eq!(prep.output_positions, [2, 0, 1, 4, 3]);
    }

    #[test]
    fn reduce_mod_stabilizers_prefers_low_weight() {
        // the tail ZZX.. pattern times a generator should reduce to weight 1
        let code = five_qubit_code();
        let g = &code.generators[0]; // XZZXI
        let head = PauliString::single(5, 0, PauliLetter::X);
        let tail = g.mul_unsigned(&head); // IZZXI-ish complement
        let reduced = reduce_mod_stabilizers(&tail);
        assert_eq!(&reduced, &head);
        // logical X is not reduced below weight 3
        let red_log = reduce_mod_stabilizers(&code.logical_x);
        assert!(red_log.weight() >= 3);
    }
}
