//! Fixture integrity: published metrics, coupling-map compliance, and dense
//! unitary equivalence against the ideal circuits.

use flagqec::circuit::{cnot_depth, gate_counts, Instruction};
use flagqec::device::DeviceModel;
use flagqec::transpile::{builtin_device, fixtures, verify_equivalence, CouplingGraph};

fn device(name: &str) -> DeviceModel {
    DeviceModel::from_json_str(builtin_device(name).unwrap()).unwrap()
}

#[test]
fn stab_fixture_metrics() {
    let fx = fixtures();
    let stab = &fx["melbourne-stab-ZXIXZ"];
    assert_eq!(cnot_depth(&stab.routed.circuit), 10);
    assert_eq!(gate_counts(&stab.routed.circuit).get("cx"), Some(&18));
}

#[test]
fn prep_fixture_metrics() {
    let fx = fixtures();
    assert_eq!(cnot_depth(&fx["melbourne-prep-depth4"].routed.circuit), 4);
    assert_eq!(cnot_depth(&fx["melbourne-prep-depth6"].routed.circuit), 6);
}

#[test]
fn vigo_final_permutation() {
    let fx = fixtures();
    assert_eq!(fx["vigo-prep"].routed.final_permutation, vec![2, 0, 1, 4, 3]);
    assert_eq!(fx["vigo-prep"].routed.initial_layout, vec![1, 2, 0, 3, 4]);
}

#[test]
fn all_fixtures_respect_coupling_and_equivalence() {
    for (name, fx) in fixtures() {
        let dev = device(fx.device);
        let graph = CouplingGraph::from_device(&dev);
        for instr in &fx.routed.circuit.instructions {
            if let Instruction::Gate { gate, qubits } = instr {
                if gate.arity() == 2 {
                    assert!(
                        graph.has_edge(qubits[0], qubits[1]),
                        "{name}: gate on non-edge {qubits:?}"
                    );
                }
            }
        }
        assert!(
            verify_equivalence(&fx.ideal, &fx.routed).unwrap(),
            "{name}: unitary equivalence failed"
        );
    }
}

#[test]
fn fixture_files_match_programmatic_constructions() {
    use flagqec::code513::{prep_minus_logical, PrepVariant};
    use flagqec::transpile::{lower_to_native, stab_fixture_circuit};
    let regen = [
        (
            "melbourne_prep_depth4",
            lower_to_native(&prep_minus_logical(PrepVariant::MelbourneDepth4).circuit),
        ),
        (
            "melbourne_prep_depth6",
            lower_to_native(&prep_minus_logical(PrepVariant::MelbourneDepth6).circuit),
        ),
        ("melbourne_stab_zxixz", lower_to_native(&stab_fixture_circuit())),
        (
            "vigo_prep",
            lower_to_native(&prep_minus_logical(PrepVariant::Vigo).circuit),
        ),
    ];
    for (file, circuit) in regen {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("fixtures")
            .join(format!("{file}.qasm"));
        let shipped = std::fs::read_to_string(path).unwrap();
        assert_eq!(shipped, flagqec::qasm::serialize(&circuit), "{file} drifted");
    }
}
