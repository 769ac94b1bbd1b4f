//! Regenerates the shipped fixture circuit files from the programmatic
//! constructions. Run from the crate root after changing a construction.

use flagqec::code513::{prep_minus_logical, PrepVariant};
use flagqec::qasm::serialize;
use flagqec::transpile::{lower_to_native, stab_fixture_circuit};

fn main() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let items: Vec<(&str, flagqec::Circuit)> = vec![
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
    for (name, circuit) in items {
        let path = root.join(format!("{name}.qasm"));
        std::fs::write(&path, serialize(&circuit)).unwrap();
        println!("wrote {}", path.display());
    }
}
