//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values. Run with `cargo test --test acceptance -- --nocapture`.

use flagqec::circuit::{
    cnot_depth, estimate_runtime, gate_counts, simulate_density, simulate_density_with_states,
    Circuit, Gate, Instruction,
};
use flagqec::code513::{
    self, decode, five_qubit_code, logical_minus_state, prep_minus_logical, syndrome_of,
    verify_codestate, PrepVariant, Syndrome,
};
use flagqec::device::DeviceModel;
use flagqec::experiment::{run_experiment, ExperimentConfig, ExperimentKind};
use flagqec::flag::{
    self, enumerate_single_faults, flagged_syndrome_circuit, nonft_syndrome_circuit,
    ProtocolOptions,
};
use flagqec::noise::NoiseModel;
use flagqec::quantum::{
    embed_unitary, fidelity_to_pure, trace_distance, PauliLetter, PauliString, StateVector,
};
use flagqec::tomography::{collect, reconstruct, tomo_settings, CollectMode, Condition};
use flagqec::transpile::{
    builtin_device, fixtures, route, verify_equivalence, CouplingGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn melbourne() -> DeviceModel {
    DeviceModel::from_json_str(builtin_device("melbourne").unwrap()).unwrap()
}

/// Wire-permutation unitary sending the state at wire `w` to `perm[w]`.
fn permutation_unitary(perm: &[usize]) -> nalgebra::DMatrix<num_complex::Complex64> {
    let n = perm.len();
    let dim = 1usize << n;
    let mut mat = nalgebra::DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut j = 0usize;
        for w in 0..n {
            if (i >> (n - 1 - w)) & 1 == 1 {
                j |= 1 << (n - 1 - perm[w]);
            }
        }
        mat[(j, i)] = num_complex::Complex64::new(1.0, 0.0);
    }
    mat
}

#[test]
fn c01_code_state_exactness() {
    let target = logical_minus_state();
    for variant in [
        PrepVariant::IdealDepth3,
        PrepVariant::MelbourneDepth4,
        PrepVariant::MelbourneDepth6,
        PrepVariant::Vigo,
    ] {
        let prep = prep_minus_logical(variant);
        let out = simulate_density(&prep.circuit, None)
            .unwrap()
            .final_density
            .unwrap();
        // un-permute: move logical qubit l from its output wire back to wire l
        let mut wire_to_logical = vec![0usize; 5];
        for (l, &w) in prep.output_positions.iter().enumerate() {
            wire_to_logical[w] = l;
        }
        let p = permutation_unitary(&wire_to_logical);
        let unpermuted = out.apply_unitary(&p, &[0, 1, 2, 3, 4]).unwrap();
        let f = fidelity_to_pure(&target, &unpermuted).unwrap();
        assert!(f >= 1.0 - 1e-9, "{variant:?}: fidelity {f}");
        let exps = verify_codestate(&unpermuted).unwrap();
        for (i, g) in exps.generators.iter().enumerate() {
            assert!((g - 1.0).abs() < 1e-9, "{variant:?} generator {i}: {g}");
        }
        assert!(
            (exps.logical_x + 1.0).abs() < 1e-9,
            "{variant:?} logical X: {}",
            exps.logical_x
        );
        println!("PASS criterion 1 ({variant:?}): fidelity = {f:.12}, generators +1, <X_L> = -1");
    }
}

#[test]
fn c02_perfect_code_decoder() {
    let mut seen = std::collections::BTreeSet::new();
    for q in 0..5 {
        for l in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z] {
            let e = PauliString::single(5, q, l);
            let s = syndrome_of(&e).unwrap();
            assert!(!s.is_trivial(), "{e} has trivial syndrome");
            assert!(seen.insert(s.as_index()), "{e}: syndrome {s} repeated");
            assert_eq!(decode(s), &e, "decode round trip failed for {e}");
        }
    }
    assert_eq!(seen.len(), 15);
    assert!(decode(Syndrome([0, 0, 0, 0])).is_identity());
    println!("PASS criterion 2: 15 distinct nonzero syndromes; decode o syndrome_of = id on all 16 weight-<=1 errors");
}

#[test]
fn c03_flag_fault_tolerance() {
    let code = five_qubit_code();
    let input = logical_minus_state();
    // flagged ZXIXZ gadget: no dangerous faults
    let flagged = flagged_syndrome_circuit(code, 3, [0, 1, 2, 3, 4], 5, 6).unwrap();
    let report = enumerate_single_faults(&flagged, &input).unwrap();
    assert!(
        report.dangerous.is_empty(),
        "dangerous faults: {:?}",
        report.dangerous
    );
    let triples = report.records.len();
    // X faults on the syndrome qubit never spread
    let x_faults: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.location.qubit == 5 && r.location.pauli == PauliLetter::X)
        .collect();
    assert!(!x_faults.is_empty());
    for rec in &x_faults {
        assert_eq!(
            rec.residual_weight, 0,
            "X fault at {} spread to the data",
            rec.location.instruction_index
        );
    }
    // the non-FT gadget does have dangerous faults
    let nonft = nonft_syndrome_circuit(code, 3, [0, 1, 2, 3, 4], 5).unwrap();
    let nonft_report = enumerate_single_faults(&nonft, &input).unwrap();
    assert!(!nonft_report.dangerous.is_empty());
    println!(
        "PASS criterion 3: {triples} fault triples enumerated, 0 dangerous in flagged gadget; \
         {} syndrome-qubit X faults all weight-0; non-FT gadget has {} dangerous faults",
        x_faults.len(),
        nonft_report.dangerous.len()
    );
}

#[test]
fn c04_tomography_exactness() {
    // exact mode: conditioned reconstruction of prep + flagged ZXIXZ
    let code = five_qubit_code();
    let prep = prep_minus_logical(PrepVariant::IdealDepth3);
    let ec = flagged_syndrome_circuit(code, 3, [0, 1, 2, 3, 4], 5, 6).unwrap();
    let mut circuit = Circuit::new(7, 2);
    for instr in prep
        .circuit
        .instructions
        .iter()
        .chain(&ec.circuit.instructions)
    {
        circuit.try_push(instr.clone()).unwrap();
    }
    let condition = Condition {
        qubits: vec![5, 6],
        required: vec![0, 0],
    };
    let ds = collect(
        &circuit,
        &[0, 1, 2, 3, 4],
        &condition,
        &tomo_settings(5),
        CollectMode::Exact,
        None,
        0,
    )
    .unwrap();
    let rho = reconstruct(&ds).unwrap();
    // reference: the (0,0)-conditioned data state from exact simulation
    let branches = simulate_density_with_states(&circuit, None).unwrap();
    let reference = branches
        .branches
        .unwrap()
        .into_iter()
        .find(|b| b.creg == vec![0, 0])
        .expect("00 branch exists")
        .density
        .partial_trace(&[0, 1, 2, 3, 4])
        .unwrap();
    let td_exact = trace_distance(&rho, &reference).unwrap();
    assert!(td_exact < 1e-6, "exact-mode trace distance {td_exact}");

    // finite shots: median trace distance over 10 seeds at 8192 shots/setting
    let prep5 = prep_minus_logical(PrepVariant::IdealDepth3);
    let truth = simulate_density(&prep5.circuit, None)
        .unwrap()
        .final_density
        .unwrap();
    let mut tds = Vec::new();
    for seed in 0..10u64 {
        let ds = collect(
            &prep5.circuit,
            &[0, 1, 2, 3, 4],
            &Condition::none(),
            &tomo_settings(5),
            CollectMode::Shots {
                shots_per_setting: 8192,
            },
            None,
            seed,
        )
        .unwrap();
        let rho = reconstruct(&ds).unwrap();
        tds.push(trace_distance(&rho, &truth).unwrap());
    }
    tds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (tds[4] + tds[5]);
    assert!(median <= 0.05, "median finite-shot trace distance {median}");
    println!(
        "PASS criterion 4: exact-mode conditioned TD = {td_exact:.2e}; \
         median TD over 10 seeds at 8192 shots/setting = {median:.4}"
    );
}

#[test]
fn c05_mitigation_restores_fidelity() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Prep);
    cfg.exact = true;
    cfg.replicas = 1;
    cfg.mitigation = true;
    cfg.noise.enabled = true;
    cfg.noise.gate_errors = false;
    cfg.noise.idle_decoherence = false;
    cfg.noise.readout_errors = true;
    let report = run_experiment(&cfg).unwrap();
    let unmitigated = report.fidelity_unmitigated.unwrap().mean;
    let mitigated = report.fidelity.unwrap().mean;
    assert!(
        (unmitigated - 0.71).abs() <= 0.03,
        "unmitigated fidelity {unmitigated} not within 0.71 +- 0.03"
    );
    assert!(mitigated >= 0.97, "mitigated fidelity {mitigated}");
    println!(
        "PASS criterion 5: readout-only fidelity {unmitigated:.4} -> mitigated {mitigated:.4}"
    );
}

#[test]
fn c06_fit_round_trip_and_rate_arithmetic() {
    let rho_ideal = logical_minus_state().to_density();
    for p_star in [0.1, 0.3, 0.5, 0.64258, 0.9, 1.0] {
        let damaged = flagqec::channel_fit::eq1_channel(&rho_ideal, p_star, (0, 4)).unwrap();
        let fit = flagqec::channel_fit::fit_p(&damaged, &rho_ideal, (0, 4)).unwrap();
        assert!(
            (fit.p_opt - p_star).abs() < 1e-3,
            "planted {p_star}, recovered {}",
            fit.p_opt
        );
    }
    let rate = flagqec::channel_fit::per_pauli_error_rate(0.64258);
    assert!((rate - 0.11914).abs() < 5e-4, "per-Pauli rate {rate}");
    println!(
        "PASS criterion 6: fit recovers p* in {{0.1,0.3,0.5,0.64258,0.9,1.0}} within 1e-3; \
         per-Pauli rate(0.64258) = {rate:.5}"
    );
}

#[test]
fn c07_transpile_fixtures_and_router() {
    let fx = fixtures();
    let stab = &fx["melbourne-stab-ZXIXZ"];
    assert_eq!(cnot_depth(&stab.routed.circuit), 10);
    assert_eq!(gate_counts(&stab.routed.circuit).get("cx"), Some(&18));
    assert_eq!(cnot_depth(&fx["melbourne-prep-depth4"].routed.circuit), 4);
    assert_eq!(
        fx["vigo-prep"].routed.final_permutation,
        vec![2, 0, 1, 4, 3]
    );
    for (name, fixture) in &fx {
        assert!(
            verify_equivalence(&fixture.ideal, &fixture.routed).unwrap(),
            "{name} equivalence"
        );
    }

    // router determinism: three byte-identical runs
    let dev = melbourne();
    let graph = CouplingGraph::from_device(&dev);
    let prep = prep_minus_logical(PrepVariant::IdealDepth3).circuit;
    let outs: Vec<String> = (0..3)
        .map(|_| {
            flagqec::qasm::serialize(&route(&prep, &graph, &[11, 12, 13, 1, 2]).unwrap().circuit)
        })
        .collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]));

    // 100 random circuits routed onto Melbourne respect the coupling map
    // and stay unitarily equivalent
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    let mut checked = 0;
    while checked < 100 {
        let circuit = random_unitary_circuit(&mut rng, 5, 12);
        let layout = random_connected_layout(&mut rng, &graph, 5);
        let routed = route(&circuit, &graph, &layout).unwrap();
        for instr in &routed.circuit.instructions {
            if let Instruction::Gate { gate, qubits } = instr {
                if gate.arity() == 2 {
                    assert!(graph.has_edge(qubits[0], qubits[1]), "gate off-edge");
                }
            }
        }
        match verify_equivalence(&circuit, &routed) {
            Ok(ok) => {
                assert!(ok, "random circuit #{checked} failed equivalence");
                checked += 1;
            }
            // layouts whose routing spreads beyond 8 active wires cannot be
            // densely verified; draw another sample
            Err(flagqec::transpile::RouteError::TooManyActiveQubits(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
    println!("PASS criterion 7: fixture metrics (depth 10 / 18 cx / depth 4 / vigo permutation), equivalence on all fixtures, deterministic router, 100 random routings verified");
}

fn random_unitary_circuit(rng: &mut ChaCha8Rng, num_qubits: usize, gates: usize) -> Circuit {
    let mut c = Circuit::new(num_qubits, 0);
    for _ in 0..gates {
        match rng.gen_range(0..6) {
            0 => {
                c.h(rng.gen_range(0..num_qubits));
            }
            1 => {
                c.gate(Gate::U3(rng.gen_range(0.0..3.0), rng.gen_range(-1.5..1.5), 0.3), &[rng.gen_range(0..num_qubits)]);
            }
            2 => {
                c.s(rng.gen_range(0..num_qubits));
            }
            _ => {
                let a = rng.gen_range(0..num_qubits);
                let mut b = rng.gen_range(0..num_qubits);
                while b == a {
                    b = rng.gen_range(0..num_qubits);
                }
                if rng.gen_bool(0.5) {
                    c.cx(a, b);
                } else {
                    c.cz(a, b);
                }
            }
        }
    }
    c
}

fn random_connected_layout(
    rng: &mut ChaCha8Rng,
    graph: &CouplingGraph,
    size: usize,
) -> Vec<usize> {
    // random connected subset by growth, then shuffled assignment
    loop {
        let start = rng.gen_range(0..graph.num_qubits);
        let mut subset = vec![start];
        while subset.len() < size {
            let anchor = subset[rng.gen_range(0..subset.len())];
            let nbrs: Vec<usize> = (0..graph.num_qubits)
                .filter(|&q| graph.has_edge(anchor, q) && !subset.contains(&q))
                .collect();
            if nbrs.is_empty() {
                break;
            }
            subset.push(nbrs[rng.gen_range(0..nbrs.len())]);
        }
        if subset.len() == size {
            // Fisher-Yates
            for i in (1..subset.len()).rev() {
                let j = rng.gen_range(0..=i);
                subset.swap(i, j);
            }
            return subset;
        }
    }
}

#[test]
fn c08_runtime_estimator_ordering() {
    let dev = melbourne();
    let fx = fixtures();
    let prep = &fx["melbourne-prep-depth4"].routed.circuit;
    let stab = &fx["melbourne-stab-ZXIXZ"].routed.circuit;
    let r_prep = estimate_runtime(prep, &dev).unwrap();
    let r_stab = estimate_runtime(stab, &dev).unwrap();
    // prep plus 106 idle cycles on the first data wire (physical qubit 1)
    let mut idles = prep.clone();
    let wire = fx["melbourne-prep-depth4"].routed.initial_layout[0];
    for _ in 0..106 {
        idles.id(wire);
        idles.barrier(&[wire]);
    }
    let r_idle = estimate_runtime(&idles, &dev).unwrap();
    assert!(
        r_stab > r_idle && r_idle > r_prep,
        "ordering violated: stab {r_stab}, idles {r_idle}, prep {r_prep}"
    );
    let gap = (r_stab - r_idle).abs() / r_stab;
    assert!(gap <= 0.15, "idle runtime {r_idle} not within 15% of stabilizer {r_stab}");
    let ratio = r_stab / r_prep;
    assert!(
        (2.0..=3.0).contains(&ratio),
        "stabilizer:prep ratio {ratio}"
    );
    println!(
        "PASS criterion 8: runtimes prep {r_prep:.3} < idles {r_idle:.3} < stab {r_stab:.3} us; \
         gap {:.1}%, ratio {ratio:.3}",
        gap * 100.0
    );
}

#[test]
fn c09_protocol_sanity() {
    // noiseless: 100% acceptance, unit fidelity
    let clean = flag::run_hardware_protocol(None, 200, 1, &ProtocolOptions::hardware()).unwrap();
    assert!((clean.accepted_fraction - 1.0).abs() < 1e-12);
    assert!((clean.logical_fidelity - 1.0).abs() < 1e-9);

    // depolarizing cx noise: post-selected fidelity beats unconditioned in
    // at least 18 of 20 seeds
    let noise = NoiseModel::new().with_gate_depolarizing("cx", 0.01);
    let mut wins = 0;
    for seed in 0..20u64 {
        let r =
            flag::run_hardware_protocol(Some(&noise), 400, seed, &ProtocolOptions::hardware())
                .unwrap();
        if r.conditioned_fidelity.unwrap() >= r.logical_fidelity {
            wins += 1;
        }
    }
    assert!(wins >= 18, "post-selection won only {wins}/20 seeds");
    println!(
        "PASS criterion 9: noiseless acceptance 100% with fidelity 1; \
         conditioned >= unconditioned in {wins}/20 seeds at p_cx = 0.01"
    );
}

#[test]
fn c10_qasm_round_trip() {
    // all fixtures
    for (name, fixture) in fixtures() {
        let text = flagqec::qasm::serialize(&fixture.routed.circuit);
        let re = flagqec::qasm::parse(&text).unwrap();
        assert!(
            re.approx_eq(&fixture.routed.circuit, 1e-11),
            "{name} drifted through serialization"
        );
    }
    // 200 random circuits over the full instruction surface
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..200 {
        let c = random_full_circuit(&mut rng);
        let text = flagqec::qasm::serialize(&c);
        let re = flagqec::qasm::parse(&text).unwrap();
        assert!(re.approx_eq(&c, 1e-11), "random circuit #{i} failed round trip");
    }
    println!("PASS criterion 10: parse o serialize = identity on all fixtures and 200 random circuits");
}

fn random_full_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=4);
    let mut c = Circuit::new(n, m);
    let mut written = vec![false; m];
    for _ in 0..rng.gen_range(3..25) {
        match rng.gen_range(0..8) {
            0 => {
                c.h(rng.gen_range(0..n));
            }
            1 => {
                c.gate(
                    Gate::U3(
                        rng.gen_range(-3.0..3.0),
                        rng.gen_range(-3.0..3.0),
                        rng.gen_range(-3.0..3.0),
                    ),
                    &[rng.gen_range(0..n)],
                );
            }
            2 => {
                c.gate(Gate::U1(rng.gen_range(-3.0..3.0)), &[rng.gen_range(0..n)]);
            }
            3 if n >= 2 => {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n);
                while b == a {
                    b = rng.gen_range(0..n);
                }
                c.cx(a, b);
            }
            4 => {
                let count = rng.gen_range(1..=n);
                let qubits: Vec<usize> = (0..count).collect();
                c.barrier(&qubits);
            }
            5 => {
                let q = rng.gen_range(0..n);
                let cl = rng.gen_range(0..m);
                c.measure(q, cl);
                written[cl] = true;
            }
            6 => {
                c.reset(rng.gen_range(0..n));
            }
            _ => {
                if let Some(cl) = (0..m).find(|&i| written[i]) {
                    c.conditional(cl, Gate::X, &[rng.gen_range(0..n)]);
                }
            }
        }
    }
    c
}
