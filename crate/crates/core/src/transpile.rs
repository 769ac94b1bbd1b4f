//! Deterministic routing onto device coupling graphs with SWAP insertion,
//! layout scoring, dense equivalence verification, and the shipped
//! manually-optimised circuit fixtures.

use crate::circuit::{circuit_unitary, Circuit, Gate, Instruction, MeasureBasis};
use crate::code513::{self, PrepVariant};
use crate::device::DeviceModel;
use crate::flag;
use crate::quantum::embed_unitary;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RouteError {
    #[error("layout is not injective (physical qubit {0} used twice)")]
    LayoutNotInjective(usize),
    #[error("layout entry {0} is outside the device")]
    LayoutOutOfRange(usize),
    #[error("layout has {got} entries but the circuit uses {expected} qubits")]
    LayoutWrongLength { got: usize, expected: usize },
    #[error("no path between physical qubits {0} and {1}")]
    Disconnected(usize, usize),
    #[error("dense equivalence limited to 8 active qubits, got {0}")]
    TooManyActiveQubits(usize),
    #[error(transparent)]
    Circuit(#[from] crate::circuit::CircuitError),
}

/// Undirected coupling graph over device qubit indices.
#[derive(Debug, Clone)]
pub struct CouplingGraph {
    pub num_qubits: usize,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn new(num_qubits: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in edges {
            if !adjacency[a].contains(&b) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for adj in adjacency.iter_mut() {
            adj.sort_unstable();
        }
        CouplingGraph {
            num_qubits,
            adjacency,
        }
    }

    pub fn from_device(device: &DeviceModel) -> Self {
        CouplingGraph::new(device.num_qubits, &device.edges)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    /// Lexicographically smallest shortest path from `a` to `b`.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if a == b {
            return Some(vec![a]);
        }
        // BFS distances towards b, then greedy descent choosing the lowest
        // neighbour index at each step
        let mut dist = vec![usize::MAX; self.num_qubits];
        dist[b] = 0;
        let mut queue = std::collections::VecDeque::from([b]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[a] == usize::MAX {
            return None;
        }
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            let next = self.adjacency[cur]
                .iter()
                .copied()
                .filter(|&w| dist[w] + 1 == dist[cur])
                .min()
                .expect("BFS distance structure");
            path.push(next);
            cur = next;
        }
        Some(path)
    }
}

/// A circuit over physical qubits with its layout bookkeeping.
#[derive(Debug, Clone)]
pub struct RoutedCircuit {
    pub circuit: Circuit,
    /// logical -> physical at circuit start.
    pub initial_layout: Vec<usize>,
    /// logical -> physical after all inserted SWAPs.
    pub final_permutation: Vec<usize>,
    pub swap_count: usize,
}

/// Greedy shortest-path SWAP-insertion router. Deterministic: ties break by
/// lower physical index, then the lexicographically smallest path; the
/// content of the lower-indexed endpoint walks toward the other. SWAPs are
/// emitted decomposed into 3 cx.
pub fn route(
    c: &Circuit,
    graph: &CouplingGraph,
    layout: &[usize],
) -> Result<RoutedCircuit, RouteError> {
    if layout.len() != c.num_qubits {
        return Err(RouteError::LayoutWrongLength {
            got: layout.len(),
            expected: c.num_qubits,
        });
    }
    for (i, &p) in layout.iter().enumerate() {
        if p >= graph.num_qubits {
            return Err(RouteError::LayoutOutOfRange(p));
        }
        if layout[..i].contains(&p) {
            return Err(RouteError::LayoutNotInjective(p));
        }
    }
    let mut pos: Vec<usize> = layout.to_vec(); // logical -> physical
    let mut out = Circuit::new(graph.num_qubits, c.num_clbits);
    out.name = if c.name.is_empty() {
        "routed".to_string()
    } else {
        format!("{}-routed", c.name)
    };
    out.initial_layout = Some(layout.to_vec());
    let mut swap_count = 0usize;

    let emit_swap = |out: &mut Circuit, pos: &mut Vec<usize>, u: usize, v: usize| {
        out.cx(u, v);
        out.cx(v, u);
        out.cx(u, v);
        for p in pos.iter_mut() {
            if *p == u {
                *p = v;
            } else if *p == v {
                *p = u;
            }
        }
    };

    for instr in &c.instructions {
        match instr {
            Instruction::Gate { gate, qubits } if gate.arity() == 2 => {
                let (la, lb) = (qubits[0], qubits[1]);
                let (mut pa, mut pb) = (pos[la], pos[lb]);
                if !graph.has_edge(pa, pb) {
                    let (from, to) = (pa.min(pb), pa.max(pb));
                    let path = graph
                        .shortest_path(from, to)
                        .ok_or(RouteError::Disconnected(from, to))?;
                    for w in path.windows(2).take(path.len() - 2) {
                        emit_swap(&mut out, &mut pos, w[0], w[1]);
                        swap_count += 1;
                    }
                    pa = pos[la];
                    pb = pos[lb];
                    debug_assert!(graph.has_edge(pa, pb));
                }
                out.gate(gate.clone(), &[pa, pb]);
            }
            Instruction::Gate { gate, qubits } => {
                out.gate(gate.clone(), &[pos[qubits[0]]]);
            }
            Instruction::Barrier { qubits } => {
                let mapped: Vec<usize> = qubits.iter().map(|&q| pos[q]).collect();
                out.barrier(&mapped);
            }
            Instruction::Measure {
                qubit,
                clbit,
                basis,
            } => {
                out.measure_in(pos[*qubit], *clbit, *basis);
            }
            Instruction::Reset { qubit } => {
                out.reset(pos[*qubit]);
            }
            Instruction::Conditional {
                clbit,
                gate,
                qubits,
            } => {
                // single-qubit conditionals only pass through unrouted
                let mapped: Vec<usize> = qubits.iter().map(|&q| pos[q]).collect();
                out.conditional(*clbit, gate.clone(), &mapped);
            }
        }
    }
    Ok(RoutedCircuit {
        circuit: out,
        initial_layout: layout.to_vec(),
        final_permutation: pos,
        swap_count,
    })
}

/// True when the routed circuit's unitary equals the original's composed
/// with the routed circuit's final permutation, up to global phase.
pub fn verify_equivalence(original: &Circuit, routed: &RoutedCircuit) -> Result<bool, RouteError> {
    // active set: wires mentioned by instructions or by the layout maps
    let mut active: Vec<usize> = Vec::new();
    let mut touch = |q: usize| {
        if !active.contains(&q) {
            active.push(q);
        }
    };
    for instr in &routed.circuit.instructions {
        for q in instr.qubits() {
            touch(q);
        }
    }
    for &q in routed
        .initial_layout
        .iter()
        .chain(routed.final_permutation.iter())
    {
        touch(q);
    }
    active.sort_unstable();
    let m = active.len();
    if m > 8 {
        return Err(RouteError::TooManyActiveQubits(m));
    }
    let local = |q: usize| active.binary_search(&q).expect("active wire");

    // compact the routed circuit onto the active wires
    let mut full_to_local = vec![usize::MAX; routed.circuit.num_qubits];
    for (i, &q) in active.iter().enumerate() {
        full_to_local[q] = i;
    }
    let compact = routed.circuit.mapped_qubits(&full_to_local, m);
    let u_routed = circuit_unitary(&compact)?;

    let u_orig = circuit_unitary(original)?;
    let targets: Vec<usize> = routed
        .initial_layout
        .iter()
        .map(|&p| local(p))
        .collect();
    let u_expected = embed_unitary(&u_orig, &targets, m);

    // M = U_routed * U_expected^dagger must be a phase times a wire permutation
    let m_mat = &u_routed * u_expected.adjoint();
    let dim = 1usize << m;
    // extract the wire permutation from single-excitation images
    let mut sigma = vec![usize::MAX; m];
    for w in 0..m {
        let col = 1usize << (m - 1 - w);
        let mut best = (0usize, 0.0f64);
        for r in 0..dim {
            let mag = m_mat[(r, col)].norm();
            if mag > best.1 {
                best = (r, mag);
            }
        }
        if (best.1 - 1.0).abs() > 1e-9 || best.0.count_ones() != 1 {
            return Ok(false);
        }
        sigma[w] = m - 1 - best.0.trailing_zeros() as usize;
    }
    // permutation matrix of sigma
    let mut perm = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut j = 0usize;
        for w in 0..m {
            if (i >> (m - 1 - w)) & 1 == 1 {
                j |= 1 << (m - 1 - sigma[w]);
            }
        }
        perm[(j, i)] = Complex64::new(1.0, 0.0);
    }
    // global-phase alignment on the largest entry
    let mut phase = Complex64::new(0.0, 0.0);
    let mut best = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let v = m_mat[(i, j)];
            if v.norm() > best {
                best = v.norm();
                phase = v / v.norm();
            }
        }
    }
    let diff = (&m_mat - perm * phase)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if diff > 1e-9 {
        return Ok(false);
    }
    // permutation must agree with the recorded final layout
    for (l, (&init, &fin)) in routed
        .initial_layout
        .iter()
        .zip(&routed.final_permutation)
        .enumerate()
    {
        if sigma[local(init)] != local(fin) {
            let _ = l;
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum over routed gates of -ln(1 - gate error rate); lower is better.
pub fn layout_score(
    c: &Circuit,
    device: &DeviceModel,
    layout: &[usize],
) -> Result<f64, RouteError> {
    let graph = CouplingGraph::from_device(device);
    let routed = route(c, &graph, layout)?;
    let mut score = 0.0;
    for instr in &routed.circuit.instructions {
        if let Instruction::Gate { gate, qubits } | Instruction::Conditional { gate, qubits, .. } =
            instr
        {
            let err = device.gate_error(gate.name(), qubits).unwrap_or(0.0);
            score += -(1.0 - err).ln();
        }
    }
    Ok(score)
}

/// Rewrite cz into h-conjugated cx, swap into 3 cx, and lower X/Y-basis
/// measurements to their rotation gates plus a Z measurement. The unitary
/// content is unchanged; the result uses hardware-native instructions only.
pub fn lower_to_native(c: &Circuit) -> Circuit {
    let mut out = Circuit::new(c.num_qubits, c.num_clbits);
    out.name = c.name.clone();
    out.initial_layout = c.initial_layout.clone();
    for instr in &c.instructions {
        match instr {
            Instruction::Gate { gate, qubits } => match gate {
                Gate::Cz => {
                    out.h(qubits[1]);
                    out.cx(qubits[0], qubits[1]);
                    out.h(qubits[1]);
                }
                Gate::Swap => {
                    out.cx(qubits[0], qubits[1]);
                    out.cx(qubits[1], qubits[0]);
                    out.cx(qubits[0], qubits[1]);
                }
                g => {
                    out.gate(g.clone(), qubits);
                }
            },
            Instruction::Measure {
                qubit,
                clbit,
                basis,
            } => {
                match basis {
                    MeasureBasis::Z => {}
                    MeasureBasis::X => {
                        out.h(*qubit);
                    }
                    MeasureBasis::Y => {
                        out.sdg(*qubit);
                        out.h(*qubit);
                    }
                }
                out.measure(*qubit, *clbit);
            }
            other => {
                out.try_push(other.clone()).expect("lowering preserves validity");
            }
        }
    }
    out
}

/// A shipped fixture: the routed circuit plus its ideal-comparator circuit.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub routed: RoutedCircuit,
    /// Ideal circuit the fixture must be unitarily equivalent to.
    pub ideal: Circuit,
    pub device: &'static str,
    pub description: &'static str,
}

#[derive(Debug, Deserialize)]
struct Sidecar {
    name: String,
    device: String,
    wire_to_physical: Vec<usize>,
    initial_layout: Vec<usize>,
    final_permutation: Vec<usize>,
    swap_count: usize,
    #[allow(dead_code)]
    description: String,
}

const FIXTURE_FILES: [(&str, &str, &str, &str); 4] = [
    (
        "melbourne-prep-depth4",
        include_str!("../fixtures/melbourne_prep_depth4.qasm"),
        include_str!("../fixtures/melbourne_prep_depth4.layout.json"),
        "logical |-> preparation, CNOT depth 4 (layout A)",
    ),
    (
        "melbourne-prep-depth6",
        include_str!("../fixtures/melbourne_prep_depth6.qasm"),
        include_str!("../fixtures/melbourne_prep_depth6.layout.json"),
        "logical |-> preparation, CNOT depth 6 (layout B)",
    ),
    (
        "melbourne-stab-ZXIXZ",
        include_str!("../fixtures/melbourne_stab_zxixz.qasm"),
        include_str!("../fixtures/melbourne_stab_zxixz.layout.json"),
        "prep plus flagged ZXIXZ extraction, CNOT depth 10, 18 cx (layout C)",
    ),
    (
        "vigo-prep",
        include_str!("../fixtures/vigo_prep.qasm"),
        include_str!("../fixtures/vigo_prep.layout.json"),
        "logical |-> preparation on the 5-qubit T topology",
    ),
];

/// Programmatic construction of the stabilizer fixture in circuit-wire form:
/// the depth-4 prep block followed by the flagged extraction of the logical
/// ZXIXZ stabilizer routed with two data swaps.
pub fn stab_fixture_circuit() -> Circuit {
    let prep = code513::prep_minus_logical(PrepVariant::MelbourneDepth4);
    let mut c = Circuit::new(7, 2).with_name("melbourne-stab-ZXIXZ");
    for instr in &prep.circuit.instructions {
        c.try_push(instr.clone()).unwrap();
    }
    // after the prep block: c0@w1, c1@w0, c2@w2, c3@w3, c4@w4.
    // ZXIXZ letters: c0:Z c1:X c2:I c3:X c4:Z; coupling order c1,c4,c0,c3
    // with flag windows F1 in (1st,2nd) and F2 in (3rd,4th).
    c.h(6); // flag |+>
    c.h(0);
    c.cx(0, 5);
    c.h(0); // c1 coupling (X) from wire 0
    c.cx(6, 5); // F1
    c.cx(4, 5); // c4 coupling (Z)
    c.cx(0, 1);
    c.cx(1, 0);
    c.cx(0, 1); // swap(0,1): c0 to wire 0
    c.cx(0, 5); // c0 coupling (Z)
    c.cx(6, 5); // F2
    c.cx(3, 4);
    c.cx(4, 3);
    c.cx(3, 4); // swap(3,4): c3 to wire 4
    c.h(4);
    c.cx(4, 5);
    c.h(4); // c3 coupling (X)
    c.measure(5, 0);
    c.measure_in(6, 1, MeasureBasis::X);
    c
}

/// Ideal comparator for the stabilizer fixture: ideal prep followed by the
/// canonical flagged extraction of ZXIXZ, in lowered (hardware-native) form.
pub fn stab_ideal_circuit() -> Circuit {
    let prep = code513::prep_minus_logical(PrepVariant::IdealDepth3);
    let code = code513::five_qubit_code();
    let ec = flag::flagged_syndrome_circuit(code, 3, [0, 1, 2, 3, 4], 5, 6).unwrap();
    let mut c = Circuit::new(7, 2).with_name("ideal-prep-plus-flagged-ZXIXZ");
    for instr in &prep.circuit.instructions {
        c.try_push(instr.clone()).unwrap();
    }
    for instr in &ec.circuit.instructions {
        c.try_push(instr.clone()).unwrap();
    }
    lower_to_native(&c)
}

/// The shipped fixtures, keyed by name.
pub fn fixtures() -> BTreeMap<&'static str, Fixture> {
    let mut out = BTreeMap::new();
    for (name, qasm, sidecar_json, description) in FIXTURE_FILES {
        let sidecar: Sidecar =
            serde_json::from_str(sidecar_json).expect("fixture sidecar parses");
        assert_eq!(sidecar.name, name);
        let wire_circuit = crate::qasm::parse(qasm).expect("fixture qasm parses");
        let device_width = if sidecar.device == "melbourne" { 15 } else { 5 };
        let mut physical = wire_circuit.mapped_qubits(&sidecar.wire_to_physical, device_width);
        physical.name = name.to_string();
        physical.initial_layout = Some(sidecar.initial_layout.clone());
        let ideal = match name {
            "melbourne-stab-ZXIXZ" => stab_ideal_circuit(),
            _ => lower_to_native(
                &code513::prep_minus_logical(PrepVariant::IdealDepth3).circuit,
            ),
        };
        let device = if sidecar.device == "melbourne" {
            "melbourne"
        } else {
            "vigo"
        };
        out.insert(
            name,
            Fixture {
                routed: RoutedCircuit {
                    circuit: physical,
                    initial_layout: sidecar.initial_layout,
                    final_permutation: sidecar.final_permutation,
                    swap_count: sidecar.swap_count,
                },
                ideal,
                device,
                description,
            },
        );
    }
    out
}

/// Built-in device file contents.
pub fn builtin_device(name: &str) -> Option<&'static str> {
    match name {
        "melbourne" => Some(include_str!("../devices/melbourne.json")),
        "vigo" => Some(include_str!("../devices/vigo.json")),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{cnot_depth, gate_counts};

    fn melbourne() -> DeviceModel {
        DeviceModel::from_json_str(builtin_device("melbourne").unwrap()).unwrap()
    }

    #[test]
    fn routes_compatible_circuit_unchanged() {
        let g = CouplingGraph::from_device(&melbourne());
        let mut c = Circuit::new(2, 0);
        c.h(0).cx(0, 1);
        let r = route(&c, &g, &[0, 1]).unwrap();
        assert_eq!(r.swap_count, 0);
        assert_eq!(gate_counts(&r.circuit).get("cx"), Some(&1));
        assert!(verify_equivalence(&c, &r).unwrap());
    }

    #[test]
    fn distance_two_pair_costs_one_swap() {
        let g = CouplingGraph::from_device(&melbourne());
        let mut c = Circuit::new(2, 0);
        c.cx(0, 1);
        // physical 0 and 2 are at distance 2 on the ladder
        let r = route(&c, &g, &[0, 2]).unwrap();
        assert_eq!(r.swap_count, 1);
        assert_eq!(gate_counts(&r.circuit).get("cx"), Some(&4));
        assert!(verify_equivalence(&c, &r).unwrap());
    }

    #[test]
    fn router_is_deterministic() {
        let g = CouplingGraph::from_device(&melbourne());
        let prep = code513::prep_minus_logical(PrepVariant::IdealDepth3).circuit;
        let layout = [11, 12, 13, 1, 2];
        let a = crate::qasm::serialize(&route(&prep, &g, &layout).unwrap().circuit);
        let b = crate::qasm::serialize(&route(&prep, &g, &layout).unwrap().circuit);
        let c = crate::qasm::serialize(&route(&prep, &g, &layout).unwrap().circuit);
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn ideal_prep_routed_on_layout_b_has_depth_at_most_six() {
        let g = CouplingGraph::from_device(&melbourne());
        let prep = code513::prep_minus_logical(PrepVariant::IdealDepth3).circuit;
        let r = route(&prep, &g, &[11, 12, 13, 1, 2]).unwrap();
        assert!(cnot_depth(&r.circuit) <= 6, "depth {}", cnot_depth(&r.circuit));
        assert!(verify_equivalence(&prep, &r).unwrap());
    }

    #[test]
    fn equivalence_rejects_mutations() {
        let g = CouplingGraph::from_device(&melbourne());
        let mut c = Circuit::new(2, 0);
        c.h(0).cx(0, 1).cx(0, 1).cx(0, 1);
        let mut r = route(&c, &g, &[0, 1]).unwrap();
        assert!(verify_equivalence(&c, &r).unwrap());
        // delete one cx
        let idx = r
            .circuit
            .instructions
            .iter()
            .position(|i| matches!(i, Instruction::Gate { gate, .. } if gate.name() == "cx"))
            .unwrap();
        r.circuit.instructions.remove(idx);
        assert!(!verify_equivalence(&c, &r).unwrap());
    }

    #[test]
    fn layout_score_prefers_low_error_edges() {
        let dev = melbourne();
        let mut c = Circuit::new(2, 0);
        c.cx(0, 1);
        // (1,13) is a flagged high-error edge; (1,2) is nominal
        let bad = layout_score(&c, &dev, &[1, 13]).unwrap();
        let good = layout_score(&c, &dev, &[1, 2]).unwrap();
        assert!(good < bad);
        // zero-error circuit scores zero
        let mut idle = Circuit::new(1, 0);
        idle.gate(Gate::U1(0.3), &[0]);
        assert_eq!(layout_score(&idle, &dev, &[0]).unwrap(), 0.0);
    }

    #[test]
    fn layout_score_additive_over_concatenation() {
        let dev = melbourne();
        let mut a = Circuit::new(2, 0);
        a.h(0).cx(0, 1);
        let mut b = Circuit::new(2, 0);
        b.cx(0, 1).h(1);
        let mut ab = Circuit::new(2, 0);
        ab.h(0).cx(0, 1).cx(0, 1).h(1);
        let sa = layout_score(&a, &dev, &[0, 1]).unwrap();
        let sb = layout_score(&b, &dev, &[0, 1]).unwrap();
        let sab = layout_score(&ab, &dev, &[0, 1]).unwrap();
        assert!((sa + sb - sab).abs() < 1e-12);
    }
}
