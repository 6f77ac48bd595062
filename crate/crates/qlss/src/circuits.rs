//! Dense assembly of the block-encoding circuits.
//!
//! Wires are numbered from the most significant qubit. Every assembled
//! circuit places its ancillas first, followed by the system register, so a
//! block-encoding is the top-left block of the assembled unitary.

use serde::{Deserialize, Serialize};

use crate::error::{QlssError, Result};
use crate::instance::check_operator_norm;
use crate::ledger::QueryLedger;
use crate::linalg::{max_abs_diff, pad, pad_vec, re, unitary_with_first_column, CMat, CVec, Svd, C64, ONE, ZERO};

/// Largest register the dense assembler accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Control {
    /// Wire must hold the given bit.
    Qubit { wire: usize, value: bool },
    /// Register (MSB first) must hold one of the listed values.
    Register { wires: Vec<usize>, values: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Oracle {
    UA,
    UADag,
    UB,
    UBDag,
}

impl Oracle {
    fn adjoint(self) -> Self {
        match self {
            Oracle::UA => Oracle::UADag,
            Oracle::UADag => Oracle::UA,
            Oracle::UB => Oracle::UBDag,
            Oracle::UBDag => Oracle::UB,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Gate {
    pub label: String,
    pub targets: Vec<usize>,
    pub matrix: CMat,
    /// All clauses must hold for the gate to act.
    pub controls: Vec<Control>,
    pub oracle: Option<Oracle>,
}

impl Gate {
    pub fn new(label: impl Into<String>, targets: Vec<usize>, matrix: CMat) -> Self {
        assert_eq!(matrix.nrows(), 1 << targets.len(), "gate matrix does not match target count");
        Self { label: label.into(), targets, matrix, controls: vec![], oracle: None }
    }

    pub fn when(mut self, c: Control) -> Self {
        self.controls.push(c);
        self
    }

    pub fn oracle(mut self, o: Oracle) -> Self {
        self.oracle = Some(o);
        self
    }

    fn adjoint(&self) -> Self {
        Gate {
            label: format!("{}†", self.label),
            targets: self.targets.clone(),
            matrix: self.matrix.adjoint(),
            controls: self.controls.clone(),
            oracle: self.oracle.map(Oracle::adjoint),
        }
    }
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn hadamard() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[re(h), re(h), re(h), re(-h)])
}

/// Rotation acting as |0⟩ ↦ cos θ|0⟩ + sin θ|1⟩, |1⟩ ↦ −sin θ|0⟩ + cos θ|1⟩.
pub fn y_rotation(theta: f64) -> CMat {
    let (s, c) = theta.sin_cos();
    CMat::from_row_slice(2, 2, &[re(c), re(-s), re(s), re(c)])
}

#[derive(Debug, Clone)]
pub struct GateCircuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl GateCircuit {
    pub fn new(qubits: usize) -> Self {
        Self { qubits, gates: vec![] }
    }

    pub fn push(&mut self, g: Gate) {
        for w in g.targets.iter().copied().chain(g.controls.iter().flat_map(control_wires)) {
            assert!(w < self.qubits, "gate {} touches wire {w} of {}", g.label, self.qubits);
        }
        self.gates.push(g);
    }

    /// Appends `other` with its wire `i` mapped to `wires[i]`, adding `extra` controls.
    pub fn append(&mut self, other: &GateCircuit, wires: &[usize], extra: &[Control]) {
        assert_eq!(wires.len(), other.qubits);
        for g in &other.gates {
            let mut h = g.clone();
            h.targets = g.targets.iter().map(|&w| wires[w]).collect();
            h.controls = g.controls.iter().map(|c| remap(c, wires)).collect();
            h.controls.extend(extra.iter().cloned());
            self.push(h);
        }
    }

    pub fn adjoint(&self) -> Self {
        Self { qubits: self.qubits, gates: self.gates.iter().rev().map(Gate::adjoint).collect() }
    }

    /// Product of all gates as a dense unitary.
    pub fn unitary(&self) -> Result<CMat> {
        if self.qubits > MAX_QUBITS {
            return Err(QlssError::ShapeMismatch(format!(
                "{} qubits exceeds dense limit of {MAX_QUBITS}",
                self.qubits
            )));
        }
        let dim = 1usize << self.qubits;
        let mut u = CMat::identity(dim, dim);
        for j in 0..dim {
            let mut col: Vec<C64> = u.column(j).iter().copied().collect();
            for g in &self.gates {
                apply_gate(self.qubits, g, &mut col);
            }
            u.set_column(j, &CVec::from_vec(col));
        }
        Ok(u)
    }

    /// Oracle calls, counting a gate as controlled when it carries any control.
    pub fn oracle_counts(&self) -> QueryLedger {
        let mut l = QueryLedger::default();
        for g in &self.gates {
            let c = !g.controls.is_empty();
            match (g.oracle, c) {
                (Some(Oracle::UA), false) => l.u_a += 1,
                (Some(Oracle::UA), true) => l.c_u_a += 1,
                (Some(Oracle::UADag), false) => l.u_a_dag += 1,
                (Some(Oracle::UADag), true) => l.c_u_a_dag += 1,
                (Some(Oracle::UB), false) => l.u_b += 1,
                (Some(Oracle::UB), true) => l.c_u_b += 1,
                (Some(Oracle::UBDag), false) => l.u_b_dag += 1,
                (Some(Oracle::UBDag), true) => l.c_u_b_dag += 1,
                (None, _) => {}
            }
        }
        l
    }
}

fn control_wires(c: &Control) -> Vec<usize> {
    match c {
        Control::Qubit { wire, .. } => vec![*wire],
        Control::Register { wires, .. } => wires.clone(),
    }
}

fn remap(c: &Control, wires: &[usize]) -> Control {
    match c {
        Control::Qubit { wire, value } => Control::Qubit { wire: wires[*wire], value: *value },
        Control::Register { wires: w, values } => {
            Control::Register { wires: w.iter().map(|&x| wires[x]).collect(), values: values.clone() }
        }
    }
}

#[inline]
fn bit(index: usize, qubits: usize, wire: usize) -> usize {
    (index >> (qubits - 1 - wire)) & 1
}

fn register_value(index: usize, qubits: usize, wires: &[usize]) -> usize {
    wires.iter().fold(0, |acc, &w| (acc << 1) | bit(index, qubits, w))
}

fn controls_hold(index: usize, qubits: usize, controls: &[Control]) -> bool {
    controls.iter().all(|c| match c {
        Control::Qubit { wire, value } => (bit(index, qubits, *wire) == 1) == *value,
        Control::Register { wires, values } => values.contains(&register_value(index, qubits, wires)),
    })
}

fn apply_gate(qubits: usize, g: &Gate, state: &mut [C64]) {
    let k = g.targets.len();
    let masks: Vec<usize> = g.targets.iter().map(|&w| 1usize << (qubits - 1 - w)).collect();
    let all: usize = masks.iter().sum();
    let mut buf = vec![ZERO; 1 << k];
    let mut idx = vec![0usize; 1 << k];
    for base in 0..state.len() {
        if base & all != 0 || !controls_hold(base, qubits, &g.controls) {
            continue;
        }
        for (s, slot) in idx.iter_mut().enumerate() {
            let mut i = base;
            for (p, m) in masks.iter().enumerate() {
                if (s >> (k - 1 - p)) & 1 == 1 {
                    i |= m;
                }
            }
            *slot = i;
        }
        for (s, &i) in idx.iter().enumerate() {
            buf[s] = state[i];
        }
        for (r, &i) in idx.iter().enumerate() {
            let mut acc = ZERO;
            for (s, v) in buf.iter().enumerate() {
                acc += g.matrix[(r, s)] * v;
            }
            state[i] = acc;
        }
    }
}

/// Unitary whose ancilla-zero block equals `encoded` (ancillas are the leading qubits).
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    pub unitary: CMat,
    pub ancillas: usize,
    pub system: usize,
    pub encoded: CMat,
}

impl BlockEncoding {
    pub fn qubits(&self) -> usize {
        self.ancillas + self.system
    }
}

fn qubits_for(dim: usize) -> usize {
    let mut s = 0;
    while (1usize << s) < dim {
        s += 1;
    }
    s.max(1)
}

/// One-ancilla dilation [[A, √(I−AA†)], [√(I−A†A), −A†]] on the smallest register holding A.
pub fn dilate_block_encoding(a: &CMat) -> Result<BlockEncoding> {
    dilate_block_encoding_on(a, qubits_for(a.nrows().max(a.ncols())))
}

/// Dilation with `A` zero-padded to `s` system qubits.
pub fn dilate_block_encoding_on(a: &CMat, s: usize) -> Result<BlockEncoding> {
    let dim = 1usize << s;
    if a.nrows() > dim || a.ncols() > dim {
        return Err(QlssError::ShapeMismatch(format!("{}x{} does not fit {s} qubits", a.nrows(), a.ncols())));
    }
    check_operator_norm(a)?;
    let ap = pad(a, dim, dim);
    let svd = Svd::new(&ap);
    let comp = |m: &CMat| {
        let d = CVec::from_iterator(dim, svd.s.iter().map(|&x| re((1.0 - x * x).max(0.0).sqrt())));
        m * CMat::from_diagonal(&d) * m.adjoint()
    };
    let left = comp(&svd.u);
    let right = comp(&svd.v);
    let mut u = CMat::zeros(2 * dim, 2 * dim);
    u.view_mut((0, 0), (dim, dim)).copy_from(&ap);
    u.view_mut((0, dim), (dim, dim)).copy_from(&left);
    u.view_mut((dim, 0), (dim, dim)).copy_from(&right);
    u.view_mut((dim, dim), (dim, dim)).copy_from(&(-ap.adjoint()));
    Ok(BlockEncoding { unitary: u, ancillas: 1, system: s, encoded: ap })
}

/// Top-left `2^system` block of `u`: the leading qubits projected onto |0⟩.
pub fn sandwich(u: &CMat, system: usize) -> CMat {
    let d = 1usize << system;
    u.view((0, 0), (d, d)).into_owned()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircuitKind {
    /// (I − bb†)A.
    UG,
    /// A with the extra 1/t corner.
    UAt,
    /// Preparation of (b + e_m)/√2.
    UBprime,
    /// (I − b′b′†)A_t.
    UGt,
    /// The homotopy matrix Ā_σ.
    UBarASigma,
    /// A placed in the top-left block of a register one qubit larger.
    PaddedUA,
}

impl CircuitKind {
    pub const ALL: [CircuitKind; 6] = [
        CircuitKind::UG,
        CircuitKind::UAt,
        CircuitKind::UBprime,
        CircuitKind::UGt,
        CircuitKind::UBarASigma,
        CircuitKind::PaddedUA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CircuitKind::UG => "U_G",
            CircuitKind::UAt => "U_At",
            CircuitKind::UBprime => "U_bprime",
            CircuitKind::UGt => "U_Gt",
            CircuitKind::UBarASigma => "U_barAsigma",
            CircuitKind::PaddedUA => "padded_U_A",
        }
    }
}

/// Oracles and parameters consumed by the circuit builders.
#[derive(Debug, Clone)]
pub struct CircuitInputs {
    pub u_a: BlockEncoding,
    /// Unitary on the system register with first column b.
    pub u_b: CMat,
    /// Row count of A (index of the extra row e_m).
    pub m: usize,
    /// Column count of A (index of the extra column e_n).
    pub n: usize,
    pub t: Option<f64>,
    pub f: Option<f64>,
}

impl CircuitInputs {
    /// Dilated U_A and a state-preparation U_b for `a`, `b` on `s` system qubits.
    pub fn from_system(a: &CMat, b: &CVec, s: usize) -> Result<Self> {
        let u_a = dilate_block_encoding_on(a, s)?;
        let u_b = unitary_with_first_column(&pad_vec(b, 1 << s));
        Ok(Self { u_a, u_b, m: a.nrows(), n: a.ncols(), t: None, f: None })
    }
}

/// A circuit together with its ancilla count; the system occupies the trailing wires.
#[derive(Debug, Clone)]
pub struct EncodedCircuit {
    pub kind: CircuitKind,
    pub circuit: GateCircuit,
    pub ancillas: usize,
}

impl EncodedCircuit {
    pub fn system(&self) -> usize {
        self.circuit.qubits - self.ancillas
    }

    /// Assembled circuit as a block-encoding.
    pub fn block_encoding(&self) -> Result<BlockEncoding> {
        let u = self.circuit.unitary()?;
        let encoded = sandwich(&u, self.system());
        Ok(BlockEncoding { unitary: u, ancillas: self.ancillas, system: self.system(), encoded })
    }
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

fn basis_x_gates(c: &mut GateCircuit, sys: &[usize], value: usize, control: Control, label: &str) {
    let s = sys.len();
    for (p, &w) in sys.iter().enumerate() {
        if (value >> (s - 1 - p)) & 1 == 1 {
            c.push(Gate::new(label, vec![w], pauli_x()).when(control.clone()));
        }
    }
}

fn need(v: Option<f64>, what: &str) -> Result<f64> {
    v.ok_or_else(|| QlssError::InvalidParams(format!("circuit requires {what}")))
}

pub fn assemble_circuit(kind: CircuitKind, inputs: &CircuitInputs) -> Result<EncodedCircuit> {
    let a = inputs.u_a.ancillas;
    let s = inputs.u_a.system;
    let dim = 1usize << s;
    if a == 0 {
        return Err(QlssError::ShapeMismatch("U_A must have at least one ancilla".into()));
    }
    if inputs.u_b.nrows() != dim {
        return Err(QlssError::ShapeMismatch(format!("U_b acts on dimension {} not {dim}", inputs.u_b.nrows())));
    }
    let ua = inputs.u_a.unitary.clone();
    let needs_free_index = matches!(kind, CircuitKind::UAt | CircuitKind::UBprime | CircuitKind::UGt | CircuitKind::UBarASigma);
    if needs_free_index && (inputs.m >= dim || inputs.n >= dim) {
        return Err(QlssError::ShapeMismatch(format!(
            "{}x{} system leaves no free basis index in {s} qubits; pad U_A first",
            inputs.m, inputs.n
        )));
    }
    match kind {
        CircuitKind::UG => {
            let q = a + 1 + s;
            let sys = range(a + 1, q);
            let mut c = GateCircuit::new(q);
            c.push(Gate::new("U_A", range(1, q), ua).oracle(Oracle::UA));
            c.push(Gate::new("U_b†", sys.clone(), inputs.u_b.adjoint()).oracle(Oracle::UBDag));
            c.push(Gate::new("C_e0 NOT", vec![0], pauli_x()).when(Control::Register { wires: sys.clone(), values: vec![0] }));
            c.push(Gate::new("U_b", sys, inputs.u_b.clone()).oracle(Oracle::UB));
            Ok(EncodedCircuit { kind, circuit: c, ancillas: a + 1 })
        }
        CircuitKind::UAt => {
            let t = need(inputs.t, "t")?;
            let q = a + 1 + s;
            let sys = range(a + 1, q);
            let mut c = GateCircuit::new(q);
            let flag_on = Control::Qubit { wire: 0, value: true };
            c.push(Gate::new("C_en NOT", vec![0], pauli_x()).when(Control::Register { wires: sys.clone(), values: vec![inputs.n] }));
            c.push(Gate::new("U_A", range(1, q), ua).when(Control::Qubit { wire: 0, value: false }).oracle(Oracle::UA));
            c.push(Gate::new("exp(i arccos(1/t) Y)", vec![a], y_rotation((1.0 / t).acos())).when(flag_on.clone()));
            basis_x_gates(&mut c, &sys, inputs.m ^ inputs.n, flag_on, "CNOT");
            c.push(Gate::new("C_em NOT", vec![0], pauli_x()).when(Control::Register { wires: sys, values: vec![inputs.m] }));
            Ok(EncodedCircuit { kind, circuit: c, ancillas: a + 1 })
        }
        CircuitKind::UBprime => Ok(EncodedCircuit { kind, circuit: b_prime_circuit(inputs, s), ancillas: 1 }),
        CircuitKind::UGt => {
            let at = assemble_circuit(CircuitKind::UAt, inputs)?;
            let bp = b_prime_circuit(inputs, s);
            let q = a + 2 + s;
            let sys = range(a + 2, q);
            let mut c = GateCircuit::new(q);
            c.append(&at.circuit, &range(1, q), &[]);
            let mut bp_wires = vec![a + 1];
            bp_wires.extend(sys.iter().copied());
            c.append(&bp.adjoint(), &bp_wires, &[]);
            c.push(
                Gate::new("C_Π NOT", vec![0], pauli_x())
                    .when(Control::Qubit { wire: a + 1, value: false })
                    .when(Control::Register { wires: sys, values: vec![0] }),
            );
            c.append(&bp, &bp_wires, &[]);
            Ok(EncodedCircuit { kind, circuit: c, ancillas: a + 2 })
        }
        CircuitKind::UBarASigma => {
            let f = need(inputs.f, "f")?;
            let q = a + 2 + s;
            let extra = a + 1;
            let sreg = range(a + 2, q);
            let mut ua_wires = range(1, a + 1);
            ua_wires.extend(sreg.iter().copied());
            let mut c = GateCircuit::new(q);
            c.push(Gate::new("U_A", ua_wires, ua).when(Control::Qubit { wire: extra, value: false }).oracle(Oracle::UA));
            c.push(
                Gate::new("C_Π NOT", vec![a], pauli_x())
                    .when(Control::Qubit { wire: extra, value: true })
                    .when(Control::Register { wires: sreg, values: (inputs.m..dim).collect() }),
            );
            let phi = (1.0 - f * f).max(0.0).sqrt().acos();
            c.push(Gate::new("exp(-i arccos(√(1-f²)) Y)", vec![extra], y_rotation(-phi)));
            c.push(Gate::new("CNOT", vec![0], pauli_x()).when(Control::Qubit { wire: extra, value: true }));
            Ok(EncodedCircuit { kind, circuit: c, ancillas: a + 1 })
        }
        CircuitKind::PaddedUA => {
            let q = a + 2 + s;
            let extra = a + 1;
            let mut ua_wires = range(1, a + 1);
            ua_wires.extend(range(a + 2, q));
            let mut c = GateCircuit::new(q);
            c.push(Gate::new("Toffoli", vec![0], pauli_x()).when(Control::Register { wires: range(1, a + 1), values: vec![0] }));
            c.push(Gate::new("U_A", ua_wires, ua).oracle(Oracle::UA));
            c.push(Gate::new("CNOT", vec![0], pauli_x()).when(Control::Qubit { wire: extra, value: false }));
            Ok(EncodedCircuit { kind, circuit: c, ancillas: a + 1 })
        }
    }
}

fn b_prime_circuit(inputs: &CircuitInputs, s: usize) -> GateCircuit {
    let q = 1 + s;
    let sys = range(1, q);
    let mut c = GateCircuit::new(q);
    c.push(Gate::new("H", vec![0], hadamard()));
    c.push(Gate::new("U_b", sys.clone(), inputs.u_b.clone()).when(Control::Qubit { wire: 0, value: false }).oracle(Oracle::UB));
    basis_x_gates(&mut c, &sys, inputs.m, Control::Qubit { wire: 0, value: true }, "U_em");
    c.push(Gate::new("C_em NOT", vec![0], pauli_x()).when(Control::Register { wires: sys, values: vec![inputs.m] }));
    c
}

/// Largest entrywise deviation of the ancilla-zero block from `target`
/// (zero-padded to the system register).
pub fn verify_block_encoding(circuit: &GateCircuit, target: &CMat, ancillas: usize) -> Result<f64> {
    let sys = circuit.qubits - ancillas;
    let d = 1usize << sys;
    if target.nrows() > d || target.ncols() > d {
        return Err(QlssError::ShapeMismatch(format!(
            "target {}x{} larger than {sys}-qubit register",
            target.nrows(),
            target.ncols()
        )));
    }
    let u = circuit.unitary()?;
    Ok(max_abs_diff(&sandwich(&u, sys), &pad(target, d, d)))
}

/// Deviation of the assembled circuit from unitarity.
pub fn unitarity_error(circuit: &GateCircuit) -> Result<f64> {
    let u = circuit.unitary()?;
    let d = u.nrows();
    Ok(max_abs_diff(&(u.adjoint() * &u), &CMat::identity(d, d)))
}

/// Ā_σ (m × (n+m)) laid out on s+1 system qubits with the extra qubit most significant.
pub fn embed_homotopy(a_bar: &CMat, n: usize, s: usize) -> CMat {
    let m = a_bar.nrows();
    let d = 1usize << s;
    let mut out = CMat::zeros(2 * d, 2 * d);
    out.view_mut((0, 0), (m, n)).copy_from(&a_bar.view((0, 0), (m, n)));
    out.view_mut((0, d), (m, m)).copy_from(&a_bar.view((0, n), (m, m)));
    out
}

/// Target matrix of `kind` for the system (a, b), built directly from the matrices.
/// For [`CircuitKind::UBprime`] the target is the prepared state b′ as a column.
pub fn reference_target(kind: CircuitKind, a: &CMat, b: &CVec, inputs: &CircuitInputs) -> Result<CMat> {
    let d = 1usize << inputs.u_a.system;
    let (m, n) = a.shape();
    let proj = |v: &CVec| CMat::identity(d, d) - v * v.adjoint();
    let a_t = || -> Result<CMat> {
        let mut at = pad(a, d, d);
        at[(m, n)] = re(1.0 / need(inputs.t, "t")?);
        Ok(at)
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let b_prime = || {
        let mut v = pad_vec(b, d) * re(h);
        v[m] = re(h);
        v
    };
    Ok(match kind {
        CircuitKind::UG => proj(&pad_vec(b, d)) * pad(a, d, d),
        CircuitKind::UAt => a_t()?,
        CircuitKind::UBprime => CMat::from_columns(&[b_prime()]),
        CircuitKind::UGt => proj(&b_prime()) * a_t()?,
        CircuitKind::UBarASigma => {
            let f = need(inputs.f, "f")?;
            let mut a_bar = CMat::zeros(m, n + m);
            a_bar.view_mut((0, 0), (m, n)).copy_from(&(a * re((1.0 - f * f).max(0.0).sqrt())));
            for i in 0..m {
                a_bar[(i, n + i)] = re(f);
            }
            embed_homotopy(&a_bar, n, inputs.u_a.system)
        }
        CircuitKind::PaddedUA => pad(a, 2 * d, 2 * d),
    })
}

/// Assembles `kind` and returns its largest entrywise deviation from [`reference_target`].
pub fn circuit_error(kind: CircuitKind, a: &CMat, b: &CVec, inputs: &CircuitInputs) -> Result<f64> {
    let enc = assemble_circuit(kind, inputs)?;
    let target = reference_target(kind, a, b, inputs)?;
    if kind == CircuitKind::UBprime {
        let u = enc.circuit.unitary()?;
        let col = sandwich(&u, enc.system()).column(0).into_owned();
        return Ok((col - target.column(0)).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    verify_block_encoding(&enc.circuit, &target, enc.ancillas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dilation_of_diagonal() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = re(1.0);
        a[(1, 1)] = re(0.5);
        let be = dilate_block_encoding(&a).unwrap();
        let d = be.unitary.nrows();
        assert!(max_abs_diff(&(be.unitary.adjoint() * &be.unitary), &CMat::identity(d, d)) < 1e-12);
        assert!(max_abs_diff(&sandwich(&be.unitary, 1), &a) < 1e-14);
    }

    #[test]
    fn rejects_large_norm() {
        let a = CMat::identity(2, 2) * re(1.5);
        assert!(matches!(dilate_block_encoding(&a), Err(QlssError::NormTooLarge(_))));
    }

    #[test]
    fn controlled_x_truth_table() {
        let mut c = GateCircuit::new(2);
        c.push(Gate::new("CNOT", vec![1], pauli_x()).when(Control::Qubit { wire: 0, value: true }));
        let u = c.unitary().unwrap();
        // |10⟩ ↦ |11⟩
        assert_eq!(u[(3, 2)], ONE);
        assert_eq!(u[(0, 0)], ONE);
    }
}
