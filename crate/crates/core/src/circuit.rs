//! Gate-level IR for reversible and quantum circuits.
//!
//! Wire `i` of a bitstring word is bit `i` (little-endian). Gate matrices are
//! indexed locally with the gate's first wire as the most significant bit.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking GENERIC matrices for unitarity.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Toffoli,
    Cnot,
    Not,
    H,
    X,
    Cz,
    T,
    Generic,
}

impl GateKind {
    /// Fixed wire count, `None` for GENERIC.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::Toffoli => Some(3),
            GateKind::Cnot | GateKind::Cz => Some(2),
            GateKind::Not | GateKind::H | GateKind::X | GateKind::T => Some(1),
            GateKind::Generic => None,
        }
    }

    /// Member of the reversible gate set {TOFFOLI, CNOT, NOT}.
    pub fn is_reversible(self) -> bool {
        matches!(self, GateKind::Toffoli | GateKind::Cnot | GateKind::Not)
    }

    /// True for gates acting as a permutation of basis states.
    pub fn is_classical(self) -> bool {
        matches!(self, GateKind::Toffoli | GateKind::Cnot | GateKind::Not | GateKind::X)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    wires: Vec<usize>,
    matrix: Option<Vec<Complex64>>,
}

impl Gate {
    pub fn new(kind: GateKind, wires: Vec<usize>) -> Result<Self> {
        if kind == GateKind::Generic {
            return Err(Error::InvalidGate(
                "GENERIC gates need a matrix; use Gate::generic".into(),
            ));
        }
        let gate = Gate {
            kind,
            wires,
            matrix: None,
        };
        gate.validate()?;
        Ok(gate)
    }

    pub fn generic(wires: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        let gate = Gate {
            kind: GateKind::Generic,
            wires,
            matrix: Some(matrix),
        };
        gate.validate()?;
        Ok(gate)
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self::new(GateKind::Toffoli, vec![c1, c2, target]).expect("toffoli wires must be distinct")
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, vec![control, target]).expect("cnot wires must be distinct")
    }

    pub fn not(wire: usize) -> Self {
        Gate {
            kind: GateKind::Not,
            wires: vec![wire],
            matrix: None,
        }
    }

    pub fn h(wire: usize) -> Self {
        Gate {
            kind: GateKind::H,
            wires: vec![wire],
            matrix: None,
        }
    }

    pub fn x(wire: usize) -> Self {
        Gate {
            kind: GateKind::X,
            wires: vec![wire],
            matrix: None,
        }
    }

    pub fn t(wire: usize) -> Self {
        Gate {
            kind: GateKind::T,
            wires: vec![wire],
            matrix: None,
        }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::Cz, vec![a, b]).expect("cz wires must be distinct")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    fn validate(&self) -> Result<()> {
        if let Some(arity) = self.kind.arity() {
            if self.wires.len() != arity {
                return Err(Error::InvalidGate(format!(
                    "{:?} acts on {} wires, got {}",
                    self.kind,
                    arity,
                    self.wires.len()
                )));
            }
        } else if self.wires.is_empty() {
            return Err(Error::InvalidGate("GENERIC gate without wires".into()));
        }
        for (i, w) in self.wires.iter().enumerate() {
            if self.wires[..i].contains(w) {
                return Err(Error::InvalidGate(format!("wire {w} repeated")));
            }
        }
        match (&self.matrix, self.kind) {
            (Some(m), GateKind::Generic) => {
                let dim = 1usize << self.wires.len();
                if m.len() != dim * dim {
                    return Err(Error::InvalidGate(format!(
                        "GENERIC matrix on {} wires needs {} entries, got {}",
                        self.wires.len(),
                        dim * dim,
                        m.len()
                    )));
                }
                if !is_unitary(m, dim, UNITARY_TOLERANCE) {
                    return Err(Error::InvalidGate("GENERIC matrix is not unitary".into()));
                }
            }
            (None, GateKind::Generic) => return Err(Error::InvalidGate("GENERIC gate without matrix".into())),
            (Some(_), _) => return Err(Error::InvalidGate("only GENERIC gates carry a matrix".into())),
            (None, _) => {}
        }
        Ok(())
    }

    /// Row-major `2^k x 2^k` unitary; row = output local index, column = input.
    pub fn unitary(&self) -> Vec<Complex64> {
        let k = self.wires.len();
        let dim = 1usize << k;
        if let Some(m) = &self.matrix {
            return m.clone();
        }
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut m = vec![zero; dim * dim];
        match self.kind {
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                m.copy_from_slice(&[h, h, h, -h]);
            }
            GateKind::T => {
                m[0] = one;
                m[3] = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
            }
            GateKind::Cz => {
                m[0] = one;
                m[5] = one;
                m[10] = one;
                m[15] = -one;
            }
            _ => {
                for input in 0..dim {
                    let out = self.local_permute(input);
                    m[out * dim + input] = one;
                }
            }
        }
        m
    }

    /// Classical action on a local index (first wire = MSB). Only meaningful
    /// for classical kinds.
    fn local_permute(&self, local: usize) -> usize {
        match self.kind {
            GateKind::Not | GateKind::X => local ^ 1,
            GateKind::Cnot => {
                if local & 0b10 != 0 {
                    local ^ 1
                } else {
                    local
                }
            }
            GateKind::Toffoli => {
                if local & 0b110 == 0b110 {
                    local ^ 1
                } else {
                    local
                }
            }
            _ => local,
        }
    }

    /// Applies a classical gate to a word whose bit `i` is wire `i`.
    pub fn apply_word(&self, x: u64) -> u64 {
        match self.kind {
            GateKind::Not | GateKind::X => x ^ (1 << self.wires[0]),
            GateKind::Cnot => {
                let c = (x >> self.wires[0]) & 1;
                x ^ (c << self.wires[1])
            }
            GateKind::Toffoli => {
                let c = (x >> self.wires[0]) & (x >> self.wires[1]) & 1;
                x ^ (c << self.wires[2])
            }
            other => panic!("apply_word on non-classical gate {other:?}"),
        }
    }

    /// Same gate with every wire passed through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            wires: self.wires.iter().map(|&w| map(w)).collect(),
            matrix: self.matrix.clone(),
        }
    }

    /// Reversible gates are lifted as the same kind except NOT, which becomes X.
    fn lifted(&self) -> Gate {
        let kind = if self.kind == GateKind::Not {
            GateKind::X
        } else {
            self.kind
        };
        Gate {
            kind,
            wires: self.wires.clone(),
            matrix: None,
        }
    }
}

fn is_unitary(m: &[Complex64], dim: usize, tol: f64) -> bool {
    for i in 0..dim {
        for j in 0..dim {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                s += m[k * dim + i].conj() * m[k * dim + j];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            if (s - Complex64::new(expect, 0.0)).norm() > tol {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub inputs: Vec<usize>,
    pub ancillas: Vec<usize>,
    pub output: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub size: usize,
    pub width: usize,
}

/// A circuit over {TOFFOLI, CNOT, NOT} with explicit wire roles.
///
/// Inputs and ancillas partition `[0, width)`. The output is either a
/// dedicated wire (tidy layout) or, for untidy circuits only, one of the
/// input wires the computation overwrote in place.
#[derive(Clone, Debug, PartialEq)]
pub struct ReversibleCircuit {
    width: usize,
    roles: Roles,
    gates: Vec<Gate>,
}

impl ReversibleCircuit {
    pub fn new(width: usize, roles: Roles, gates: Vec<Gate>) -> Result<Self> {
        let c = ReversibleCircuit { width, roles, gates };
        c.validate()?;
        Ok(c)
    }

    /// Circuit with inputs `0..n`, output wire `n` and ancillas `n+1..width`.
    pub fn standard(n: usize, width: usize, gates: Vec<Gate>) -> Result<Self> {
        if width < n + 1 {
            return Err(Error::InvalidCircuit(format!(
                "width {width} leaves no output wire after {n} inputs"
            )));
        }
        let roles = Roles {
            inputs: (0..n).collect(),
            ancillas: (n + 1..width).collect(),
            output: n,
        };
        Self::new(width, roles, gates)
    }

    fn validate(&self) -> Result<()> {
        for g in &self.gates {
            if !g.kind.is_reversible() {
                return Err(Error::InvalidCircuit(format!(
                    "{:?} is not in the reversible gate set",
                    g.kind
                )));
            }
            if let Some(&w) = g.wires.iter().find(|&&w| w >= self.width) {
                return Err(Error::InvalidCircuit(format!("wire {w} outside width {}", self.width)));
            }
        }
        let mut seen = vec![false; self.width];
        let output_is_input = self.roles.inputs.contains(&self.roles.output);
        let dedicated = if output_is_input { None } else { Some(self.roles.output) };
        for &w in self
            .roles
            .inputs
            .iter()
            .chain(&self.roles.ancillas)
            .chain(dedicated.iter())
        {
            if w >= self.width {
                return Err(Error::InvalidCircuit(format!(
                    "role wire {w} outside width {}",
                    self.width
                )));
            }
            if seen[w] {
                return Err(Error::InvalidCircuit(format!("wire {w} assigned two roles")));
            }
            seen[w] = true;
        }
        if let Some(w) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidCircuit(format!("wire {w} has no role")));
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn roles(&self) -> &Roles {
        &self.roles
    }

    pub fn output(&self) -> usize {
        self.roles.output
    }

    pub fn num_inputs(&self) -> usize {
        self.roles.inputs.len()
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            size: self.gates.len(),
            width: self.width,
        }
    }

    /// Image of `x` under the gate sequence, applied left to right.
    pub fn apply(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.width {
            return Err(Error::Shape {
                expected: self.width,
                got: x.len(),
            });
        }
        let mut bits = x.to_vec();
        for g in &self.gates {
            match g.kind {
                GateKind::Not => bits[g.wires[0]] ^= true,
                GateKind::Cnot => {
                    let c = bits[g.wires[0]];
                    bits[g.wires[1]] ^= c;
                }
                GateKind::Toffoli => {
                    let c = bits[g.wires[0]] && bits[g.wires[1]];
                    bits[g.wires[2]] ^= c;
                }
                _ => unreachable!("validated reversible"),
            }
        }
        Ok(bits)
    }

    /// Word version of [`apply`](Self::apply); requires `width <= 64`.
    pub fn apply_word(&self, x: u64) -> u64 {
        debug_assert!(self.width <= 64);
        self.gates.iter().fold(x, |acc, g| g.apply_word(acc))
    }

    /// Gate list reversed. Every gate in the set is self-inverse.
    pub fn inverse(&self) -> ReversibleCircuit {
        ReversibleCircuit {
            width: self.width,
            roles: self.roles.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    /// Exhaustively checks `C(x, 0^a, y) = (x, 0^a, y ^ f(x))` for all `x`, `y`.
    pub fn check_tidy(&self, f: impl Fn(&[bool]) -> bool + Sync) -> Result<bool> {
        let n = self.roles.inputs.len();
        if n > 16 {
            return Err(Error::CapExceeded {
                what: "inputs for exhaustive tidy check",
                value: n,
                cap: 16,
            });
        }
        if self.width > 64 {
            return Err(Error::CapExceeded {
                what: "width for word simulation",
                value: self.width,
                cap: 64,
            });
        }
        if self.roles.inputs.contains(&self.roles.output) {
            return Ok(false);
        }
        if n + self.roles.ancillas.len() + 1 != self.width {
            return Err(Error::InvalidCircuit("role sizes do not add up to width".into()));
        }
        let out = self.roles.output;
        use rayon::prelude::*;
        let ok = (0u64..1 << n).into_par_iter().all(|xv| {
            let xbits: Vec<bool> = (0..n).map(|i| (xv >> i) & 1 == 1).collect();
            let fx = f(&xbits);
            let mut word = 0u64;
            for (i, &w) in self.roles.inputs.iter().enumerate() {
                if xbits[i] {
                    word |= 1 << w;
                }
            }
            [false, true].iter().all(|&y| {
                let start = if y { word | (1 << out) } else { word };
                let expect = if y ^ fx { word | (1 << out) } else { word };
                self.apply_word(start) == expect
            })
        });
        Ok(ok)
    }

    /// The same gates read as permutation unitaries on `width` qubits.
    pub fn lift_to_quantum(&self) -> QuantumCircuit {
        QuantumCircuit {
            num_qubits: self.width,
            gates: self.gates.iter().map(Gate::lifted).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let file = ReversibleFile {
            width: self.width,
            roles: self.roles.clone(),
            gates: self.gates.iter().map(GateRepr::from).collect(),
        };
        canonical_json(&file)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ReversibleFile = serde_json::from_str(text)?;
        let gates = file.gates.into_iter().map(Gate::try_from).collect::<Result<Vec<_>>>()?;
        Self::new(file.width, file.roles, gates)
    }
}

/// A circuit over any gate kinds acting on `num_qubits` wires.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl QuantumCircuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            if let Some(&w) = g.wires.iter().find(|&&w| w >= num_qubits) {
                return Err(Error::InvalidCircuit(format!("wire {w} outside {num_qubits} qubits")));
            }
        }
        Ok(QuantumCircuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&w) = gate.wires.iter().find(|&&w| w >= self.num_qubits) {
            return Err(Error::InvalidCircuit(format!(
                "wire {w} outside {} qubits",
                self.num_qubits
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            size: self.gates.len(),
            width: self.num_qubits,
        }
    }

    /// Layer count of the as-soon-as-possible schedule.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let l = g.wires.iter().map(|&w| level[w]).max().unwrap_or(0) + 1;
            for &w in &g.wires {
                level[w] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    pub fn to_json(&self) -> String {
        canonical_json(&self.to_file())
    }

    pub(crate) fn to_file(&self) -> QuantumFile {
        QuantumFile {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().map(GateRepr::from).collect(),
        }
    }

    pub(crate) fn from_file(file: QuantumFile) -> Result<Self> {
        let gates = file.gates.into_iter().map(Gate::try_from).collect::<Result<Vec<_>>>()?;
        Self::new(file.num_qubits, gates)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }
}

/// Serializes through `serde_json::Value`, whose maps are key-sorted.
pub(crate) fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

#[derive(Serialize, Deserialize)]
struct ReversibleFile {
    width: usize,
    roles: Roles,
    gates: Vec<GateRepr>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct QuantumFile {
    pub(crate) num_qubits: usize,
    pub(crate) gates: Vec<GateRepr>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GateRepr {
    kind: GateKind,
    wires: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

impl From<&Gate> for GateRepr {
    fn from(g: &Gate) -> Self {
        GateRepr {
            kind: g.kind,
            wires: g.wires.clone(),
            matrix: g.matrix.as_ref().map(|m| m.iter().map(|c| [c.re, c.im]).collect()),
        }
    }
}

impl TryFrom<GateRepr> for Gate {
    type Error = Error;

    fn try_from(r: GateRepr) -> Result<Gate> {
        match r.matrix {
            Some(m) => {
                if r.kind != GateKind::Generic {
                    return Err(Error::InvalidGate("only GENERIC gates carry a matrix".into()));
                }
                Gate::generic(r.wires, m.into_iter().map(|[a, b]| Complex64::new(a, b)).collect())
            }
            None => Gate::new(r.kind, r.wires),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn toffoli_flips_target_on_both_controls() {
        let c = ReversibleCircuit::standard(2, 3, vec![Gate::toffoli(0, 1, 2)]).unwrap();
        assert_eq!(c.apply(&bits("110")).unwrap(), bits("111"));
        assert_eq!(c.apply(&bits("100")).unwrap(), bits("100"));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = ReversibleCircuit::standard(2, 3, vec![]).unwrap();
        assert_eq!(c.apply(&bits("010")).unwrap(), bits("010"));
        assert_eq!(c.metrics(), Metrics { size: 0, width: 3 });
    }

    #[test]
    fn not_then_cnot() {
        let c = ReversibleCircuit::standard(1, 2, vec![Gate::not(0), Gate::cnot(0, 1)]).unwrap();
        assert_eq!(c.apply(&bits("00")).unwrap(), bits("11"));
        let inv = c.inverse();
        assert_eq!(inv.gates(), &[Gate::cnot(0, 1), Gate::not(0)]);
    }

    #[test]
    fn length_mismatch_is_shape_error() {
        let c = ReversibleCircuit::standard(1, 2, vec![]).unwrap();
        assert_eq!(c.apply(&bits("0")), Err(Error::Shape { expected: 2, got: 1 }));
    }

    #[test]
    fn gate_invariants() {
        assert!(Gate::new(GateKind::Cnot, vec![1, 1]).is_err());
        assert!(Gate::new(GateKind::Toffoli, vec![0, 1]).is_err());
        let bad = vec![Complex64::new(1.0, 0.0); 4];
        assert!(Gate::generic(vec![0], bad).is_err());
        let y = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(Gate::generic(vec![0], y).is_ok());
    }

    #[test]
    fn reversible_rejects_quantum_gates_and_bad_roles() {
        assert!(ReversibleCircuit::standard(1, 2, vec![Gate::h(0)]).is_err());
        let roles = Roles {
            inputs: vec![0],
            ancillas: vec![0],
            output: 1,
        };
        assert!(ReversibleCircuit::new(2, roles, vec![]).is_err());
        let roles = Roles {
            inputs: vec![0],
            ancillas: vec![],
            output: 1,
        };
        assert!(ReversibleCircuit::new(3, roles, vec![]).is_err());
    }

    #[test]
    fn tidy_examples() {
        let copy = ReversibleCircuit::standard(1, 2, vec![Gate::cnot(0, 1)]).unwrap();
        assert!(copy.check_tidy(|x| x[0]).unwrap());
        assert!(!copy.check_tidy(|x| !x[0]).unwrap());
        let dirty = ReversibleCircuit::standard(1, 3, vec![Gate::not(2)]).unwrap();
        assert!(!dirty.check_tidy(|_| false).unwrap());
        assert!(!dirty.check_tidy(|_| true).unwrap());
    }

    #[test]
    fn lift_maps_not_to_x_and_toffoli_to_permutation() {
        let c = ReversibleCircuit::standard(2, 3, vec![Gate::not(0), Gate::toffoli(0, 1, 2)]).unwrap();
        let q = c.lift_to_quantum();
        assert_eq!(q.gates()[0].kind(), GateKind::X);
        let u = q.gates()[1].unitary();
        for row in 0..8 {
            for col in 0..8 {
                let expect = match (row, col) {
                    (6, 7) | (7, 6) => 1.0,
                    (r, c) if r == c && r < 6 => 1.0,
                    _ => 0.0,
                };
                assert_eq!(u[row * 8 + col].re, expect, "({row},{col})");
            }
        }
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let c = ReversibleCircuit::standard(2, 4, vec![Gate::toffoli(0, 1, 2), Gate::cnot(2, 3)]).unwrap();
        let text = c.to_json();
        let back = ReversibleCircuit::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
        assert!(text.find("\"gates\"").unwrap() < text.find("\"roles\"").unwrap());
    }

    #[test]
    fn generic_matrix_serializes_as_pairs() {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let g = Gate::generic(vec![0], vec![s, s, s, -s]).unwrap();
        let q = QuantumCircuit::new(1, vec![g]).unwrap();
        let text = q.to_json();
        assert!(text.contains("\"matrix\""));
        assert_eq!(QuantumCircuit::from_json(&text).unwrap(), q);
    }

    #[test]
    fn depth_counts_layers() {
        let q = QuantumCircuit::new(3, vec![Gate::h(0), Gate::h(1), Gate::cnot(0, 1), Gate::h(2)]).unwrap();
        assert_eq!(q.depth(), 2);
    }
}
