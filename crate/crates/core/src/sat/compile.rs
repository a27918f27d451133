use serde::Serialize;

use super::{Literal, SatFormula};
use crate::circuit::{Gate, Metrics, QuantumCircuit, ReversibleCircuit, Roles};
use crate::error::{Error, Result};

/// Untidy circuit on the dedicated output wire `n`: CNOT from the variable,
/// then NOT for a negative literal. Width `n + 1`, no ancillas.
pub fn literal_circuit(l: Literal, n: usize) -> Result<ReversibleCircuit> {
    check_literal(l, n)?;
    let mut gates = vec![Gate::cnot(l.var, n)];
    if l.negated {
        gates.push(Gate::not(n));
    }
    ReversibleCircuit::standard(n, n + 1, gates)
}

/// Untidy circuit computing `l` in place on the variable's own wire:
/// no gates for a positive literal, one NOT for a negative one. Width `n`.
pub fn literal_in_place(l: Literal, n: usize) -> Result<ReversibleCircuit> {
    check_literal(l, n)?;
    let gates = if l.negated { vec![Gate::not(l.var)] } else { Vec::new() };
    let roles = Roles {
        inputs: (0..n).collect(),
        ancillas: Vec::new(),
        output: l.var,
    };
    ReversibleCircuit::new(n, roles, gates)
}

fn check_literal(l: Literal, n: usize) -> Result<()> {
    if l.var >= n {
        return Err(Error::InvalidFormula(format!(
            "literal on variable {} of {n}",
            l.var + 1
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    And,
    Or,
}

/// Inputs `0..n`, the given output, every other wire an ancilla.
fn untidy_roles(n: usize, width: usize, output: usize) -> Roles {
    Roles {
        inputs: (0..n).collect(),
        ancillas: (n..width).filter(|&w| w != output).collect(),
        output,
    }
}

fn check_pair(u1: &ReversibleCircuit, u2: &ReversibleCircuit) -> Result<usize> {
    let n = u1.num_inputs();
    let canonical = |u: &ReversibleCircuit| u.roles().inputs.iter().copied().eq(0..n);
    if u2.num_inputs() != n || !canonical(u1) || !canonical(u2) {
        return Err(Error::InvalidCircuit(format!(
            "gadget children need the same input register 0..{n}"
        )));
    }
    Ok(n)
}

/// Everything before the gadget's final write. Children share wires; `p` is
/// the first wire neither child uses, `q = p + 1` is reserved for the result.
///
/// AND: `U1, CNOT(o1 -> p), U1^-1, U2`, then `TOFFOLI(p, o2 -> q)`.
/// OR:  `U1, CNOT(o1 -> p), U1^-1, NOT p, U2, NOT o2`, then `TOFFOLI(p, o2 -> q), NOT q`.
struct Core {
    gates: Vec<Gate>,
    p: usize,
    o2: usize,
}

fn core(op: Op, u1: &ReversibleCircuit, u2: &ReversibleCircuit) -> Core {
    let p = u1.width().max(u2.width());
    let o2 = u2.output();
    let mut gates = Vec::with_capacity(2 * u1.size() + u2.size() + 4);
    gates.extend_from_slice(u1.gates());
    gates.push(Gate::cnot(u1.output(), p));
    gates.extend(u1.gates().iter().rev().cloned());
    if op == Op::Or {
        gates.push(Gate::not(p));
    }
    gates.extend_from_slice(u2.gates());
    if op == Op::Or {
        gates.push(Gate::not(o2));
    }
    Core { gates, p, o2 }
}

/// Final write of `f1 op f2` onto `target`, XOR style.
fn finish_gates(op: Op, c: &Core, target: usize) -> Vec<Gate> {
    let mut g = vec![Gate::toffoli(c.p, c.o2, target)];
    if op == Op::Or {
        g.push(Gate::not(target));
    }
    g
}

fn gadget(op: Op, u1: &ReversibleCircuit, u2: &ReversibleCircuit) -> Result<ReversibleCircuit> {
    let n = check_pair(u1, u2)?;
    let c = core(op, u1, u2);
    let q = c.p + 1;
    let mut gates = c.gates.clone();
    gates.extend(finish_gates(op, &c, q));
    let extra = if op == Op::And { 2 } else { 5 };
    let expected = 2 * u1.size() + u2.size() + extra;
    if gates.len() != expected {
        return Err(Error::Integrity(format!(
            "{op:?} gadget has {} gates, expected {expected}",
            gates.len()
        )));
    }
    ReversibleCircuit::new(q + 1, untidy_roles(n, q + 1, q), gates)
}

/// Untidy `f1 AND f2`: size `2 s1 + s2 + 2`, width `max(w1, w2) + 2`.
pub fn and_gadget(u1: &ReversibleCircuit, u2: &ReversibleCircuit) -> Result<ReversibleCircuit> {
    gadget(Op::And, u1, u2)
}

/// Untidy `f1 OR f2` by De Morgan: size `2 s1 + s2 + 5`, width `max(w1, w2) + 2`.
pub fn or_gadget(u1: &ReversibleCircuit, u2: &ReversibleCircuit) -> Result<ReversibleCircuit> {
    gadget(Op::Or, u1, u2)
}

/// The two children of the root gadget of a balanced tree over `leaves`,
/// smaller one first. `None` for a single leaf.
fn tree_root(op: Op, leaves: &[ReversibleCircuit]) -> Result<Option<(ReversibleCircuit, ReversibleCircuit)>> {
    match leaves.len() {
        0 => Err(Error::InvalidCircuit("empty gadget tree".into())),
        1 => Ok(None),
        k => {
            let (left, right) = leaves.split_at(k.div_ceil(2));
            let a = tree(op, left)?;
            let b = tree(op, right)?;
            Ok(Some(if b.size() < a.size() { (b, a) } else { (a, b) }))
        }
    }
}

fn tree(op: Op, leaves: &[ReversibleCircuit]) -> Result<ReversibleCircuit> {
    match tree_root(op, leaves)? {
        None => Ok(leaves[0].clone()),
        Some((u1, u2)) => gadget(op, &u1, &u2),
    }
}

/// Balanced AND tree; a single circuit is returned unchanged.
pub fn tree_and(circuits: &[ReversibleCircuit]) -> Result<ReversibleCircuit> {
    tree(Op::And, circuits)
}

/// Balanced OR tree; a single circuit is returned unchanged.
pub fn tree_or(circuits: &[ReversibleCircuit]) -> Result<ReversibleCircuit> {
    tree(Op::Or, circuits)
}

/// `U, CNOT(o -> b), U^-1` with a fresh output wire `b`. The old output
/// becomes an ancilla (or stays an input if `U` computed in place).
pub fn tidy_wrap(u: &ReversibleCircuit) -> Result<ReversibleCircuit> {
    let b = u.width();
    let mut gates = u.gates().to_vec();
    gates.push(Gate::cnot(u.output(), b));
    gates.extend(u.gates().iter().rev().cloned());
    let roles = Roles {
        inputs: u.roles().inputs.clone(),
        ancillas: (0..b).filter(|w| !u.roles().inputs.contains(w)).collect(),
        output: b,
    };
    ReversibleCircuit::new(b + 1, roles, gates)
}

/// How literal leaves are realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafMode {
    /// [`literal_in_place`]: size 0 or 1, no extra wire.
    InPlace,
    /// [`literal_circuit`]: size 1 or 2 on a dedicated output wire.
    Dedicated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompileOptions {
    pub leaves: LeafMode,
    /// Build the tidy circuit as `U', TOFFOLI(p, o2 -> b) [, NOT b], U'^-1`
    /// where `U'` is the untidy circuit minus its root gadget's final write,
    /// so `b` reuses the root's result wire. Otherwise apply [`tidy_wrap`].
    pub fused_wrap: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            leaves: LeafMode::InPlace,
            fused_wrap: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundLine {
    pub name: String,
    pub measured: u128,
    pub bound: u128,
    pub pass: bool,
}

impl BoundLine {
    fn new(name: impl Into<String>, measured: usize, bound: u128) -> Self {
        let measured = measured as u128;
        BoundLine {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompileCert {
    pub n: usize,
    pub m: usize,
    pub options: CompileOptions,
    pub untidy: Metrics,
    pub tidy: Option<Metrics>,
    pub lines: Vec<BoundLine>,
    pub pass: bool,
}

/// `ceil(log2 k)` for `k >= 1`.
fn ceil_log2(k: usize) -> u32 {
    k.next_power_of_two().trailing_zeros()
}

fn pow3(e: u32) -> u128 {
    3u128.pow(e)
}

fn leaf(l: Literal, n: usize, mode: LeafMode) -> Result<ReversibleCircuit> {
    match mode {
        LeafMode::InPlace => literal_in_place(l, n),
        LeafMode::Dedicated => literal_circuit(l, n),
    }
}

struct Untidy {
    circuit: ReversibleCircuit,
    /// Children of the root gadget and its kind, if the root is a gadget.
    root: Option<(Op, ReversibleCircuit, ReversibleCircuit)>,
    lines: Vec<BoundLine>,
}

fn build_untidy(phi: &SatFormula, opts: CompileOptions) -> Result<Untidy> {
    let (n, m) = (phi.num_vars(), phi.num_clauses());
    if n == 0 || m == 0 {
        return Err(Error::InvalidFormula("compilation needs n, m >= 1".into()));
    }
    if n > 64 {
        return Err(Error::CapExceeded {
            what: "formula variables for compilation",
            value: n,
            cap: 64,
        });
    }
    let mut lines = Vec::new();
    let mut clause_circuits = Vec::with_capacity(m);
    let mut clause_roots = Vec::with_capacity(m);
    for (k, clause) in phi.clauses().iter().enumerate() {
        let leaves = clause
            .iter()
            .map(|&l| leaf(l, n, opts.leaves))
            .collect::<Result<Vec<_>>>()?;
        let s = leaves.iter().map(ReversibleCircuit::size).max().unwrap_or(0) as u128;
        let root = tree_root(Op::Or, &leaves)?;
        let c = match &root {
            None => leaves[0].clone(),
            Some((u1, u2)) => gadget(Op::Or, u1, u2)?,
        };
        if leaves.len() > 1 {
            // 3^a (s + 5/2) - 5/2, floored.
            let bound = (pow3(ceil_log2(leaves.len())) * (2 * s + 5) - 5) / 2;
            lines.push(BoundLine::new(format!("or-tree clause {k} size"), c.size(), bound));
        }
        clause_circuits.push(c);
        clause_roots.push(root);
    }
    let s = clause_circuits.iter().map(ReversibleCircuit::size).max().unwrap_or(0) as u128;
    let (circuit, root) = if m == 1 {
        let root = clause_roots.pop().flatten().map(|(a, b)| (Op::Or, a, b));
        (clause_circuits.pop().expect("one clause"), root)
    } else {
        let (u1, u2) = tree_root(Op::And, &clause_circuits)?.expect("two or more clauses");
        let c = gadget(Op::And, &u1, &u2)?;
        lines.push(BoundLine::new(
            "and-tree size",
            c.size(),
            pow3(ceil_log2(m)) * (s + 1) - 1,
        ));
        (c, Some((Op::And, u1, u2)))
    };
    let e = ceil_log2(n) + ceil_log2(m);
    lines.push(BoundLine::new("untidy size", circuit.size(), 4 * pow3(e) - 1));
    lines.push(BoundLine::new(
        "untidy width",
        circuit.width(),
        (n + 1) as u128 + 2 * e as u128,
    ));
    Ok(Untidy { circuit, root, lines })
}

fn certificate(
    phi: &SatFormula,
    opts: CompileOptions,
    untidy: Metrics,
    tidy: Option<Metrics>,
    lines: Vec<BoundLine>,
) -> CompileCert {
    let pass = lines.iter().all(|l| l.pass);
    CompileCert {
        n: phi.num_vars(),
        m: phi.num_clauses(),
        options: opts,
        untidy,
        tidy,
        lines,
        pass,
    }
}

/// Clause circuits by OR trees over literals (single literals skip the tree),
/// then an AND tree over clauses.
pub fn compile_untidy(phi: &SatFormula) -> Result<(ReversibleCircuit, CompileCert)> {
    compile_untidy_with(phi, CompileOptions::default())
}

pub fn compile_untidy_with(phi: &SatFormula, opts: CompileOptions) -> Result<(ReversibleCircuit, CompileCert)> {
    let u = build_untidy(phi, opts)?;
    let cert = certificate(phi, opts, u.circuit.metrics(), None, u.lines);
    Ok((u.circuit, cert))
}

/// A circuit computing `phi` tidily, with size and width checked against
/// `8 * 3^(ceil log n + ceil log m) - 1` and `n + 2 (ceil log n + ceil log m)`.
pub fn compile_tidy(phi: &SatFormula) -> Result<(ReversibleCircuit, CompileCert)> {
    compile_tidy_with(phi, CompileOptions::default())
}

pub fn compile_tidy_with(phi: &SatFormula, opts: CompileOptions) -> Result<(ReversibleCircuit, CompileCert)> {
    let Untidy {
        circuit: u,
        root,
        mut lines,
    } = build_untidy(phi, opts)?;
    let n = phi.num_vars();
    let tidy = match (&root, opts.fused_wrap) {
        (Some((op, u1, u2)), true) => {
            let c = core(*op, u1, u2);
            let b = c.p + 1;
            let mut gates = c.gates.clone();
            gates.extend(finish_gates(*op, &c, b));
            gates.extend(c.gates.iter().rev().cloned());
            let roles = Roles {
                inputs: (0..n).collect(),
                ancillas: (n..b).collect(),
                output: b,
            };
            ReversibleCircuit::new(b + 1, roles, gates)?
        }
        _ => tidy_wrap(&u)?,
    };
    let e = ceil_log2(n) + ceil_log2(phi.num_clauses());
    lines.push(BoundLine::new("tidy size", tidy.size(), 8 * pow3(e) - 1));
    lines.push(BoundLine::new("tidy width", tidy.width(), n as u128 + 2 * e as u128));
    let cert = certificate(phi, opts, u.metrics(), Some(tidy.metrics()), lines);
    Ok((tidy, cert))
}

/// `C_phi`: H on every input, the lifted tidy circuit, H on every input, X on
/// the output wire. Its all-zeros amplitude is `#SAT(phi) / 2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingCircuit {
    pub n: usize,
    pub circuit: QuantumCircuit,
    pub cert: CompileCert,
}

pub fn build_cphi(phi: &SatFormula) -> Result<CountingCircuit> {
    build_cphi_with(phi, CompileOptions::default())
}

pub fn build_cphi_with(phi: &SatFormula, opts: CompileOptions) -> Result<CountingCircuit> {
    let (tidy, cert) = compile_tidy_with(phi, opts)?;
    let n = phi.num_vars();
    let mut c = QuantumCircuit::new(tidy.width(), Vec::new())?;
    for i in 0..n {
        c.push(Gate::h(i))?;
    }
    for g in tidy.lift_to_quantum().gates() {
        c.push(g.clone())?;
    }
    for i in 0..n {
        c.push(Gate::h(i))?;
    }
    c.push(Gate::x(tidy.output()))?;
    Ok(CountingCircuit { n, circuit: c, cert })
}

impl CountingCircuit {
    /// The quantum-circuit file format plus `"n"`.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self.circuit.to_file()).expect("serializable");
        v["n"] = self.n.into();
        crate::circuit::canonical_json(&v)
    }

    /// Reads [`to_json`](Self::to_json) output. Returns the circuit and `n`,
    /// which is absent for plain quantum-circuit files.
    pub fn read_json(text: &str) -> Result<(QuantumCircuit, Option<usize>)> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let n = v.get("n").and_then(serde_json::Value::as_u64).map(|n| n as usize);
        let file = serde_json::from_value(v)?;
        Ok((QuantumCircuit::from_file(file)?, n))
    }
}

/// Satisfiable iff the estimate reaches `2^-n / 2`.
pub fn decide_sat(amp_estimate: f64, n: usize) -> bool {
    amp_estimate >= 0.5f64.powi(n as i32) / 2.0
}
