use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::circuit::canonical_json;
use crate::error::{Error, Result};
use crate::network::{Algebra, ContractionPlan};
use crate::poly::{SparsePolynomial, Subst};
use crate::skeleton::{associated_polynomial_with, Skeleton, SymbolicCaps};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(u32),
    /// Nonnegative by construction.
    Const(Ratio<u64>),
    Plus(NodeId, NodeId),
    Times(NodeId, NodeId),
}

/// Fan-in-2 DAG of `+`/`x` gates. Children always have smaller ids than their
/// parent, so node order is a topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCircuit {
    nodes: Vec<Node>,
    output: NodeId,
}

/// Incremental construction; ids are handed out in order.
#[derive(Clone, Debug, Default)]
pub struct MonotoneBuilder {
    nodes: Vec<Node>,
}

impl MonotoneBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn var(&mut self, v: u32) -> NodeId {
        self.push(Node::Var(v))
    }

    pub fn constant(&mut self, c: Ratio<u64>) -> NodeId {
        self.push(Node::Const(c))
    }

    pub fn plus(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::Plus(a, b))
    }

    pub fn times(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::Times(a, b))
    }

    /// Left-leaning chain `((t0 + t1) + t2) + ...`.
    pub fn sum(&mut self, terms: &[NodeId]) -> Option<NodeId> {
        let (&first, rest) = terms.split_first()?;
        Some(rest.iter().fold(first, |acc, &t| self.plus(acc, t)))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn finish(self, output: NodeId) -> Result<MonotoneCircuit> {
        MonotoneCircuit::new(self.nodes, output)
    }
}

impl MonotoneCircuit {
    pub fn new(nodes: Vec<Node>, output: NodeId) -> Result<Self> {
        if output >= nodes.len() {
            return Err(Error::InvalidMonotone(format!(
                "output {output} out of range for {} nodes",
                nodes.len()
            )));
        }
        for (id, node) in nodes.iter().enumerate() {
            if let Node::Plus(a, b) | Node::Times(a, b) = *node {
                if a >= id || b >= id {
                    return Err(Error::InvalidMonotone(format!(
                        "node {id} refers to {a}, {b}; children must precede their parent"
                    )));
                }
            }
        }
        Ok(MonotoneCircuit { nodes, output })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    /// `|M(S)|`: number of Plus and Times gates. Leaves are not counted.
    pub fn size(&self) -> usize {
        self.additions() + self.multiplications()
    }

    pub fn additions(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Plus(..))).count()
    }

    pub fn multiplications(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Times(..))).count()
    }

    /// Which nodes the output depends on.
    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[self.output] = true;
        for id in (0..self.nodes.len()).rev() {
            if !seen[id] {
                continue;
            }
            if let Node::Plus(a, b) | Node::Times(a, b) = self.nodes[id] {
                seen[a] = true;
                seen[b] = true;
            }
        }
        seen
    }

    /// Evaluates every node the output depends on, once each.
    fn evaluate<T: Clone>(
        &self,
        mut leaf: impl FnMut(&Node) -> Result<T>,
        mut plus: impl FnMut(&T, &T) -> Result<T>,
        mut times: impl FnMut(&T, &T) -> Result<T>,
    ) -> Result<T> {
        let live = self.reachable();
        let mut memo: Vec<Option<T>> = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                continue;
            }
            let v = match *node {
                Node::Plus(a, b) => plus(memo[a].as_ref().expect("child"), memo[b].as_ref().expect("child"))?,
                Node::Times(a, b) => times(memo[a].as_ref().expect("child"), memo[b].as_ref().expect("child"))?,
                _ => leaf(node)?,
            };
            memo[id] = Some(v);
        }
        Ok(memo[self.output].take().expect("output evaluated"))
    }

    pub fn eval_numeric(&self, value: impl Fn(u32) -> Option<Complex64>) -> Result<Complex64> {
        self.evaluate(
            |n| match n {
                Node::Var(v) => value(*v).ok_or(Error::MissingVariable(*v)),
                Node::Const(c) => Ok(Complex64::new(*c.numer() as f64 / *c.denom() as f64, 0.0)),
                _ => unreachable!(),
            },
            |a, b| Ok(a + b),
            |a, b| Ok(a * b),
        )
    }

    pub fn eval_exact(&self, value: impl Fn(u32) -> Option<BigRational>) -> Result<BigRational> {
        self.evaluate(
            |n| match n {
                Node::Var(v) => value(*v).ok_or(Error::MissingVariable(*v)),
                Node::Const(c) => Ok(BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))),
                _ => unreachable!(),
            },
            |a, b| Ok(a + b),
            |a, b| Ok(a * b),
        )
    }

    /// Exact polynomial of the output, capped at one million terms.
    pub fn expand_symbolic(&self) -> Result<SparsePolynomial> {
        self.expand_symbolic_capped(SymbolicCaps::default().max_terms)
    }

    pub fn expand_symbolic_capped(&self, max_terms: usize) -> Result<SparsePolynomial> {
        let cap = |p: SparsePolynomial| {
            if p.num_terms() > max_terms {
                Err(Error::CapExceeded {
                    what: "polynomial terms",
                    value: p.num_terms(),
                    cap: max_terms,
                })
            } else {
                Ok(p)
            }
        };
        self.evaluate(
            |n| match n {
                Node::Var(v) => Ok(SparsePolynomial::var(*v)),
                Node::Const(c) if c.is_integer() => Ok(SparsePolynomial::constant(BigUint::from(c.to_integer()))),
                Node::Const(c) => Err(Error::InvalidMonotone(format!(
                    "constant {c} has no integer polynomial"
                ))),
                _ => unreachable!(),
            },
            |a, b| cap(a.add(b)),
            |a, b| a.mul_capped(b, max_terms),
        )
    }

    /// Merges structurally identical nodes, treating `+` and `x` as
    /// commutative, and drops nodes the output does not depend on.
    pub fn dedup(&self) -> MonotoneCircuit {
        let live = self.reachable();
        let mut canon: HashMap<Node, NodeId> = HashMap::new();
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                continue;
            }
            let key = match *node {
                Node::Plus(a, b) => {
                    let (x, y) = (remap[a], remap[b]);
                    Node::Plus(x.min(y), x.max(y))
                }
                Node::Times(a, b) => {
                    let (x, y) = (remap[a], remap[b]);
                    Node::Times(x.min(y), x.max(y))
                }
                ref leaf => leaf.clone(),
            };
            remap[id] = *canon.entry(key.clone()).or_insert_with(|| {
                nodes.push(key);
                nodes.len() - 1
            });
        }
        MonotoneCircuit {
            nodes,
            output: remap[self.output],
        }
    }

    /// Substitutes every variable leaf and folds the constants 0 and 1 away:
    /// `0 + x = x`, `0 x = 0`, `1 x = x`.
    pub fn restrict(&self, map: &BTreeMap<u32, Subst>) -> Result<MonotoneCircuit> {
        #[derive(Clone, Copy)]
        enum F {
            Zero,
            One,
            At(NodeId),
        }
        let live = self.reachable();
        let mut b = MonotoneBuilder::new();
        let mut leaves: BTreeMap<u32, NodeId> = BTreeMap::new();
        let mut one: Option<NodeId> = None;
        let mut out: Vec<F> = vec![F::Zero; self.nodes.len()];
        let mut materialize = |b: &mut MonotoneBuilder, f: F| match f {
            F::At(id) => id,
            F::One => *one.get_or_insert_with(|| b.constant(Ratio::from_integer(1))),
            F::Zero => b.constant(Ratio::from_integer(0)),
        };
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                continue;
            }
            out[id] = match *node {
                Node::Var(v) => match map.get(&v) {
                    None => return Err(Error::MissingVariable(v)),
                    Some(Subst::Zero) => F::Zero,
                    Some(Subst::One) => F::One,
                    Some(Subst::Var(w)) => F::At(*leaves.entry(*w).or_insert_with(|| b.var(*w))),
                },
                Node::Const(c) if c == Ratio::from_integer(0) => F::Zero,
                Node::Const(c) if c == Ratio::from_integer(1) => F::One,
                Node::Const(c) => F::At(b.constant(c)),
                Node::Plus(x, y) => match (out[x], out[y]) {
                    (F::Zero, f) | (f, F::Zero) => f,
                    (fx, fy) => {
                        let (l, r) = (materialize(&mut b, fx), materialize(&mut b, fy));
                        F::At(b.plus(l, r))
                    }
                },
                Node::Times(x, y) => match (out[x], out[y]) {
                    (F::Zero, _) | (_, F::Zero) => F::Zero,
                    (F::One, f) | (f, F::One) => f,
                    (F::At(l), F::At(r)) => F::At(b.times(l, r)),
                },
            };
        }
        let output = materialize(&mut b, out[self.output]);
        b.finish(output)
    }

    pub fn to_json(&self) -> String {
        canonical_json(&self.file())
    }

    fn file(&self) -> MonotoneFile {
        MonotoneFile {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| {
                    let (kind, args) = match *n {
                        Node::Var(v) => (NodeKind::Var, vec![v as u64]),
                        Node::Const(c) => (NodeKind::Const, vec![*c.numer(), *c.denom()]),
                        Node::Plus(a, b) => (NodeKind::Plus, vec![a as u64, b as u64]),
                        Node::Times(a, b) => (NodeKind::Times, vec![a as u64, b as u64]),
                    };
                    NodeRepr { id, kind, args }
                })
                .collect(),
            output: self.output,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MonotoneFile = serde_json::from_str(text)?;
        let mut nodes = Vec::with_capacity(file.nodes.len());
        for (k, r) in file.nodes.into_iter().enumerate() {
            let bad = || Error::InvalidMonotone(format!("node {} has bad arguments {:?}", r.id, r.args));
            if r.id != k {
                return Err(Error::InvalidMonotone(format!(
                    "node ids must be 0.., found {} at {k}",
                    r.id
                )));
            }
            let node = match (r.kind, r.args.as_slice()) {
                (NodeKind::Var, &[v]) => Node::Var(u32::try_from(v).map_err(|_| bad())?),
                (NodeKind::Const, &[p, q]) if q > 0 => Node::Const(Ratio::new(p, q)),
                (NodeKind::Plus, &[a, b]) => Node::Plus(a as usize, b as usize),
                (NodeKind::Times, &[a, b]) => Node::Times(a as usize, b as usize),
                _ => return Err(bad()),
            };
            nodes.push(node);
        }
        MonotoneCircuit::new(nodes, file.output)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NodeKind {
    Var,
    Const,
    Plus,
    Times,
}

/// `args`: `[var]`, `[numerator, denominator]`, or `[left, right]`.
#[derive(Serialize, Deserialize)]
struct NodeRepr {
    id: NodeId,
    kind: NodeKind,
    args: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct MonotoneFile {
    nodes: Vec<NodeRepr>,
    output: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MethodReport {
    pub skeleton_id: String,
    pub plan: ContractionPlan,
    /// Plus + Times gates; leaves are not counted.
    pub size: usize,
    pub additions: usize,
    pub multiplications: usize,
    pub variables: usize,
    pub size_counts: &'static str,
}

pub const SIZE_COUNTS: &str = "internal gates only (plus and times); leaves excluded";

/// Emits gates while contracting: a Times node per product of two nonzero
/// entries, a left-leaning Plus chain per sum.
struct EmitAlgebra {
    builder: MonotoneBuilder,
}

impl Algebra<Option<NodeId>> for EmitAlgebra {
    fn is_zero(&self, e: &Option<NodeId>) -> bool {
        e.is_none()
    }
    fn zero(&mut self) -> Option<NodeId> {
        None
    }
    fn mul(&mut self, a: &Option<NodeId>, b: &Option<NodeId>) -> Option<NodeId> {
        Some(self.builder.times(a.expect("nonzero"), b.expect("nonzero")))
    }
    fn add(&mut self, acc: Option<NodeId>, term: Option<NodeId>) -> Option<NodeId> {
        match (acc, term) {
            (Some(a), Some(t)) => Some(self.builder.plus(a, t)),
            (a, t) => a.or(t),
        }
    }
}

/// The monotone method: contract `s` along `plan` symbolically. Node `v` is
/// the leaf of variable `v`. A skeleton whose polynomial is zero yields a
/// single constant-zero output.
pub fn compile_contraction(s: &Skeleton, plan: &ContractionPlan) -> Result<(MonotoneCircuit, MethodReport)> {
    if !s.is_closed() {
        return Err(Error::NotClosed);
    }
    let table = s.variable_table();
    let mut alg = EmitAlgebra {
        builder: MonotoneBuilder::new(),
    };
    for v in 0..table.len() {
        alg.builder.var(v as u32);
    }
    let net = s
        .masks()
        .map_entries(|t, i, &nz| if nz { table.var(t, i).map(|v| v as NodeId) } else { None });
    let (result, _) = net.contract_plan_with(plan, &mut alg)?;
    let output = match *result.entry(0) {
        Some(id) => id,
        None => alg.builder.constant(Ratio::from_integer(0)),
    };
    let mc = alg.builder.finish(output)?;
    let report = MethodReport {
        skeleton_id: s.id(),
        plan: plan.clone(),
        size: mc.size(),
        additions: mc.additions(),
        multiplications: mc.multiplications(),
        variables: table.len(),
        size_counts: SIZE_COUNTS,
    };
    Ok((mc, report))
}

/// Does `mc` compute `p(S)`? Both sides are expanded exactly.
pub fn verify_method(s: &Skeleton, mc: &MonotoneCircuit) -> Result<bool> {
    verify_method_with(s, mc, SymbolicCaps::default())
}

pub fn verify_method_with(s: &Skeleton, mc: &MonotoneCircuit, caps: SymbolicCaps) -> Result<bool> {
    let plan = crate::network::find_plan(s.masks(), crate::network::PlanMode::Greedy)?;
    let target = associated_polynomial_with(s, &plan, caps)?;
    Ok(mc.expand_symbolic_capped(caps.max_terms)? == target)
}

/// `(x1 + 2 x2) x3`.
pub fn weighted_sum_circuit() -> MonotoneCircuit {
    let mut b = MonotoneBuilder::new();
    let x1 = b.var(1);
    let x2 = b.var(2);
    let two = b.constant(Ratio::from_integer(2));
    let t = b.times(two, x2);
    let s = b.plus(x1, t);
    let x3 = b.var(3);
    let out = b.times(s, x3);
    b.finish(out).expect("well formed")
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QuantumCircuit};
    use crate::network::{circuit_to_network, find_plan, Hyperedge, Network, PlanMode, Tensor};
    use crate::skeleton::{associated_polynomial, extract_skeleton, DEFAULT_ZERO_TOLERANCE};

    fn ones(_: u32) -> Option<Complex64> {
        Some(Complex64::new(1.0, 0.0))
    }

    #[test]
    fn weighted_sum_values() {
        let mc = weighted_sum_circuit();
        assert_eq!(mc.eval_numeric(ones).unwrap(), Complex64::new(3.0, 0.0));
        let v = [0.0, 0.0, 0.0, 5.0];
        assert_eq!(
            mc.eval_numeric(|x| Some(Complex64::new(v[x as usize], 0.0))).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let p = mc.expand_symbolic().unwrap();
        assert_eq!(p.dump(), "1: v1 v3\n2: v2 v3\n");
        assert_eq!(mc.size(), 3);
        assert!(mc.eval_numeric(|x| if x == 3 { None } else { ones(x) }).is_err());
    }

    #[test]
    fn small_expansions() {
        let mut b = MonotoneBuilder::new();
        let x = b.var(7);
        let single = b.clone().finish(x).unwrap();
        assert_eq!(single.expand_symbolic().unwrap(), SparsePolynomial::var(7));
        assert_eq!(single.size(), 0);
        let s = b.plus(x, x);
        let doubled = b.finish(s).unwrap();
        assert_eq!(doubled.expand_symbolic().unwrap().dump(), "2: v7\n");
    }

    #[test]
    fn fractional_constants_have_no_polynomial() {
        let mut b = MonotoneBuilder::new();
        let c = b.constant(Ratio::new(1, 2));
        let mc = b.finish(c).unwrap();
        assert!(matches!(mc.expand_symbolic(), Err(Error::InvalidMonotone(_))));
        assert_eq!(mc.eval_exact(|_| None).unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn rejects_forward_references() {
        assert!(MonotoneCircuit::new(vec![Node::Var(0), Node::Plus(0, 2), Node::Var(1)], 1).is_err());
        assert!(MonotoneCircuit::new(vec![Node::Var(0)], 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mc = weighted_sum_circuit();
        let text = mc.to_json();
        assert_eq!(MonotoneCircuit::from_json(&text).unwrap(), mc);
        assert!(text.contains("\"kind\": \"times\""));
        assert!(MonotoneCircuit::from_json(r#"{"nodes":[{"id":0,"kind":"const","args":[1,0]}],"output":0}"#).is_err());
    }

    #[test]
    fn dedup_merges_commuted_duplicates() {
        let mut b = MonotoneBuilder::new();
        let x = b.var(0);
        let y = b.var(1);
        let p = b.times(x, y);
        let q = b.times(y, x);
        let x2 = b.var(0);
        let r = b.plus(p, q);
        let out = b.plus(r, x2);
        let mc = b.finish(out).unwrap();
        let d = mc.dedup();
        assert_eq!(d.size(), 3);
        assert_eq!(d.expand_symbolic().unwrap(), mc.expand_symbolic().unwrap());
    }

    #[test]
    fn two_rank_one_tensors() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let net = Network::new(
            vec![
                Tensor::new(1, vec![c(1.0), c(2.0)]).unwrap(),
                Tensor::new(1, vec![c(3.0), c(4.0)]).unwrap(),
            ],
            vec![Hyperedge {
                members: vec![(0, 0), (1, 0)],
                open: false,
            }],
        )
        .unwrap();
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let (mc, report) = compile_contraction(&s, &ContractionPlan { steps: vec![(0, 1)] }).unwrap();
        assert_eq!(report.size, 3);
        assert_eq!((report.additions, report.multiplications), (1, 2));
        assert_eq!(mc.expand_symbolic().unwrap().dump(), "1: v0 v2\n1: v1 v3\n");
        assert!(verify_method(&s, &mc).unwrap());
    }

    #[test]
    fn cnot_emits_four_products() {
        // CNOT tensor against dense boundary vectors: only its 4 nonzeros multiply.
        let q = QuantumCircuit::new(2, vec![Gate::cnot(0, 1)]).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let net = circuit_to_network(&q, &[false, false], &[false, false])
            .unwrap()
            .map_entries(|t, _, e| if t == 2 { *e } else { one });
        let dense = net.map_entries(|_, _, _| one);
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let (sd, _) = extract_skeleton(&dense, DEFAULT_ZERO_TOLERANCE);
        // Merge the CNOT with the two-ket product first.
        let plan = ContractionPlan {
            steps: vec![(0, 1), (2, 5), (6, 3), (7, 4)],
        };
        let count = |s: &Skeleton| {
            let mut m = s.masks().clone();
            m.contract_pair_with(0, 1, &mut crate::network::MaskAlgebra).unwrap();
            m.contract_pair_with(2, 5, &mut crate::network::MaskAlgebra)
                .unwrap()
                .structural
        };
        assert_eq!(count(&s), 4);
        assert_eq!(count(&sd), 16);
        let (mc, _) = compile_contraction(&s, &plan).unwrap();
        assert!(verify_method(&s, &mc).unwrap());
    }

    #[test]
    fn zero_polynomial_compiles_to_constant_zero() {
        let q = QuantumCircuit::new(1, vec![Gate::x(0)]).unwrap();
        let net = circuit_to_network(&q, &[false], &[false]).unwrap();
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let plan = find_plan(s.masks(), PlanMode::Greedy).unwrap();
        let (mc, report) = compile_contraction(&s, &plan).unwrap();
        assert!(associated_polynomial(&s).unwrap().is_zero());
        assert!(mc.expand_symbolic().unwrap().is_zero());
        assert_eq!(report.size, mc.size());
    }

    #[test]
    fn duplicated_term_fails_verification() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let net = Network::new(
            vec![
                Tensor::new(1, vec![c(1.0), c(2.0)]).unwrap(),
                Tensor::new(1, vec![c(3.0), c(4.0)]).unwrap(),
            ],
            vec![Hyperedge {
                members: vec![(0, 0), (1, 0)],
                open: false,
            }],
        )
        .unwrap();
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let mut b = MonotoneBuilder::new();
        let leaves: Vec<NodeId> = (0..4).map(|v| b.var(v)).collect();
        let p = b.times(leaves[0], leaves[2]);
        let q = b.times(leaves[1], leaves[3]);
        let s1 = b.plus(p, q);
        let out = b.plus(s1, p);
        let bad = b.finish(out).unwrap();
        assert!(!verify_method(&s, &bad).unwrap());
    }

    #[test]
    fn restrict_folds_constants() {
        let mc = weighted_sum_circuit();
        let map = BTreeMap::from([(1, Subst::Zero), (2, Subst::One), (3, Subst::Var(9))]);
        let r = mc.restrict(&map).unwrap();
        assert_eq!(r.expand_symbolic().unwrap().dump(), "2: v9\n");
        assert_eq!(r.size(), 1);
        let expected = mc.expand_symbolic().unwrap().restrict(&map).unwrap();
        assert_eq!(r.expand_symbolic().unwrap(), expected);
        let all_zero = BTreeMap::from([(1, Subst::Zero), (2, Subst::Zero), (3, Subst::One)]);
        assert!(mc.restrict(&all_zero).unwrap().expand_symbolic().unwrap().is_zero());
        assert!(mc.restrict(&BTreeMap::new()).is_err());
    }
}
