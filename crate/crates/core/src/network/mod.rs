//! Tensor networks over binary indices.
//!
//! A tensor of rank `r` stores `2^r` entries; slot 0 is the most significant
//! bit of the entry index. Hyperedges identify any number of slots. A
//! hyperedge flagged `open` is a free index of the whole network; a network is
//! closed when no open hyperedge remains.
//!
//! Contraction is generic over an [`Algebra`] so the same routine drives
//! numeric contraction, structural (mask) contraction, symbolic contraction
//! and monotone-circuit emission.

mod plan;
mod preprocess;

pub use plan::{
    find_plan, left_to_right_plan, multiplication_count, structural_multiplication_count, ContractionPlan, PlanMode,
};
pub use preprocess::preprocess_diagonal;

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{canonical_json, QuantumCircuit};
use crate::error::{Error, Result};

/// Largest tensor rank the dense representation accepts.
pub const MAX_RANK: usize = 26;

/// A `(tensor id, slot)` pair.
pub type SlotRef = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<E> {
    rank: usize,
    entries: Vec<E>,
}

impl<E> Tensor<E> {
    pub fn new(rank: usize, entries: Vec<E>) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::CapExceeded {
                what: "tensor rank",
                value: rank,
                cap: MAX_RANK,
            });
        }
        if entries.len() != 1 << rank {
            return Err(Error::InvalidNetwork(format!(
                "rank {rank} tensor needs {} entries, got {}",
                1usize << rank,
                entries.len()
            )));
        }
        Ok(Tensor { rank, entries })
    }

    pub fn scalar(value: E) -> Self {
        Tensor {
            rank: 0,
            entries: vec![value],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn entry(&self, index: usize) -> &E {
        &self.entries[index]
    }

    pub fn map<F, T>(&self, f: F) -> Tensor<T>
    where
        F: FnMut(&E) -> T,
    {
        Tensor {
            rank: self.rank,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn map_indexed<F, T>(&self, mut f: F) -> Tensor<T>
    where
        F: FnMut(usize, &E) -> T,
    {
        Tensor {
            rank: self.rank,
            entries: self.entries.iter().enumerate().map(|(i, e)| f(i, e)).collect(),
        }
    }
}

/// Bit of `slot` inside an entry index of a rank-`rank` tensor.
#[inline]
pub fn slot_bit(rank: usize, slot: usize) -> usize {
    1 << (rank - 1 - slot)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub members: Vec<SlotRef>,
    pub open: bool,
}

/// Semiring-like operations used by contraction.
///
/// `add` and `mul` take `&mut self` so an implementation can record what it
/// does (monotone-circuit emission, cost counting).
pub trait Algebra<E> {
    fn is_zero(&self, e: &E) -> bool;
    fn zero(&mut self) -> E;
    fn mul(&mut self, a: &E, b: &E) -> E;
    fn add(&mut self, acc: E, term: E) -> E;
}

/// Plain complex arithmetic.
pub struct ComplexAlgebra;

impl Algebra<Complex64> for ComplexAlgebra {
    fn is_zero(&self, e: &Complex64) -> bool {
        e.re == 0.0 && e.im == 0.0
    }
    fn zero(&mut self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn mul(&mut self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn add(&mut self, acc: Complex64, term: Complex64) -> Complex64 {
        acc + term
    }
}

/// Boolean (nonzero-pattern) arithmetic.
pub struct MaskAlgebra;

impl Algebra<bool> for MaskAlgebra {
    fn is_zero(&self, e: &bool) -> bool {
        !*e
    }
    fn zero(&mut self) -> bool {
        false
    }
    fn mul(&mut self, a: &bool, b: &bool) -> bool {
        *a && *b
    }
    fn add(&mut self, acc: bool, term: bool) -> bool {
        acc || term
    }
}

/// Products formed during one pairwise step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepCost {
    /// `2^(number of indices touched)`: every product a dense contraction forms.
    pub dense: u128,
    /// Products whose two operands are both nonzero.
    pub structural: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network<E> {
    tensors: Vec<Option<Tensor<E>>>,
    hyperedges: Vec<Hyperedge>,
}

pub type TensorNetwork = Network<Complex64>;

impl<E: Clone> Network<E> {
    /// Builds a network. Slots not covered by any hyperedge become open
    /// singleton hyperedges.
    pub fn new(tensors: Vec<Tensor<E>>, hyperedges: Vec<Hyperedge>) -> Result<Self> {
        let mut seen: Vec<Vec<bool>> = tensors.iter().map(|t| vec![false; t.rank]).collect();
        for h in &hyperedges {
            for &(t, s) in &h.members {
                let slots = seen.get_mut(t).ok_or(Error::MissingTensor(t))?;
                let flag = slots
                    .get_mut(s)
                    .ok_or_else(|| Error::InvalidNetwork(format!("slot {s} out of range for tensor {t}")))?;
                if *flag {
                    return Err(Error::InvalidNetwork(format!("slot ({t}, {s}) in two hyperedges")));
                }
                *flag = true;
            }
        }
        let mut hyperedges: Vec<Hyperedge> = hyperedges
            .into_iter()
            .filter(|h| !h.members.is_empty() || h.open)
            .collect();
        for (t, slots) in seen.iter().enumerate() {
            for (s, &covered) in slots.iter().enumerate() {
                if !covered {
                    hyperedges.push(Hyperedge {
                        members: vec![(t, s)],
                        open: true,
                    });
                }
            }
        }
        Ok(Network {
            tensors: tensors.into_iter().map(Some).collect(),
            hyperedges,
        })
    }

    pub fn tensor(&self, id: usize) -> Option<&Tensor<E>> {
        self.tensors.get(id).and_then(Option::as_ref)
    }

    /// Ids of tensors currently present, ascending.
    pub fn live_ids(&self) -> Vec<usize> {
        self.tensors
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.as_ref().map(|_| i))
            .collect()
    }

    pub fn num_live(&self) -> usize {
        self.tensors.iter().filter(|t| t.is_some()).count()
    }

    /// Id the next contraction result will receive.
    pub fn next_id(&self) -> usize {
        self.tensors.len()
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn is_closed(&self) -> bool {
        self.hyperedges.iter().all(|h| !h.open)
    }

    pub fn num_open(&self) -> usize {
        self.hyperedges.iter().filter(|h| h.open).count()
    }

    /// Same shape with each entry passed through `f(tensor id, index, entry)`.
    pub fn map_entries<F, T>(&self, mut f: F) -> Network<T>
    where
        F: FnMut(usize, usize, &E) -> T,
    {
        Network {
            tensors: self
                .tensors
                .iter()
                .enumerate()
                .map(|(id, t)| t.as_ref().map(|t| t.map_indexed(|i, e| f(id, i, e))))
                .collect(),
            hyperedges: self.hyperedges.clone(),
        }
    }

    pub(crate) fn replace_tensor(&mut self, id: usize, tensor: Tensor<E>) {
        self.tensors[id] = Some(tensor);
    }

    pub(crate) fn hyperedges_mut(&mut self) -> &mut Vec<Hyperedge> {
        &mut self.hyperedges
    }

    /// Hyperedge indices touching any of `ids`, ascending.
    pub(crate) fn touching(&self, ids: &[usize]) -> Vec<usize> {
        self.hyperedges
            .iter()
            .enumerate()
            .filter(|(_, h)| h.members.iter().any(|(t, _)| ids.contains(t)))
            .map(|(k, _)| k)
            .collect()
    }

    fn check_live(&self, id: usize) -> Result<()> {
        if self.tensor(id).is_some() {
            Ok(())
        } else {
            Err(Error::MissingTensor(id))
        }
    }

    /// Replaces tensors `i` and `j` with their contraction over every
    /// hyperedge no other tensor touches. The result gets id [`next_id`](Self::next_id).
    pub fn contract_pair_with<A: Algebra<E>>(&mut self, i: usize, j: usize, alg: &mut A) -> Result<StepCost> {
        if i == j {
            return Err(Error::InvalidPlan(format!("cannot contract tensor {i} with itself")));
        }
        self.check_live(i)?;
        self.check_live(j)?;
        self.contract_group(&[i, j], alg)
    }

    /// Sums out the hyperedges that only touch `id` (traces). Result gets a new id.
    pub fn close_single_with<A: Algebra<E>>(&mut self, id: usize, alg: &mut A) -> Result<StepCost> {
        self.check_live(id)?;
        self.contract_group(&[id], alg)
    }

    fn contract_group<A: Algebra<E>>(&mut self, ids: &[usize], alg: &mut A) -> Result<StepCost> {
        let touched = self.touching(ids);
        let (internal, external): (Vec<usize>, Vec<usize>) = touched.iter().partition(|&&k| {
            let h = &self.hyperedges[k];
            !h.open && h.members.iter().all(|(t, _)| ids.contains(t))
        });
        if external.len() > MAX_RANK {
            return Err(Error::CapExceeded {
                what: "tensor rank",
                value: external.len(),
                cap: MAX_RANK,
            });
        }
        if touched.len() > 40 {
            return Err(Error::CapExceeded {
                what: "indices in one contraction step",
                value: touched.len(),
                cap: 40,
            });
        }

        // Offsets each labeling of a hyperedge contributes to each operand's entry index.
        let offsets = |edges: &[usize], id: usize| -> Vec<usize> {
            let rank = self.tensor(id).map(|t| t.rank).unwrap_or(0);
            edges
                .iter()
                .map(|&k| {
                    self.hyperedges[k]
                        .members
                        .iter()
                        .filter(|(t, _)| *t == id)
                        .map(|&(_, s)| slot_bit(rank, s))
                        .sum()
                })
                .collect()
        };
        // Table over all assignments; bit (len-1-r) of the assignment labels edges[r].
        let table = |offs: &[usize]| -> Vec<usize> {
            let n = offs.len();
            (0..1usize << n)
                .map(|a| (0..n).filter(|r| (a >> (n - 1 - r)) & 1 == 1).map(|r| offs[r]).sum())
                .collect()
        };

        let ext_tables: Vec<Vec<usize>> = ids.iter().map(|&id| table(&offsets(&external, id))).collect();
        let int_tables: Vec<Vec<usize>> = ids.iter().map(|&id| table(&offsets(&internal, id))).collect();
        let operands: Vec<&Tensor<E>> = ids.iter().map(|&id| self.tensor(id).expect("live")).collect();

        let mut cost = StepCost::default();
        if ids.len() == 2 {
            cost.dense = 1u128 << touched.len();
        }
        let n_ext = 1usize << external.len();
        let n_int = 1usize << internal.len();
        let mut entries = Vec::with_capacity(n_ext);
        for e in 0..n_ext {
            let mut acc: Option<E> = None;
            for t in 0..n_int {
                let term = if ids.len() == 2 {
                    let a = operands[0].entry(ext_tables[0][e] + int_tables[0][t]);
                    let b = operands[1].entry(ext_tables[1][e] + int_tables[1][t]);
                    if alg.is_zero(a) || alg.is_zero(b) {
                        continue;
                    }
                    cost.structural += 1;
                    alg.mul(a, b)
                } else {
                    let a = operands[0].entry(ext_tables[0][e] + int_tables[0][t]);
                    if alg.is_zero(a) {
                        continue;
                    }
                    a.clone()
                };
                acc = Some(match acc {
                    None => term,
                    Some(s) => alg.add(s, term),
                });
            }
            entries.push(match acc {
                Some(v) => v,
                None => alg.zero(),
            });
        }

        let new_id = self.tensors.len();
        let result = Tensor {
            rank: external.len(),
            entries,
        };
        for &id in ids {
            self.tensors[id] = None;
        }
        self.tensors.push(Some(result));
        for (r, &k) in external.iter().enumerate() {
            let h = &mut self.hyperedges[k];
            h.members.retain(|(t, _)| !ids.contains(t));
            h.members.push((new_id, r));
        }
        let internal: BTreeSet<usize> = internal.into_iter().collect();
        let mut k = 0;
        self.hyperedges.retain(|_| {
            let keep = !internal.contains(&k);
            k += 1;
            keep
        });
        Ok(cost)
    }

    /// Applies every step of `plan`, then closes the remaining tensor.
    /// Returns the final tensor and the cost of each pairwise step.
    pub fn contract_plan_with<A: Algebra<E>>(
        &self,
        plan: &ContractionPlan,
        alg: &mut A,
    ) -> Result<(Tensor<E>, Vec<StepCost>)> {
        let mut net = self.clone();
        let mut costs = Vec::with_capacity(plan.steps.len());
        for &(i, j) in &plan.steps {
            let c = net.contract_pair_with(i, j, alg).map_err(|e| match e {
                Error::MissingTensor(id) => {
                    Error::InvalidPlan(format!("step ({i}, {j}) refers to missing tensor {id}"))
                }
                other => other,
            })?;
            costs.push(c);
        }
        let live = net.live_ids();
        match live.as_slice() {
            [] => Ok((Tensor::scalar(alg.zero()), costs)),
            [only] => {
                net.close_single_with(*only, alg)?;
                let last = *net.live_ids().last().expect("closed tensor");
                Ok((net.tensors[last].take().expect("live"), costs))
            }
            _ => Err(Error::InvalidPlan(format!(
                "plan leaves {} tensors uncontracted",
                live.len()
            ))),
        }
    }

    /// Rank of each live tensor and the members of each hyperedge.
    pub fn shape(&self) -> NetworkShape {
        NetworkShape {
            ranks: self.tensors.iter().map(|t| t.as_ref().map(|t| t.rank)).collect(),
            hyperedges: self.hyperedges.clone(),
        }
    }
}

/// Shape of a network: ranks and identifications, no values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkShape {
    pub ranks: Vec<Option<usize>>,
    pub hyperedges: Vec<Hyperedge>,
}

impl NetworkShape {
    pub fn is_closed(&self) -> bool {
        self.hyperedges.iter().all(|h| !h.open)
    }
}

impl TensorNetwork {
    pub fn contract_pair(&self, i: usize, j: usize) -> Result<TensorNetwork> {
        let mut net = self.clone();
        net.contract_pair_with(i, j, &mut ComplexAlgebra)?;
        Ok(net)
    }

    /// Scalar value of a closed network under `plan`.
    pub fn contract_all(&self, plan: &ContractionPlan) -> Result<Complex64> {
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        let (t, _) = self.contract_plan_with(plan, &mut ComplexAlgebra)?;
        Ok(t.entries[0])
    }

    /// Nonzero pattern: `|entry| > zero_tolerance`.
    pub fn masks(&self, zero_tolerance: f64) -> Network<bool> {
        self.map_entries(|_, _, e| e.norm() > zero_tolerance)
    }

    pub fn to_json(&self) -> String {
        canonical_json(&NetworkFile::from(self))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// `<out| C |in>` as a closed network. Tensor ids: one rank-1 ket per qubit,
/// then one tensor per gate, then one rank-1 bra per qubit.
pub fn circuit_to_network(c: &QuantumCircuit, in_state: &[bool], out_state: &[bool]) -> Result<TensorNetwork> {
    let q = c.num_qubits();
    for s in [in_state, out_state] {
        if s.len() != q {
            return Err(Error::Shape {
                expected: q,
                got: s.len(),
            });
        }
    }
    let mut b = CircuitNetworkBuilder::new(q);
    for (w, &bit) in in_state.iter().enumerate() {
        b.attach_ket(w, basis_vector(bit));
    }
    for g in c.gates() {
        b.add_gate(g.wires(), &g.unitary())?;
    }
    for (w, &bit) in out_state.iter().enumerate() {
        b.attach_bra(w, basis_vector(bit));
    }
    b.finish()
}

/// The circuit's gate tensors alone, with every wire end left open.
pub fn circuit_to_open_network(c: &QuantumCircuit) -> Result<TensorNetwork> {
    let mut b = CircuitNetworkBuilder::new(c.num_qubits());
    for g in c.gates() {
        b.add_gate(g.wires(), &g.unitary())?;
    }
    b.finish()
}

fn basis_vector(bit: bool) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if bit {
        vec![zero, one]
    } else {
        vec![one, zero]
    }
}

/// Wires a circuit left to right. Gate tensor slots are `[inputs..., outputs...]`
/// in gate-wire order, with entry `T[in, out] = U[out][in]`.
struct CircuitNetworkBuilder {
    tensors: Vec<Tensor<Complex64>>,
    hyperedges: Vec<Hyperedge>,
    /// Current open end of each wire.
    ends: Vec<Option<SlotRef>>,
}

impl CircuitNetworkBuilder {
    fn new(q: usize) -> Self {
        CircuitNetworkBuilder {
            tensors: Vec::new(),
            hyperedges: Vec::new(),
            ends: vec![None; q],
        }
    }

    fn connect(&mut self, wire: usize, slot: SlotRef) {
        if let Some(prev) = self.ends[wire] {
            self.hyperedges.push(Hyperedge {
                members: vec![prev, slot],
                open: false,
            });
        }
    }

    fn attach_ket(&mut self, wire: usize, v: Vec<Complex64>) {
        let id = self.tensors.len();
        self.tensors.push(Tensor { rank: 1, entries: v });
        self.ends[wire] = Some((id, 0));
    }

    fn attach_bra(&mut self, wire: usize, v: Vec<Complex64>) {
        let id = self.tensors.len();
        self.tensors.push(Tensor { rank: 1, entries: v });
        self.connect(wire, (id, 0));
        self.ends[wire] = None;
    }

    fn add_gate(&mut self, wires: &[usize], u: &[Complex64]) -> Result<()> {
        let k = wires.len();
        let dim = 1usize << k;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for input in 0..dim {
            for out in 0..dim {
                entries[(input << k) | out] = u[out * dim + input];
            }
        }
        let id = self.tensors.len();
        self.tensors.push(Tensor::new(2 * k, entries)?);
        for (s, &w) in wires.iter().enumerate() {
            self.connect(w, (id, s));
            self.ends[w] = Some((id, k + s));
        }
        Ok(())
    }

    fn finish(self) -> Result<TensorNetwork> {
        Network::new(self.tensors, self.hyperedges)
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    tensors: Vec<TensorFile>,
    hyperedges: Vec<Vec<[usize; 2]>>,
    /// Indices into `hyperedges` of the open ones.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    open: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TensorFile {
    rank: usize,
    entries: Vec<[f64; 2]>,
}

impl From<&TensorNetwork> for NetworkFile {
    fn from(net: &TensorNetwork) -> Self {
        // Live tensors are renumbered densely.
        let live = net.live_ids();
        let renum = |id: usize| live.binary_search(&id).expect("live member");
        NetworkFile {
            tensors: live
                .iter()
                .map(|&id| {
                    let t = net.tensor(id).expect("live");
                    TensorFile {
                        rank: t.rank,
                        entries: t.entries.iter().map(|c| [c.re, c.im]).collect(),
                    }
                })
                .collect(),
            hyperedges: net
                .hyperedges
                .iter()
                .map(|h| h.members.iter().map(|&(t, s)| [renum(t), s]).collect())
                .collect(),
            open: net
                .hyperedges
                .iter()
                .enumerate()
                .filter(|(_, h)| h.open)
                .map(|(k, _)| k)
                .collect(),
        }
    }
}

impl TryFrom<NetworkFile> for TensorNetwork {
    type Error = Error;

    fn try_from(file: NetworkFile) -> Result<Self> {
        let tensors = file
            .tensors
            .into_iter()
            .map(|t| {
                Tensor::new(
                    t.rank,
                    t.entries.into_iter().map(|[a, b]| Complex64::new(a, b)).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let n = file.hyperedges.len();
        if let Some(&k) = file.open.iter().find(|&&k| k >= n) {
            return Err(Error::InvalidNetwork(format!("open hyperedge {k} out of range")));
        }
        let hyperedges = file
            .hyperedges
            .into_iter()
            .enumerate()
            .map(|(k, members)| Hyperedge {
                members: members.into_iter().map(|[t, s]| (t, s)).collect(),
                open: file.open.contains(&k),
            })
            .collect();
        Network::new(tensors, hyperedges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn vector(a: f64, b: f64) -> Tensor<Complex64> {
        Tensor::new(1, vec![c(a), c(b)]).unwrap()
    }

    fn edge(members: &[SlotRef]) -> Hyperedge {
        Hyperedge {
            members: members.to_vec(),
            open: false,
        }
    }

    #[test]
    fn inner_product_of_two_vectors() {
        let net = Network::new(vec![vector(2.0, 3.0), vector(5.0, 7.0)], vec![edge(&[(0, 0), (1, 0)])]).unwrap();
        let out = net.contract_pair(0, 1).unwrap();
        let t = out.tensor(2).unwrap();
        assert_eq!(t.rank(), 0);
        assert_eq!(t.entry(0), &c(31.0));
        let plan = ContractionPlan { steps: vec![(0, 1)] };
        assert_eq!(net.contract_all(&plan).unwrap(), c(31.0));
        assert_eq!(multiplication_count(&net, &plan).unwrap(), 2);
    }

    #[test]
    fn matrix_times_vector() {
        // M = [[1,2],[3,4]] with slots (row, col); v = [5,6] on col.
        let m = Tensor::new(2, vec![c(1.0), c(2.0), c(3.0), c(4.0)]).unwrap();
        let net = Network::new(vec![m, vector(5.0, 6.0)], vec![edge(&[(0, 1), (1, 0)])]).unwrap();
        assert!(!net.is_closed());
        let out = net.contract_pair(0, 1).unwrap();
        let t = out.tensor(2).unwrap();
        assert_eq!(t.entries(), &[c(17.0), c(39.0)]);
        assert_eq!(out.num_open(), 1);
    }

    #[test]
    fn hadamard_between_zero_states() {
        let q = QuantumCircuit::new(1, vec![Gate::h(0)]).unwrap();
        let net = circuit_to_network(&q, &[false], &[false]).unwrap();
        assert_eq!(net.num_live(), 3);
        assert!(net.is_closed());
        let plan = find_plan(&net, PlanMode::Greedy).unwrap();
        let v = net.contract_all(&plan).unwrap();
        assert!((v.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn identity_circuit_is_one_on_matching_states() {
        let q = QuantumCircuit::new(2, vec![]).unwrap();
        let net = circuit_to_network(&q, &[true, false], &[true, false]).unwrap();
        let plan = find_plan(&net, PlanMode::Exhaustive).unwrap();
        assert_eq!(net.contract_all(&plan).unwrap(), c(1.0));
        let net = circuit_to_network(&q, &[true, false], &[false, false]).unwrap();
        assert_eq!(net.contract_all(&plan).unwrap(), c(0.0));
    }

    #[test]
    fn errors() {
        let net = Network::new(vec![vector(1.0, 0.0), vector(1.0, 0.0)], vec![edge(&[(0, 0), (1, 0)])]).unwrap();
        assert_eq!(net.contract_pair(0, 5), Err(Error::MissingTensor(5)));
        assert!(net.contract_pair(1, 1).is_err());
        let open = Network::new(vec![vector(1.0, 0.0)], vec![]).unwrap();
        assert_eq!(open.contract_all(&ContractionPlan::default()), Err(Error::NotClosed));
        let short = ContractionPlan::default();
        assert!(matches!(net.contract_all(&short), Err(Error::InvalidPlan(_))));
        assert!(Network::new(vec![vector(1.0, 0.0)], vec![edge(&[(0, 0)]), edge(&[(0, 0)])]).is_err());
        assert!(Tensor::new(2, vec![c(1.0)]).is_err());
    }

    #[test]
    fn trace_of_single_tensor() {
        let m = Tensor::new(2, vec![c(1.0), c(2.0), c(3.0), c(4.0)]).unwrap();
        let net = Network::new(vec![m], vec![edge(&[(0, 0), (0, 1)])]).unwrap();
        assert_eq!(net.contract_all(&ContractionPlan::default()).unwrap(), c(5.0));
    }

    #[test]
    fn json_round_trip() {
        let q = QuantumCircuit::new(2, vec![Gate::h(0), Gate::cnot(0, 1)]).unwrap();
        let net = circuit_to_network(&q, &[false, false], &[true, true]).unwrap();
        let text = net.to_json();
        let back = TensorNetwork::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let plan = find_plan(&net, PlanMode::Greedy).unwrap();
        assert_eq!(back.contract_all(&plan).unwrap(), net.contract_all(&plan).unwrap());
    }
}
