use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::circuit::canonical_json;
use crate::error::{Error, Result};
use crate::network::{find_plan, Algebra, ContractionPlan, Network, PlanMode, TensorNetwork};
use crate::poly::SparsePolynomial;

pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-12;

/// Limits on symbolic contraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicCaps {
    pub max_variables: usize,
    pub max_terms: usize,
}

impl Default for SymbolicCaps {
    fn default() -> Self {
        SymbolicCaps {
            max_variables: 64,
            max_terms: 1_000_000,
        }
    }
}

/// Network shape with nonzero-location masks and no values.
#[derive(Clone, Debug, PartialEq)]
pub struct Skeleton {
    masks: Network<bool>,
}

/// Variable `v` names entry `entries[v] = (tensor id, index)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VariableTable {
    entries: Vec<(usize, usize)>,
    #[serde(skip)]
    lookup: BTreeMap<(usize, usize), u32>,
}

impl VariableTable {
    fn from_masks(masks: &Network<bool>) -> Self {
        let mut entries = Vec::new();
        for id in masks.live_ids() {
            let t = masks.tensor(id).expect("live");
            entries.extend(
                t.entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, &nz)| nz)
                    .map(|(i, _)| (id, i)),
            );
        }
        let lookup = entries.iter().enumerate().map(|(v, &k)| (k, v as u32)).collect();
        VariableTable { entries, lookup }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, var: u32) -> Option<(usize, usize)> {
        self.entries.get(var as usize).copied()
    }

    pub fn var(&self, tensor: usize, index: usize) -> Option<u32> {
        self.lookup.get(&(tensor, index)).copied()
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Value of every variable in `net`, indexed by variable id.
    pub fn values(&self, net: &TensorNetwork) -> Result<Vec<Complex64>> {
        self.entries
            .iter()
            .map(|&(t, i)| net.tensor(t).map(|x| *x.entry(i)).ok_or(Error::MissingTensor(t)))
            .collect()
    }
}

/// Skeleton of `net`: entries with `|value| > zero_tolerance` are nonzero.
/// Variables are numbered in (tensor id, index) order.
pub fn extract_skeleton(net: &TensorNetwork, zero_tolerance: f64) -> (Skeleton, VariableTable) {
    let skel = Skeleton {
        masks: net.masks(zero_tolerance),
    };
    let table = skel.variable_table();
    (skel, table)
}

impl Skeleton {
    pub fn from_masks(masks: Network<bool>) -> Self {
        Skeleton { masks }
    }

    pub fn masks(&self) -> &Network<bool> {
        &self.masks
    }

    pub fn is_closed(&self) -> bool {
        self.masks.is_closed()
    }

    pub fn variable_table(&self) -> VariableTable {
        VariableTable::from_masks(&self.masks)
    }

    pub fn num_variables(&self) -> usize {
        self.masks
            .live_ids()
            .iter()
            .map(|&id| {
                self.masks
                    .tensor(id)
                    .expect("live")
                    .entries()
                    .iter()
                    .filter(|&&b| b)
                    .count()
            })
            .sum()
    }

    /// Nonzero indices of tensor `id`.
    pub fn support(&self, id: usize) -> Option<Vec<usize>> {
        self.masks.tensor(id).map(|t| {
            t.entries()
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect()
        })
    }

    /// The network with each nonzero entry replaced by its own variable.
    pub fn variable_network(&self) -> Network<SparsePolynomial> {
        let table = self.variable_table();
        self.masks.map_entries(|t, i, &nz| {
            if nz {
                SparsePolynomial::var(table.var(t, i).expect("nonzero entry has a variable"))
            } else {
                SparsePolynomial::zero()
            }
        })
    }

    pub fn to_json(&self) -> String {
        canonical_json(&self.file())
    }

    fn file(&self) -> SkeletonFile {
        let live = self.masks.live_ids();
        let renum = |id: usize| live.binary_search(&id).expect("live member");
        SkeletonFile {
            tensors: live
                .iter()
                .map(|&id| SkeletonTensor {
                    rank: self.masks.tensor(id).expect("live").rank(),
                    nonzero: self.support(id).expect("live"),
                })
                .collect(),
            hyperedges: self
                .masks
                .hyperedges()
                .iter()
                .map(|h| h.members.iter().map(|&(t, s)| [renum(t), s]).collect())
                .collect(),
            open: self
                .masks
                .hyperedges()
                .iter()
                .enumerate()
                .filter(|(_, h)| h.open)
                .map(|(k, _)| k)
                .collect(),
        }
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON.
    pub fn id(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Serialize)]
struct SkeletonFile {
    tensors: Vec<SkeletonTensor>,
    hyperedges: Vec<Vec<[usize; 2]>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    open: Vec<usize>,
}

#[derive(Serialize)]
struct SkeletonTensor {
    rank: usize,
    nonzero: Vec<usize>,
}

/// Polynomial arithmetic with a term cap. The first cap violation is kept and
/// all later products short-circuit to zero.
struct PolyAlgebra {
    max_terms: usize,
    error: Option<Error>,
}

impl Algebra<SparsePolynomial> for PolyAlgebra {
    fn is_zero(&self, e: &SparsePolynomial) -> bool {
        e.is_zero()
    }
    fn zero(&mut self) -> SparsePolynomial {
        SparsePolynomial::zero()
    }
    fn mul(&mut self, a: &SparsePolynomial, b: &SparsePolynomial) -> SparsePolynomial {
        if self.error.is_some() {
            return SparsePolynomial::zero();
        }
        match a.mul_capped(b, self.max_terms) {
            Ok(p) => p,
            Err(e) => {
                self.error = Some(e);
                SparsePolynomial::zero()
            }
        }
    }
    fn add(&mut self, mut acc: SparsePolynomial, term: SparsePolynomial) -> SparsePolynomial {
        if self.error.is_some() {
            return acc;
        }
        acc.add_assign(&term);
        if acc.num_terms() > self.max_terms {
            self.error = Some(Error::CapExceeded {
                what: "polynomial terms",
                value: acc.num_terms(),
                cap: self.max_terms,
            });
        }
        acc
    }
}

/// `p(S)` under the default caps, contracted in greedy order.
pub fn associated_polynomial(s: &Skeleton) -> Result<SparsePolynomial> {
    let plan = find_plan(&s.masks, PlanMode::Greedy)?;
    associated_polynomial_with(s, &plan, SymbolicCaps::default())
}

/// `p(S)` contracted along `plan`.
pub fn associated_polynomial_with(
    s: &Skeleton,
    plan: &ContractionPlan,
    caps: SymbolicCaps,
) -> Result<SparsePolynomial> {
    if !s.is_closed() {
        return Err(Error::NotClosed);
    }
    let vars = s.num_variables();
    if vars > caps.max_variables {
        return Err(Error::CapExceeded {
            what: "skeleton variables",
            value: vars,
            cap: caps.max_variables,
        });
    }
    let mut alg = PolyAlgebra {
        max_terms: caps.max_terms,
        error: None,
    };
    let (t, _) = s.variable_network().contract_plan_with(plan, &mut alg)?;
    match alg.error {
        Some(e) => Err(e),
        None => Ok(t.entry(0).clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QuantumCircuit};
    use crate::network::{circuit_to_network, slot_bit, Hyperedge, Tensor};
    use num_bigint::BigUint;

    /// Sum over every labeling of the hyperedges of the product of entry variables.
    fn brute_force_polynomial(s: &Skeleton) -> SparsePolynomial {
        let table = s.variable_table();
        let net = s.masks();
        let edges = net.hyperedges();
        let live = net.live_ids();
        let mut terms = Vec::new();
        'labelings: for lab in 0..1usize << edges.len() {
            let mut mono = Vec::new();
            for &id in &live {
                let t = net.tensor(id).unwrap();
                let mut idx = 0;
                for (k, h) in edges.iter().enumerate() {
                    if lab >> k & 1 == 1 {
                        for &(tt, slot) in &h.members {
                            if tt == id {
                                idx |= slot_bit(t.rank(), slot);
                            }
                        }
                    }
                }
                if !*t.entry(idx) {
                    continue 'labelings;
                }
                mono.push(table.var(id, idx).unwrap());
            }
            terms.push((mono, BigUint::from(1u32)));
        }
        SparsePolynomial::from_terms(terms)
    }

    fn h_sandwich() -> TensorNetwork {
        let q = QuantumCircuit::new(1, vec![Gate::h(0)]).unwrap();
        circuit_to_network(&q, &[false], &[false]).unwrap()
    }

    #[test]
    fn hadamard_mask_is_full() {
        let (s, table) = extract_skeleton(&h_sandwich(), DEFAULT_ZERO_TOLERANCE);
        assert_eq!(s.support(1).unwrap(), vec![0, 1, 2, 3]);
        // ket |0> and bra <0| have one nonzero each.
        assert_eq!(table.len(), 6);
        assert_eq!(table.entry(0), Some((0, 0)));
        assert_eq!(table.var(1, 2), Some(3));
    }

    #[test]
    fn cnot_mask_has_four_entries() {
        let q = QuantumCircuit::new(2, vec![Gate::cnot(0, 1)]).unwrap();
        let net = circuit_to_network(&q, &[false; 2], &[false; 2]).unwrap();
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let t = s.masks().tensor(2).unwrap();
        assert_eq!(t.rank(), 4);
        assert_eq!(s.support(2).unwrap().len(), 4);
    }

    #[test]
    fn rank_one_pair() {
        let a = Tensor::new(1, vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let c = Tensor::new(1, vec![Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)]).unwrap();
        let net = Network::new(
            vec![a, c],
            vec![Hyperedge {
                members: vec![(0, 0), (1, 0)],
                open: false,
            }],
        )
        .unwrap();
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let p = associated_polynomial(&s).unwrap();
        assert_eq!(p, SparsePolynomial::var(0).mul(&SparsePolynomial::var(1)));
    }

    #[test]
    fn open_skeleton_is_rejected() {
        let q = QuantumCircuit::new(1, vec![Gate::h(0)]).unwrap();
        let net = crate::network::circuit_to_open_network(&q).unwrap();
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        assert!(!s.is_closed());
        assert_eq!(associated_polynomial(&s), Err(Error::NotClosed));
    }

    #[test]
    fn matches_brute_force_and_is_order_independent() {
        let q = QuantumCircuit::new(2, vec![Gate::h(0), Gate::cnot(0, 1), Gate::t(1), Gate::h(1)]).unwrap();
        let net = circuit_to_network(&q, &[false, false], &[true, false]).unwrap();
        let (s, table) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let oracle = brute_force_polynomial(&s);
        for mode in [PlanMode::Greedy, PlanMode::LeftToRight] {
            let plan = find_plan(s.masks(), mode).unwrap();
            let p = associated_polynomial_with(&s, &plan, SymbolicCaps::default()).unwrap();
            assert_eq!(p, oracle);
        }
        let values = table.values(&net).unwrap();
        let v = oracle.eval_complex(|x| values.get(x as usize).copied()).unwrap();
        let direct = net.contract_all(&find_plan(&net, PlanMode::Greedy).unwrap()).unwrap();
        assert!((v - direct).norm() < 1e-12);
    }

    #[test]
    fn caps_are_enforced() {
        let (s, _) = extract_skeleton(&h_sandwich(), DEFAULT_ZERO_TOLERANCE);
        let plan = find_plan(s.masks(), PlanMode::Greedy).unwrap();
        let tight = SymbolicCaps {
            max_variables: 3,
            max_terms: 10,
        };
        assert!(matches!(
            associated_polynomial_with(&s, &plan, tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn id_is_stable() {
        let (s, _) = extract_skeleton(&h_sandwich(), DEFAULT_ZERO_TOLERANCE);
        assert_eq!(s.id(), s.clone().id());
        assert_eq!(s.id().len(), 16);
    }
}
