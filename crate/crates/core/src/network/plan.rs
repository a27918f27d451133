use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Hyperedge, MaskAlgebra, Network};
use crate::error::{Error, Result};

/// Ordered pairwise merges. Each step's result takes the next unused id, so
/// later steps can refer to earlier results.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionPlan {
    pub steps: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanMode {
    /// Minimum dense multiplication count over all contraction trees.
    Exhaustive,
    /// Repeatedly merge the pair with the smallest result rank.
    Greedy,
    /// Fold tensors in ascending id order.
    LeftToRight,
}

impl std::str::FromStr for PlanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(PlanMode::Exhaustive),
            "greedy" => Ok(PlanMode::Greedy),
            "left-to-right" => Ok(PlanMode::LeftToRight),
            other => Err(Error::InvalidPlan(format!("unknown plan mode {other:?}"))),
        }
    }
}

/// Largest live-tensor count exhaustive search accepts.
pub const EXHAUSTIVE_CAP: usize = 8;

/// Index bookkeeping without entries.
struct ShapeSim {
    live: BTreeSet<usize>,
    next: usize,
    hyperedges: Vec<Hyperedge>,
}

impl ShapeSim {
    fn new<E: Clone>(net: &Network<E>) -> Self {
        ShapeSim {
            live: net.live_ids().into_iter().collect(),
            next: net.next_id(),
            hyperedges: net.hyperedges().to_vec(),
        }
    }

    /// (indices touched, result rank) of merging `i` and `j`.
    fn probe(&self, i: usize, j: usize) -> (usize, usize) {
        let mut touched = 0;
        let mut external = 0;
        for h in &self.hyperedges {
            let hits = h.members.iter().any(|&(t, _)| t == i || t == j);
            if !hits {
                continue;
            }
            touched += 1;
            if h.open || h.members.iter().any(|&(t, _)| t != i && t != j) {
                external += 1;
            }
        }
        (touched, external)
    }

    fn merge(&mut self, i: usize, j: usize) -> Result<usize> {
        if i == j {
            return Err(Error::InvalidPlan(format!("step ({i}, {j}) repeats a tensor")));
        }
        for id in [i, j] {
            if !self.live.contains(&id) {
                return Err(Error::InvalidPlan(format!(
                    "step ({i}, {j}) refers to missing tensor {id}"
                )));
            }
        }
        let (touched, _) = self.probe(i, j);
        let id = self.next;
        self.next += 1;
        self.live.remove(&i);
        self.live.remove(&j);
        self.live.insert(id);
        self.hyperedges.retain_mut(|h| {
            let hits = h.members.iter().any(|&(t, _)| t == i || t == j);
            if !hits {
                return true;
            }
            h.members.retain(|&(t, _)| t != i && t != j);
            if h.open || !h.members.is_empty() {
                h.members.push((id, 0));
                true
            } else {
                false
            }
        });
        Ok(touched)
    }
}

/// Sum over steps of `2^(indices touched)`: every product a dense pairwise
/// contraction forms.
pub fn multiplication_count<E: Clone>(net: &Network<E>, plan: &ContractionPlan) -> Result<u128> {
    let mut sim = ShapeSim::new(net);
    let mut total = 0u128;
    for &(i, j) in &plan.steps {
        let touched = sim.merge(i, j)?;
        total += 1u128 << touched;
    }
    if sim.live.len() > 1 {
        return Err(Error::InvalidPlan(format!(
            "plan leaves {} tensors uncontracted",
            sim.live.len()
        )));
    }
    Ok(total)
}

/// Products whose operands are both structurally nonzero under `masks`.
pub fn structural_multiplication_count(masks: &Network<bool>, plan: &ContractionPlan) -> Result<u128> {
    let (_, costs) = masks.contract_plan_with(plan, &mut MaskAlgebra)?;
    Ok(costs.iter().map(|c| c.structural).sum())
}

pub fn left_to_right_plan<E: Clone>(net: &Network<E>) -> ContractionPlan {
    let live = net.live_ids();
    let mut steps = Vec::new();
    let mut next = net.next_id();
    let mut acc = match live.first() {
        Some(&a) => a,
        None => return ContractionPlan::default(),
    };
    for &t in &live[1..] {
        steps.push((acc, t));
        acc = next;
        next += 1;
    }
    ContractionPlan { steps }
}

pub fn find_plan<E: Clone>(net: &Network<E>, mode: PlanMode) -> Result<ContractionPlan> {
    match mode {
        PlanMode::LeftToRight => Ok(left_to_right_plan(net)),
        PlanMode::Greedy => Ok(greedy(net)),
        PlanMode::Exhaustive => exhaustive(net),
    }
}

fn greedy<E: Clone>(net: &Network<E>) -> ContractionPlan {
    let mut sim = ShapeSim::new(net);
    let mut steps = Vec::new();
    while sim.live.len() > 1 {
        let live: Vec<usize> = sim.live.iter().copied().collect();
        let mut best: Option<(usize, usize, usize)> = None;
        for (a, &i) in live.iter().enumerate() {
            for &j in &live[a + 1..] {
                let (_, rank) = sim.probe(i, j);
                if best.map_or(true, |(r, _, _)| rank < r) {
                    best = Some((rank, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("at least one pair");
        sim.merge(i, j).expect("live pair");
        steps.push((i, j));
    }
    ContractionPlan { steps }
}

fn exhaustive<E: Clone>(net: &Network<E>) -> Result<ContractionPlan> {
    let live = net.live_ids();
    let k = live.len();
    if k > EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded {
            what: "tensors for exhaustive plan search",
            value: k,
            cap: EXHAUSTIVE_CAP,
        });
    }
    if k <= 1 {
        return Ok(ContractionPlan::default());
    }
    let edges = net.hyperedges();
    // touch[h] = bitmask over positions in `live`.
    let touch: Vec<u32> = edges
        .iter()
        .map(|h| {
            h.members
                .iter()
                .map(|(t, _)| 1u32 << live.binary_search(t).expect("live member"))
                .fold(0, |a, b| a | b)
        })
        .collect();
    let full = (1u32 << k) - 1;
    // Index set (as a bitmask over hyperedges) of the tensor holding group `s`.
    let indices = |s: u32| -> u128 {
        let mut m = 0u128;
        for (h, &tm) in touch.iter().enumerate() {
            if tm & s == 0 {
                continue;
            }
            let leaves = tm & !s != 0 || edges[h].open;
            if s.count_ones() == 1 || leaves {
                m |= 1 << h;
            }
        }
        m
    };
    if edges.len() > 128 {
        return Err(Error::CapExceeded {
            what: "hyperedges for exhaustive plan search",
            value: edges.len(),
            cap: 128,
        });
    }
    let idx: Vec<u128> = (0..=full).map(indices).collect();
    let mut best = vec![u128::MAX; (full + 1) as usize];
    let mut split = vec![0u32; (full + 1) as usize];
    for s in 1..=full {
        if s.count_ones() == 1 {
            best[s as usize] = 0;
            continue;
        }
        let low = s & s.wrapping_neg();
        // Enumerate proper subsets containing the lowest member.
        let mut a = (s - 1) & s;
        while a > 0 {
            if a & low != 0 {
                let b = s & !a;
                let step = 1u128 << (idx[a as usize] | idx[b as usize]).count_ones();
                let cost = best[a as usize] + best[b as usize] + step;
                if cost < best[s as usize] {
                    best[s as usize] = cost;
                    split[s as usize] = a;
                }
            }
            a = (a - 1) & s;
        }
    }
    let mut steps = Vec::new();
    let mut next = net.next_id();
    fn emit(s: u32, split: &[u32], live: &[usize], steps: &mut Vec<(usize, usize)>, next: &mut usize) -> usize {
        if s.count_ones() == 1 {
            return live[s.trailing_zeros() as usize];
        }
        let a = split[s as usize];
        let i = emit(a, split, live, steps, next);
        let j = emit(s & !a, split, live, steps, next);
        steps.push((i, j));
        let id = *next;
        *next += 1;
        id
    }
    emit(full, &split, &live, &mut steps, &mut next);
    Ok(ContractionPlan { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Hyperedge, Tensor, TensorNetwork};
    use num_complex::Complex64;

    fn chain(len: usize) -> TensorNetwork {
        // Open-ended chain of matrices M0 M1 ... with edges between neighbours.
        let m = || Tensor::new(2, vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        let tensors = (0..len).map(|_| m()).collect();
        let hyperedges = (0..len - 1)
            .map(|i| Hyperedge {
                members: vec![(i, 1), (i + 1, 0)],
                open: false,
            })
            .collect();
        Network::new(tensors, hyperedges).unwrap()
    }

    /// All sequential plans, enumerated by brute force.
    fn all_plan_costs(net: &TensorNetwork) -> Vec<u128> {
        fn rec(net: &TensorNetwork, steps: &mut Vec<(usize, usize)>, out: &mut Vec<u128>, base: &TensorNetwork) {
            let live = net.live_ids();
            if live.len() <= 1 {
                out.push(multiplication_count(base, &ContractionPlan { steps: steps.clone() }).unwrap());
                return;
            }
            for a in 0..live.len() {
                for b in a + 1..live.len() {
                    let mut n2 = net.clone();
                    n2.contract_pair_with(live[a], live[b], &mut crate::network::ComplexAlgebra)
                        .unwrap();
                    steps.push((live[a], live[b]));
                    rec(&n2, steps, out, base);
                    steps.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(net, &mut Vec::new(), &mut out, net);
        out
    }

    #[test]
    fn two_tensors_give_the_single_pair() {
        let net = chain(2);
        for mode in [PlanMode::Exhaustive, PlanMode::Greedy, PlanMode::LeftToRight] {
            assert_eq!(find_plan(&net, mode).unwrap().steps, vec![(0, 1)]);
        }
    }

    #[test]
    fn exhaustive_is_minimal_on_chain_of_four() {
        let net = chain(4);
        let costs = all_plan_costs(&net);
        let min = *costs.iter().min().unwrap();
        let ex = find_plan(&net, PlanMode::Exhaustive).unwrap();
        let gr = find_plan(&net, PlanMode::Greedy).unwrap();
        assert_eq!(multiplication_count(&net, &ex).unwrap(), min);
        assert!(multiplication_count(&net, &ex).unwrap() <= multiplication_count(&net, &gr).unwrap());
    }

    #[test]
    fn exhaustive_cap() {
        let net = chain(9);
        assert!(matches!(
            find_plan(&net, PlanMode::Exhaustive),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(find_plan(&net, PlanMode::Greedy).unwrap().steps.len(), 8);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let net = chain(3);
        let bad = ContractionPlan { steps: vec![(0, 7)] };
        assert!(matches!(multiplication_count(&net, &bad), Err(Error::InvalidPlan(_))));
        let short = ContractionPlan { steps: vec![(0, 1)] };
        assert!(matches!(multiplication_count(&net, &short), Err(Error::InvalidPlan(_))));
    }

    #[test]
    fn plan_mode_parses() {
        assert_eq!("left-to-right".parse::<PlanMode>().unwrap(), PlanMode::LeftToRight);
        assert!("fast".parse::<PlanMode>().is_err());
    }
}
