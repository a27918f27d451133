use num_complex::Complex64;

use super::{slot_bit, Hyperedge, Tensor, TensorNetwork};

/// Entries at or below this magnitude count as zero when detecting diagonals.
pub const DIAGONAL_TOLERANCE: f64 = 1e-12;

/// Fuses every slot pair in which a tensor is diagonal.
///
/// A tensor is diagonal in `(s1, s2)` when every entry whose bits at `s1` and
/// `s2` differ is zero. Such a pair is collapsed into one slot and the two
/// hyperedges it sat on merge, so a one-qubit diagonal gate becomes a rank-1
/// tensor on a three-way hyperedge and CZ becomes a rank-2 tensor. Slot pairs
/// are taken greedily in ascending `(s1, s2)` order. Tensor ids are unchanged.
pub fn preprocess_diagonal(net: &TensorNetwork) -> TensorNetwork {
    let mut out = net.clone();
    for id in net.live_ids() {
        loop {
            let t = out.tensor(id).expect("live");
            let Some((s1, s2)) = find_diagonal_pair(t) else {
                break;
            };
            let fused = fuse_slots(t, s1, s2);
            out.replace_tensor(id, fused);
            rewire(out.hyperedges_mut(), id, s1, s2);
        }
    }
    out
}

fn find_diagonal_pair(t: &Tensor<Complex64>) -> Option<(usize, usize)> {
    let r = t.rank();
    for s1 in 0..r {
        for s2 in s1 + 1..r {
            let (b1, b2) = (slot_bit(r, s1), slot_bit(r, s2));
            let diagonal = t
                .entries()
                .iter()
                .enumerate()
                .all(|(i, e)| ((i & b1 != 0) == (i & b2 != 0)) || e.norm() <= DIAGONAL_TOLERANCE);
            if diagonal {
                return Some((s1, s2));
            }
        }
    }
    None
}

/// Drops slot `s2`, reading entries on the diagonal `bit(s1) == bit(s2)`.
fn fuse_slots(t: &Tensor<Complex64>, s1: usize, s2: usize) -> Tensor<Complex64> {
    let r = t.rank();
    let new_rank = r - 1;
    let entries = (0..1usize << new_rank)
        .map(|j| {
            // Bits of j in order of the surviving slots.
            let mut old = 0usize;
            let mut pos = 0;
            for s in 0..r {
                if s == s2 {
                    continue;
                }
                if j & slot_bit(new_rank, pos) != 0 {
                    old |= slot_bit(r, s);
                }
                pos += 1;
            }
            if old & slot_bit(r, s1) != 0 {
                old |= slot_bit(r, s2);
            }
            *t.entry(old)
        })
        .collect();
    Tensor::new(new_rank, entries).expect("rank decreases")
}

fn rewire(edges: &mut Vec<Hyperedge>, id: usize, s1: usize, s2: usize) {
    let find = |edges: &[Hyperedge], s: usize| {
        edges
            .iter()
            .position(|h| h.members.contains(&(id, s)))
            .expect("every slot is in a hyperedge")
    };
    let h1 = find(edges, s1);
    let h2 = find(edges, s2);
    edges[h2].members.retain(|&m| m != (id, s2));
    if h1 != h2 {
        let moved = std::mem::take(&mut edges[h2].members);
        let open = edges[h2].open;
        edges[h1].members.extend(moved);
        edges[h1].open |= open;
        edges.remove(h2);
    }
    for h in edges.iter_mut() {
        for m in h.members.iter_mut() {
            if m.0 == id && m.1 > s2 {
                m.1 -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QuantumCircuit};
    use crate::network::{circuit_to_network, find_plan, PlanMode};

    #[test]
    fn one_qubit_diagonal_becomes_rank_one_on_three_way_edge() {
        let q = QuantumCircuit::new(1, vec![Gate::h(0), Gate::t(0), Gate::h(0)]).unwrap();
        let net = circuit_to_network(&q, &[false], &[false]).unwrap();
        let pre = preprocess_diagonal(&net);
        let t = pre.tensor(2).unwrap();
        assert_eq!(t.rank(), 1);
        let edge = pre.hyperedges().iter().find(|h| h.members.contains(&(2, 0))).unwrap();
        assert_eq!(edge.members.len(), 3);
        let plan = find_plan(&net, PlanMode::Greedy).unwrap();
        let pplan = find_plan(&pre, PlanMode::Greedy).unwrap();
        let a = net.contract_all(&plan).unwrap();
        let b = pre.contract_all(&pplan).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn cz_becomes_rank_two() {
        let q = QuantumCircuit::new(2, vec![Gate::h(0), Gate::h(1), Gate::cz(0, 1), Gate::h(1)]).unwrap();
        let net = circuit_to_network(&q, &[false, false], &[false, true]).unwrap();
        let pre = preprocess_diagonal(&net);
        assert_eq!(pre.tensor(4).unwrap().rank(), 2);
        let a = net.contract_all(&find_plan(&net, PlanMode::Greedy).unwrap()).unwrap();
        let b = pre.contract_all(&find_plan(&pre, PlanMode::Greedy).unwrap()).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
}
