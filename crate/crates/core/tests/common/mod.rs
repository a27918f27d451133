//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use mbl_core::network::{slot_bit, Network};
use mbl_core::poly::SparsePolynomial;
use mbl_core::sat::SatFormula;
use mbl_core::skeleton::Skeleton;

/// `p(S)` by summing over every labeling of the hyperedges. Variables are
/// numbered by (tensor id, entry index) over nonzero entries, like
/// `extract_skeleton`.
pub fn skeleton_polynomial_oracle(s: &Skeleton) -> SparsePolynomial {
    let net: &Network<bool> = s.masks();
    let ids = net.live_ids();
    let mut var_of: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for &id in &ids {
        let t = net.tensor(id).unwrap();
        for (i, &nz) in t.entries().iter().enumerate() {
            if nz {
                let v = var_of.len() as u32;
                var_of.insert((id, i), v);
            }
        }
    }
    let edges = net.hyperedges();
    assert!(edges.len() <= 24, "too many hyperedges for the labeling oracle");
    let mut terms: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
    'label: for label in 0u32..1 << edges.len() {
        let mut index: BTreeMap<usize, usize> = ids.iter().map(|&id| (id, 0)).collect();
        for (e, h) in edges.iter().enumerate() {
            if label >> e & 1 == 1 {
                for &(t, slot) in &h.members {
                    *index.get_mut(&t).unwrap() |= slot_bit(net.tensor(t).unwrap().rank(), slot);
                }
            }
        }
        let mut mono = Vec::with_capacity(ids.len());
        for (&id, &i) in &index {
            match var_of.get(&(id, i)) {
                Some(&v) => mono.push(v),
                None => continue 'label,
            }
        }
        mono.sort_unstable();
        *terms.entry(mono).or_insert_with(BigUint::zero) += 1u32;
    }
    SparsePolynomial::from_terms(terms)
}

/// Ryser's inclusion-exclusion formula.
pub fn ryser(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut total = BigInt::zero();
    for s in 1u32..1 << n {
        let mut prod = BigInt::one();
        for row in m {
            let sum: i64 = (0..n).filter(|&j| s >> j & 1 == 1).map(|j| row[j]).sum();
            prod *= sum;
        }
        if (n - s.count_ones() as usize) % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    total
}

pub fn bits(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

pub fn count_models(phi: &SatFormula) -> u64 {
    let n = phi.num_vars();
    (0..1u64 << n).filter(|&x| phi.eval(&bits(x, n))).count() as u64
}
