//! Seeded generators for test corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Gate, QuantumCircuit};
use crate::sat::{Literal, SatFormula};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 1 to `max_qubits` qubits and 1 to `max_gates` gates from {H, CNOT, T, CZ, X}.
pub fn random_circuit(rng: &mut impl Rng, max_qubits: usize, max_gates: usize) -> QuantumCircuit {
    let q = rng.gen_range(1..=max_qubits);
    let len = rng.gen_range(1..=max_gates);
    let mut gates = Vec::with_capacity(len);
    while gates.len() < len {
        let a = rng.gen_range(0..q);
        let g = match rng.gen_range(0..5) {
            0 => Gate::h(a),
            1 => Gate::t(a),
            2 => Gate::x(a),
            k if q > 1 => {
                let b = (a + rng.gen_range(1..q)) % q;
                if k == 3 {
                    Gate::cnot(a, b)
                } else {
                    Gate::cz(a, b)
                }
            }
            _ => continue,
        };
        gates.push(g);
    }
    QuantumCircuit::new(q, gates).expect("valid gates")
}

pub fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

/// `n` variables, `m` clauses of 1 to `max_width` distinct variables with random signs.
pub fn random_cnf(rng: &mut impl Rng, n: usize, m: usize, max_width: usize) -> SatFormula {
    let vars: Vec<usize> = (0..n).collect();
    let clauses = (0..m)
        .map(|_| {
            let k = rng.gen_range(1..=max_width.min(n));
            vars.choose_multiple(rng, k)
                .map(|&v| Literal {
                    var: v,
                    negated: rng.gen(),
                })
                .collect()
        })
        .collect();
    SatFormula::new(n, clauses).expect("distinct variables")
}

/// Row-major `n x n` matrix with entries in `lo..=hi`.
pub fn random_matrix(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n * n).map(|_| rng.gen_range(lo..=hi)).collect()
}
