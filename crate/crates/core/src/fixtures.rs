//! Small hand-checked instances: the two-qubit H/CNOT circuit with its
//! 20-variable polynomial, and the H-T-CZ network used for diagonal
//! preprocessing.

use num_bigint::BigUint;

use crate::circuit::{Gate, QuantumCircuit};
use crate::network::{circuit_to_network, circuit_to_open_network, TensorNetwork};
use crate::poly::SparsePolynomial;

pub use crate::monotone::weighted_sum_circuit;

/// `H0, H1, CNOT(0 -> 1), H0` on two qubits.
pub fn two_qubit_circuit() -> QuantumCircuit {
    QuantumCircuit::new(2, vec![Gate::h(0), Gate::h(1), Gate::cnot(0, 1), Gate::h(0)]).expect("valid")
}

/// `<00| C |00>` for [`two_qubit_circuit`].
pub fn two_qubit_network() -> TensorNetwork {
    circuit_to_network(&two_qubit_circuit(), &[false, false], &[false, false]).expect("valid")
}

/// `x1 x10 x11 x20 (x2 x6 x12 x16 + x3 x8 x14 x18)`.
pub fn two_qubit_target_polynomial() -> SparsePolynomial {
    let common = [1, 10, 11, 20];
    let terms = [[2, 6, 12, 16], [3, 8, 14, 18]].map(|m| {
        let mono: Vec<u32> = common.iter().chain(m.iter()).copied().collect();
        (mono, BigUint::from(1u32))
    });
    SparsePolynomial::from_terms(terms)
}

/// Gate tensors of `H0, T0, CZ(0, 1)` with every wire end left open.
pub fn h_t_cz_network() -> TensorNetwork {
    let c = QuantumCircuit::new(2, vec![Gate::h(0), Gate::t(0), Gate::cz(0, 1)]).expect("valid");
    circuit_to_open_network(&c).expect("valid")
}
