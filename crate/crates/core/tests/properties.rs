mod common;

use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;

use mbl_core::circuit::{Gate, ReversibleCircuit};
use mbl_core::corpus::{random_circuit, random_cnf, rng};
use mbl_core::monotone::{compile_contraction, MonotoneCircuit};
use mbl_core::network::{circuit_to_network, find_plan, PlanMode};
use mbl_core::permanent::build_tperm;
use mbl_core::poly::{permanent_polynomial, SparsePolynomial};
use mbl_core::sat::{compile_tidy, compile_untidy, parse_dimacs, tidy_wrap};
use mbl_core::sim::{crosscheck_amplitude, statevector_amplitude, RunConfig};
use mbl_core::skeleton::{extract_skeleton, DEFAULT_ZERO_TOLERANCE};

use common::{bits, count_models};

fn reversible_gate(width: usize) -> impl Strategy<Value = Gate> {
    (0..3usize, 0..width, 1..width, 1..width).prop_filter_map("distinct wires", move |(k, a, db, dc)| {
        let b = (a + db) % width;
        let c = (a + dc) % width;
        match k {
            0 => Some(Gate::not(a)),
            1 => Some(Gate::cnot(a, b)),
            _ if c != b => Some(Gate::toffoli(a, b, c)),
            _ => None,
        }
    })
}

fn reversible_circuit() -> impl Strategy<Value = ReversibleCircuit> {
    (3..7usize).prop_flat_map(|w| {
        prop::collection::vec(reversible_gate(w), 0..12)
            .prop_map(move |gates| ReversibleCircuit::standard(1, w, gates).expect("valid"))
    })
}

fn small_poly() -> impl Strategy<Value = SparsePolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, 0..3), 1u32..4), 0..4).prop_map(|terms| {
        SparsePolynomial::from_terms(terms.into_iter().map(|(mut m, c)| {
            m.sort_unstable();
            (m, BigUint::from(c))
        }))
    })
}

proptest! {
    #[test]
    fn lifted_circuit_is_the_permutation(c in reversible_circuit(), x in any::<u64>()) {
        let w = c.width();
        let x = x & ((1 << w) - 1);
        let y = c.apply_word(x);
        let amp = statevector_amplitude(&c.lift_to_quantum(), &bits(x, w), &bits(y, w)).unwrap();
        prop_assert!((amp - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert_eq!(c.inverse().apply_word(y), x);
    }

    #[test]
    fn tidy_wrap_is_tidy(c in reversible_circuit()) {
        let f = |x: &[bool]| {
            let mut start = vec![false; c.width()];
            start[0] = x[0];
            c.apply(&start).unwrap()[c.output()]
        };
        let t = tidy_wrap(&c).unwrap();
        prop_assert_eq!(t.size(), 2 * c.size() + 1);
        prop_assert!(t.check_tidy(f).unwrap());
    }

    #[test]
    fn polynomial_ring_laws(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(SparsePolynomial::parse_dump(&p.dump()).unwrap(), p);
    }

    #[test]
    fn compiled_circuits_round_trip(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 3, 5);
        let z = vec![false; c.num_qubits()];
        let net = circuit_to_network(&c, &z, &z).unwrap();
        let (s, _) = extract_skeleton(&net, DEFAULT_ZERO_TOLERANCE);
        let plan = find_plan(s.masks(), PlanMode::Greedy).unwrap();
        let (mc, _) = compile_contraction(&s, &plan).unwrap();
        let back = MonotoneCircuit::from_json(&mc.to_json()).unwrap();
        prop_assert_eq!(back.expand_symbolic().unwrap(), mc.expand_symbolic().unwrap());
        prop_assert_eq!(mc.dedup().expand_symbolic().unwrap(), mc.expand_symbolic().unwrap());
    }

    #[test]
    fn cnf_compilation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 1 + (seed % 6) as usize;
        let phi = random_cnf(&mut r, n, 1 + (seed / 7 % 5) as usize, 3);
        prop_assert_eq!(parse_dimacs(&phi.to_dimacs()).unwrap(), phi.clone());
        let (u, _) = compile_untidy(&phi).unwrap();
        for x in 0..1u64 << n {
            prop_assert_eq!(u.apply_word(x) >> u.output() & 1 == 1, phi.eval(&bits(x, n)));
        }
        let (t, _) = compile_tidy(&phi).unwrap();
        prop_assert!(t.check_tidy(|x| phi.eval(x)).unwrap());
    }
}

#[test]
fn counting_oracle_agrees_with_library() {
    let mut r = rng(11);
    for _ in 0..30 {
        let phi = random_cnf(&mut r, 7, 6, 3);
        assert_eq!(mbl_core::sat::count_sat_bruteforce(&phi).unwrap(), count_models(&phi));
    }
}

#[test]
fn permanent_instance_of_order_four() {
    let start = Instant::now();
    let inst = build_tperm(4).unwrap();
    let p = inst.restricted_polynomial().unwrap();
    assert_eq!(p.num_terms(), 24);
    assert_eq!(p, permanent_polynomial(4).unwrap());
    eprintln!("order-4 instance restricted in {:.2} s", start.elapsed().as_secs_f64());
}

#[test]
fn crosscheck_output_is_deterministic() {
    let c = random_circuit(&mut rng(99), 4, 6);
    let z = vec![false; c.num_qubits()];
    let cfg = RunConfig::default();
    let a = serde_json::to_string(&crosscheck_amplitude(&c, &z, &z, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&crosscheck_amplitude(&c, &z, &z, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}
