//! The permanent as a hard instance for monotone methods.
//!
//! Wires of the instance circuit: rows `0..n`, a parity token `n`, and a
//! selector `n + 1`. For each column `j` and row `i` the circuit applies
//! `H(sel), CNOT(sel -> row i), CNOT(sel -> token)` and ends with one more
//! `H(sel)`. Between `|0...0>` and `<1...1, n mod 2, 0|`, a selector set to 1
//! at `(i, j)` marks row `i` as matched to column `j`. The substitution keeps
//! only paths where every selection flips an unmatched row (weight `x_{ij}`)
//! and the token has not already flipped in that column.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::circuit::{Gate, QuantumCircuit};
use crate::error::{Error, Result};
use crate::monotone::{MonotoneBuilder, MonotoneCircuit, NodeId};
use crate::network::{circuit_to_network, TensorNetwork};
use crate::poly::{perm_var, SparsePolynomial, Subst};
use crate::skeleton::{
    associated_polynomial_with, extract_skeleton, Skeleton, SymbolicCaps, VariableTable, DEFAULT_ZERO_TOLERANCE,
};

pub const BRUTEFORCE_CAP: usize = 10;
pub const CIRCUIT_CAP: usize = 12;
pub const EMIT_CAP: usize = 16;
pub const SIZE_ONLY_CAP: usize = 20;

/// Caps for symbolic work on the instance network, which has a few hundred
/// variables even for `n = 4`.
pub const PERM_SYMBOLIC_CAPS: SymbolicCaps = SymbolicCaps {
    max_variables: 4096,
    max_terms: 1_000_000,
};

/// `sum over permutations s of prod_i m[i][s(i)]`.
pub fn permanent_bruteforce<T>(m: &[Vec<T>]) -> Result<T>
where
    T: Clone + Zero + One + Add<Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    let n = m.len();
    if n > BRUTEFORCE_CAP {
        return Err(Error::CapExceeded {
            what: "permanent order for brute force",
            value: n,
            cap: BRUTEFORCE_CAP,
        });
    }
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::Shape {
            expected: n,
            got: row.len(),
        });
    }
    let mut total = T::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let prod = perm.iter().enumerate().fold(T::one(), |acc, (i, &s)| acc * &m[i][s]);
        total = total + prod;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(total)
}

/// Lexicographic successor; false once `p` is the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `n (2^(n-1) - 1)`, the monotone lower bound for the `n x n` permanent.
/// Zero for `n = 0`.
pub fn jerrum_snir_bound(n: usize) -> u128 {
    assert!(n <= 120, "bound overflows u128 for n = {n}");
    if n == 0 {
        return 0;
    }
    n as u128 * ((1u128 << (n - 1)) - 1)
}

/// Role of each gate of the instance circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GateRole {
    Hadamard,
    Select { row: usize, col: usize },
    Token { col: usize },
}

fn theorem2_layout(n: usize) -> (Vec<Gate>, Vec<GateRole>) {
    let (token, sel) = (n, n + 1);
    let mut gates = Vec::with_capacity(3 * n * n + 1);
    let mut roles = Vec::with_capacity(3 * n * n + 1);
    for col in 0..n {
        for row in 0..n {
            gates.extend([Gate::h(sel), Gate::cnot(sel, row), Gate::cnot(sel, token)]);
            roles.extend([
                GateRole::Hadamard,
                GateRole::Select { row, col },
                GateRole::Token { col },
            ]);
        }
    }
    gates.push(Gate::h(sel));
    roles.push(GateRole::Hadamard);
    (gates, roles)
}

/// Width `n + 2`, `3n^2 + 1` gates from {H, CNOT}, all on the selector wire,
/// so the depth equals the gate count.
pub fn build_theorem2_circuit(n: usize) -> Result<QuantumCircuit> {
    check_order(n, 1, CIRCUIT_CAP, "instance circuit order")?;
    let (gates, _) = theorem2_layout(n);
    QuantumCircuit::new(n + 2, gates)
}

/// `(input, output)` basis states: all zeros in; rows 1, token `n mod 2`,
/// selector 0 out.
pub fn theorem2_boundaries(n: usize) -> (Vec<bool>, Vec<bool>) {
    let input = vec![false; n + 2];
    let mut output = vec![true; n];
    output.push(n % 2 == 1);
    output.push(false);
    (input, output)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthReport {
    pub n: usize,
    pub achieved: usize,
    pub target: usize,
    pub gap: i64,
}

pub fn theorem2_depth_report(n: usize) -> Result<DepthReport> {
    let achieved = build_theorem2_circuit(n)?.depth();
    let target = 3 * n * n + 1;
    Ok(DepthReport {
        n,
        achieved,
        target,
        gap: achieved as i64 - target as i64,
    })
}

fn check_order(n: usize, min: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { what, value: n, cap });
    }
    if n < min {
        return Err(Error::InvalidCircuit(format!("{what} must be at least {min}")));
    }
    Ok(())
}

/// The instance network with its substitution onto the permanent variables.
#[derive(Clone, Debug)]
pub struct PermInstance {
    pub n: usize,
    pub circuit: QuantumCircuit,
    pub network: TensorNetwork,
    pub skeleton: Skeleton,
    pub table: VariableTable,
    /// Sends each skeleton variable to `x_{ij}` ([`perm_var`] numbering), 0 or 1.
    pub substitution: BTreeMap<u32, Subst>,
}

pub fn build_tperm(n: usize) -> Result<PermInstance> {
    check_order(n, 1, CIRCUIT_CAP, "instance circuit order")?;
    let circuit = build_theorem2_circuit(n)?;
    let (_, roles) = theorem2_layout(n);
    let (input, output) = theorem2_boundaries(n);
    let network = circuit_to_network(&circuit, &input, &output)?;
    let (skeleton, table) = extract_skeleton(&network, DEFAULT_ZERO_TOLERANCE);
    let width = n + 2;
    let mut substitution = BTreeMap::new();
    for (v, &(tensor, index)) in table.entries().iter().enumerate() {
        // Tensor ids: kets, then gates, then bras.
        let role = tensor.checked_sub(width).and_then(|g| roles.get(g));
        // CNOT slots are [in sel, in target, out sel, out target].
        let (sel, target) = (index >> 3 & 1 == 1, index >> 2 & 1 == 1);
        let image = match role {
            None | Some(GateRole::Hadamard) => Subst::One,
            Some(_) if !sel => Subst::One,
            Some(&GateRole::Select { row, col }) => {
                if target {
                    Subst::Zero
                } else {
                    Subst::Var(perm_var(n, row, col))
                }
            }
            Some(&GateRole::Token { col }) => {
                if target == (col % 2 == 1) {
                    Subst::One
                } else {
                    Subst::Zero
                }
            }
        };
        substitution.insert(v as u32, image);
    }
    Ok(PermInstance {
        n,
        circuit,
        network,
        skeleton,
        table,
        substitution,
    })
}

impl PermInstance {
    /// `p(S)` of the instance skeleton under the substitution.
    pub fn restricted_polynomial(&self) -> Result<SparsePolynomial> {
        let plan = crate::network::find_plan(self.skeleton.masks(), crate::network::PlanMode::Greedy)?;
        associated_polynomial_with(&self.skeleton, &plan, PERM_SYMBOLIC_CAPS)?.restrict(&self.substitution)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    /// Plus + Times gates of the emitted circuit.
    pub size: u128,
    pub additions: u128,
    pub multiplications: u128,
    pub lower_bound: u128,
    /// `size / lower_bound`; absent when the bound is 0.
    pub ratio: Option<f64>,
    /// `size / (n^2 2^n)`.
    pub c: f64,
}

impl BoundReport {
    fn new(n: usize, additions: u128, multiplications: u128) -> Self {
        let size = additions + multiplications;
        let lower_bound = jerrum_snir_bound(n);
        BoundReport {
            n,
            size,
            additions,
            multiplications,
            lower_bound,
            ratio: (lower_bound > 0).then(|| size as f64 / lower_bound as f64),
            c: size as f64 / ((n * n) as f64 * (1u128 << n) as f64),
        }
    }
}

/// `(additions, multiplications)` of [`compile_perm_monotone`] without
/// building it: a subset of size `k >= 2` costs `k` products and `k - 1` sums.
pub fn perm_monotone_counts(n: usize) -> Result<(u128, u128)> {
    check_order(n, 1, SIZE_ONLY_CAP, "permanent order for size accounting")?;
    let mut binom = 1u128;
    let (mut adds, mut muls) = (0u128, 0u128);
    for k in 1..=n as u128 {
        binom = binom * (n as u128 - k + 1) / k;
        if k >= 2 {
            muls += binom * k;
            adds += binom * (k - 1);
        }
    }
    Ok((adds, muls))
}

pub fn perm_bound_report(n: usize) -> Result<BoundReport> {
    let (a, m) = perm_monotone_counts(n)?;
    Ok(BoundReport::new(n, a, m))
}

/// Column DP `f(j, S) = sum over i in S of x_{i,j} f(j-1, S - {i})`, the
/// reduced form of contracting the instance left to right. Node `v` is the
/// leaf of [`perm_var`] `v`. Subsets are emitted by popcount, then value.
pub fn compile_perm_monotone(n: usize) -> Result<(MonotoneCircuit, BoundReport)> {
    check_order(n, 1, EMIT_CAP, "permanent order for circuit emission")?;
    let mut b = MonotoneBuilder::new();
    for v in 0..(n * n) as u32 {
        b.var(v);
    }
    let leaf = |row: usize, col: usize| perm_var(n, row, col) as NodeId;
    let mut f: Vec<NodeId> = vec![usize::MAX; 1 << n];
    for row in 0..n {
        f[1 << row] = leaf(row, 0);
    }
    for col in 1..n {
        for s in subsets_of_size(n, col + 1) {
            let terms: Vec<NodeId> = (0..n)
                .filter(|&i| s >> i & 1 == 1)
                .map(|i| b.times(leaf(i, col), f[s & !(1 << i)]))
                .collect();
            f[s] = b.sum(&terms).expect("nonempty subset");
        }
    }
    let mc = b.finish(f[(1 << n) - 1])?;
    let report = BoundReport::new(n, mc.additions() as u128, mc.multiplications() as u128);
    Ok((mc, report))
}

/// Masks over `n` bits with `k` ones, ascending.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = usize> {
    let end = 1usize << n;
    let mut next = if k == 0 { 0 } else { (1usize << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done || next >= end {
            return None;
        }
        let cur = next;
        if cur == 0 {
            done = true;
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            next = (((r ^ cur) >> 2) / c) | r;
        }
        Some(cur)
    })
}

/// Largest `size / (n^2 2^n)` over the reports.
pub fn fit_constant(reports: &[BoundReport]) -> f64 {
    reports.iter().map(|r| r.c).fold(0.0, f64::max)
}

/// Plain rows of numbers, comma or whitespace separated.
pub fn parse_matrix_csv(text: &str) -> Result<Vec<Vec<i64>>> {
    let rows: Vec<Vec<i64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(k, line)| {
            line.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::InvalidInput(format!("matrix row {}: bad number {t:?}", k + 1)))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Shape {
            expected: n,
            got: r.len(),
        });
    }
    Ok(rows)
}
