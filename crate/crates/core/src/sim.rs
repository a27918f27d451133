//! Strong simulation: sparse statevector amplitudes (floating or exact over
//! `Z[w] / sqrt2^h`, `w = e^(i pi/4)`) and a three-way cross-check against
//! tensor-network contraction and monotone-circuit evaluation.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::circuit::{Gate, GateKind, QuantumCircuit};
use crate::error::{Error, Result};
use crate::monotone::compile_contraction;
use crate::network::{circuit_to_network, find_plan, multiplication_count, PlanMode, TensorNetwork};
use crate::skeleton::{extract_skeleton, DEFAULT_ZERO_TOLERANCE};

/// Amplitudes below this magnitude are dropped from the sparse state.
pub const PRUNE_TOLERANCE: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    /// The state may hold at most `2^qubit_cap` nonzero amplitudes.
    pub qubit_cap: u32,
    pub tolerance: f64,
    pub plan: PlanMode,
    pub seed: u64,
    pub exact: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            qubit_cap: 20,
            tolerance: 1e-9,
            plan: PlanMode::Greedy,
            seed: 0,
            exact: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Statevector,
    Contraction,
    MonotoneEval,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Statevector => "statevector",
            Method::Contraction => "contraction",
            Method::MonotoneEval => "monotone-eval",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplitudeResult {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub method: Method,
    pub multiplications: Option<u128>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn word(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |w, (i, &b)| w | (b as u64) << i)
}

fn check_states(c: &QuantumCircuit, in_state: &[bool], out_state: &[bool]) -> Result<()> {
    let q = c.num_qubits();
    if q > 64 {
        return Err(Error::CapExceeded {
            what: "qubits for the statevector simulator",
            value: q,
            cap: 64,
        });
    }
    for s in [in_state, out_state] {
        if s.len() != q {
            return Err(Error::Shape {
                expected: q,
                got: s.len(),
            });
        }
    }
    Ok(())
}

/// Amplitude arithmetic for the sparse simulator.
trait Amp: Clone + Send + Sync {
    fn is_negligible(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiply by `w = e^(i pi/4)`.
    fn omega(&self) -> Self;
}

impl Amp for Complex64 {
    fn is_negligible(&self) -> bool {
        self.norm() < PRUNE_TOLERANCE
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn omega(&self) -> Self {
        self * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)
    }
}

/// `a0 + a1 w + a2 w^2 + a3 w^3` with `w^4 = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cyclotomic(pub [BigInt; 4]);

impl Amp for Cyclotomic {
    fn is_negligible(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
    fn add(&self, other: &Self) -> Self {
        let [a0, a1, a2, a3] = &self.0;
        let [b0, b1, b2, b3] = &other.0;
        Cyclotomic([a0 + b0, a1 + b1, a2 + b2, a3 + b3])
    }
    fn neg(&self) -> Self {
        let [a0, a1, a2, a3] = &self.0;
        Cyclotomic([-a0, -a1, -a2, -a3])
    }
    fn omega(&self) -> Self {
        let [a0, a1, a2, a3] = &self.0;
        Cyclotomic([-a3, a0.clone(), a1.clone(), a2.clone()])
    }
}

impl Cyclotomic {
    fn one() -> Self {
        Cyclotomic([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()])
    }

    /// Multiply by `sqrt2 = w - w^3`.
    fn times_sqrt2(&self) -> Self {
        let [a0, a1, a2, a3] = &self.0;
        Cyclotomic([a1 - a3, a0 + a2, a1 + a3, a2 - a0])
    }

    fn to_complex(&self) -> Complex64 {
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let mut z = Complex64::zero();
        let mut p = Complex64::one();
        for a in &self.0 {
            z += p * a.to_f64().unwrap_or(f64::NAN);
            p *= w;
        }
        z
    }
}

/// `numerator / sqrt2^sqrt2_power`, reduced so the power is minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactAmplitude {
    pub numerator: Cyclotomic,
    pub sqrt2_power: u64,
}

impl ExactAmplitude {
    fn reduced(mut numerator: Cyclotomic, mut sqrt2_power: u64) -> Self {
        if numerator.is_negligible() {
            return ExactAmplitude {
                numerator,
                sqrt2_power: 0,
            };
        }
        while sqrt2_power > 0 {
            let t = numerator.times_sqrt2();
            if !t.0.iter().all(|a| a.is_even()) {
                break;
            }
            numerator = Cyclotomic(t.0.map(|a| a / 2));
            sqrt2_power -= 1;
        }
        ExactAmplitude { numerator, sqrt2_power }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.numerator.to_complex() / 2f64.sqrt().powi(self.sqrt2_power as i32)
    }

    /// The value as a rational when it is one; always dyadic.
    pub fn as_rational(&self) -> Option<BigRational> {
        let [a0, a1, a2, a3] = &self.numerator.0;
        if !(a1.is_zero() && a2.is_zero() && a3.is_zero()) || self.sqrt2_power % 2 == 1 {
            return None;
        }
        let den = BigInt::one() << (self.sqrt2_power / 2);
        Some(BigRational::new(a0.clone(), den))
    }
}

impl fmt::Display for ExactAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let [a0, a1, a2, a3] = &self.numerator.0;
        write!(f, "({a0} + {a1} w + {a2} w^2 + {a3} w^3) / sqrt2^{}", self.sqrt2_power)
    }
}

/// Sorted `(basis word, amplitude)` pairs; bit `i` of the word is qubit `i`.
struct SparseState<A> {
    entries: Vec<(u64, A)>,
    cap: usize,
}

impl<A: Amp> SparseState<A> {
    fn basis(x: u64, one: A, qubit_cap: u32) -> Result<Self> {
        let cap = 1usize
            .checked_shl(qubit_cap)
            .filter(|&c| c > 0)
            .ok_or(Error::InvalidInput(format!("qubit cap {qubit_cap} out of range")))?;
        Ok(SparseState {
            entries: vec![(x, one)],
            cap,
        })
    }

    fn permute(&mut self, f: impl Fn(u64) -> u64 + Sync) {
        self.entries.par_iter_mut().for_each(|(x, _)| *x = f(*x));
        self.entries.par_sort_unstable_by_key(|(x, _)| *x);
    }

    fn phase(&mut self, f: impl Fn(u64, &A) -> A + Sync) {
        self.entries.par_iter_mut().for_each(|(x, a)| *a = f(*x, a));
    }

    /// Each entry maps to `(x, a), (x ^ bit, b)`; equal keys are summed.
    fn branch(&mut self, f: impl Fn(u64, &A) -> [(u64, A); 2] + Sync) -> Result<()> {
        let mut next: Vec<(u64, A)> = self.entries.par_iter().flat_map_iter(|(x, a)| f(*x, a)).collect();
        next.par_sort_by_key(|(x, _)| *x);
        let mut merged: Vec<(u64, A)> = Vec::with_capacity(next.len());
        for (x, a) in next {
            match merged.last_mut() {
                Some((y, b)) if *y == x => *b = b.add(&a),
                _ => merged.push((x, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_negligible());
        if merged.len() > self.cap {
            return Err(Error::CapExceeded {
                what: "nonzero statevector amplitudes",
                value: merged.len(),
                cap: self.cap,
            });
        }
        self.entries = merged;
        Ok(())
    }

    fn get(&self, x: u64) -> Option<&A> {
        self.entries
            .binary_search_by_key(&x, |(y, _)| *y)
            .ok()
            .map(|k| &self.entries[k].1)
    }
}

fn bit(w: usize) -> u64 {
    1 << w
}

/// Applies one gate. `h_scale` is the amplitude scale change of a Hadamard
/// (`1/sqrt2` in floating mode, `1` in exact mode, where it is counted).
fn apply_gate<A: Amp>(state: &mut SparseState<A>, g: &Gate, h_scale: impl Fn(A) -> A + Sync) -> Result<()> {
    let w = g.wires();
    match g.kind() {
        GateKind::X | GateKind::Not => state.permute(|x| x ^ bit(w[0])),
        GateKind::Cnot => state.permute(|x| if x & bit(w[0]) != 0 { x ^ bit(w[1]) } else { x }),
        GateKind::Toffoli => {
            let c = bit(w[0]) | bit(w[1]);
            state.permute(|x| if x & c == c { x ^ bit(w[2]) } else { x })
        }
        GateKind::Cz => {
            let c = bit(w[0]) | bit(w[1]);
            state.phase(|x, a| if x & c == c { a.neg() } else { a.clone() })
        }
        GateKind::T => state.phase(|x, a| if x & bit(w[0]) != 0 { a.omega() } else { a.clone() }),
        GateKind::H => {
            let b = bit(w[0]);
            state.branch(|x, a| {
                let a = h_scale(a.clone());
                let flipped = a.clone();
                let same = if x & b != 0 { a.neg() } else { a };
                [(x, same), (x ^ b, flipped)]
            })?
        }
        GateKind::Generic => return Err(Error::InvalidGate("generic gates are not simulated".into())),
    }
    Ok(())
}

/// `<out| C |in>` by sparse statevector evolution; `in_state[i]` is qubit `i`.
pub fn statevector_amplitude(c: &QuantumCircuit, in_state: &[bool], out_state: &[bool]) -> Result<Complex64> {
    statevector_amplitude_capped(c, in_state, out_state, RunConfig::default().qubit_cap)
}

pub fn statevector_amplitude_capped(
    c: &QuantumCircuit,
    in_state: &[bool],
    out_state: &[bool],
    qubit_cap: u32,
) -> Result<Complex64> {
    check_states(c, in_state, out_state)?;
    let mut state = SparseState::basis(word(in_state), Complex64::one(), qubit_cap)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for g in c.gates() {
        apply_gate(&mut state, g, |a| a * s)?;
    }
    Ok(state.get(word(out_state)).copied().unwrap_or_default())
}

/// Exact `<out| C |in>` for circuits over {H, X, NOT, CNOT, TOFFOLI, CZ, T}.
pub fn statevector_amplitude_exact(
    c: &QuantumCircuit,
    in_state: &[bool],
    out_state: &[bool],
    qubit_cap: u32,
) -> Result<ExactAmplitude> {
    check_states(c, in_state, out_state)?;
    let mut state = SparseState::basis(word(in_state), Cyclotomic::one(), qubit_cap)?;
    let mut h = 0u64;
    for g in c.gates() {
        apply_gate(&mut state, g, |a| a)?;
        h += (g.kind() == GateKind::H) as u64;
    }
    let num = state.get(word(out_state)).cloned().unwrap_or_default();
    Ok(ExactAmplitude::reduced(num, h))
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed()))
}

/// Runs all three methods on `<out| C |in>` and checks pairwise agreement.
pub fn crosscheck_amplitude(
    c: &QuantumCircuit,
    in_state: &[bool],
    out_state: &[bool],
    cfg: &RunConfig,
) -> Result<Vec<AmplitudeResult>> {
    let net = circuit_to_network(c, in_state, out_state)?;
    crosscheck_with_network(c, in_state, out_state, &net, cfg)
}

/// As [`crosscheck_amplitude`], with the contraction and monotone paths run
/// on `net` instead of the circuit's own network.
pub fn crosscheck_with_network(
    c: &QuantumCircuit,
    in_state: &[bool],
    out_state: &[bool],
    net: &TensorNetwork,
    cfg: &RunConfig,
) -> Result<Vec<AmplitudeResult>> {
    let (sv, t_sv) = timed(|| statevector_amplitude_capped(c, in_state, out_state, cfg.qubit_cap))?;
    let plan = find_plan(net, cfg.plan)?;
    let ((tn, mults), t_tn) = timed(|| Ok((net.contract_all(&plan)?, multiplication_count(net, &plan)?)))?;
    let ((mono, mono_mults), t_mono) = timed(|| {
        let (skel, table) = extract_skeleton(net, DEFAULT_ZERO_TOLERANCE);
        let (mc, report) = compile_contraction(&skel, &plan)?;
        let values = table.values(net)?;
        let v = mc.eval_numeric(|v| values.get(v as usize).copied())?;
        Ok((v, report.multiplications as u128))
    })?;
    let results = vec![
        AmplitudeResult {
            value: sv,
            method: Method::Statevector,
            multiplications: None,
            elapsed: t_sv,
        },
        AmplitudeResult {
            value: tn,
            method: Method::Contraction,
            multiplications: Some(mults),
            elapsed: t_tn,
        },
        AmplitudeResult {
            value: mono,
            method: Method::MonotoneEval,
            multiplications: Some(mono_mults),
            elapsed: t_mono,
        },
    ];
    let deviation = max_deviation(&results);
    if deviation.is_nan() || deviation > cfg.tolerance {
        let values: Vec<String> = results.iter().map(|r| format!("{}={}", r.method, r.value)).collect();
        return Err(Error::Integrity(format!(
            "methods disagree by {deviation:e} (tolerance {:e}): {}",
            cfg.tolerance,
            values.join(", ")
        )));
    }
    Ok(results)
}

/// Largest pairwise distance between result values.
pub fn max_deviation(results: &[AmplitudeResult]) -> f64 {
    let mut worst = 0f64;
    for (k, a) in results.iter().enumerate() {
        for b in &results[k + 1..] {
            let d = (a.value - b.value).norm();
            worst = if d.is_nan() { f64::NAN } else { worst.max(d) };
        }
    }
    worst
}

/// `numerator / 2^k` with `k` minimal, as `(numerator, k)`; `None` if `r`
/// is not dyadic or is negative.
pub fn dyadic_parts(r: &BigRational) -> Option<(BigInt, u64)> {
    let den = r.denom();
    if r.is_negative() || den.is_zero() {
        return None;
    }
    let k = den.trailing_zeros().unwrap_or(0);
    (den == &(BigInt::one() << k)).then(|| (r.numer().clone(), k))
}
