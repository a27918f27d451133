//! CNF formulas, DIMACS input, brute-force model counting, and compilation
//! into reversible and counting circuits.

mod compile;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use compile::{
    and_gadget, build_cphi, build_cphi_with, compile_tidy, compile_tidy_with, compile_untidy, compile_untidy_with,
    decide_sat, literal_circuit, literal_in_place, or_gadget, tidy_wrap, tree_and, tree_or, BoundLine, CompileCert,
    CompileOptions, CountingCircuit, LeafMode,
};

/// Variable `var` (0-based), negated or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn eval(self, x: &[bool]) -> bool {
        x[self.var] != self.negated
    }

    /// Signed 1-based DIMACS form.
    pub fn dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// Conjunction of clauses over `n` variables. No clause repeats a literal;
/// a complementary pair such as `x1 or not x1` is allowed here but rejected
/// by [`parse_dimacs`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatFormula {
    n: usize,
    clauses: Vec<Vec<Literal>>,
}

impl SatFormula {
    pub fn new(n: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for (k, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::InvalidFormula(format!("clause {k} is empty")));
            }
            if let Some(l) = clause.iter().find(|l| l.var >= n) {
                return Err(Error::InvalidFormula(format!(
                    "clause {k} uses variable {} of {n}",
                    l.var + 1
                )));
            }
            let mut lits = clause.clone();
            lits.sort_unstable();
            if lits.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFormula(format!("clause {k} repeats a literal")));
            }
        }
        Ok(SatFormula { n, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(x)))
    }

    /// Per clause `(positive mask, negative mask)`; bit `v` is variable `v`.
    fn masks(&self) -> Vec<(u64, u64)> {
        self.clauses
            .iter()
            .map(|c| {
                c.iter().fold((0, 0), |(p, q), l| {
                    if l.negated {
                        (p, q | 1 << l.var)
                    } else {
                        (p | 1 << l.var, q)
                    }
                })
            })
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SatFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.n, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(f, "{} ", l.dimacs())?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses DIMACS CNF. Comment lines start with `c`; a `%` line ends the
/// input. A missing final `0` is tolerated.
pub fn parse_dimacs(text: &str) -> Result<SatFormula> {
    let err = |line: usize, msg: String| Error::Dimacs { line, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "second header".into()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", n, m] => {
                    let n = n
                        .parse()
                        .map_err(|_| err(line_no, format!("bad variable count {n:?}")))?;
                    let m = m.parse().map_err(|_| err(line_no, format!("bad clause count {m:?}")))?;
                    header = Some((n, m));
                }
                _ => return Err(err(line_no, format!("malformed header {line:?}"))),
            }
            continue;
        }
        let (n, _) = header.ok_or_else(|| err(line_no, "clause before header".into()))?;
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| err(line_no, format!("bad literal {tok:?}")))?;
            if v == 0 {
                if current.is_empty() {
                    return Err(err(line_no, "empty clause".into()));
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = v.unsigned_abs() as usize;
            if var > n {
                return Err(err(line_no, format!("literal {v} out of range for {n} variables")));
            }
            let lit = Literal {
                var: var - 1,
                negated: v < 0,
            };
            if current.iter().any(|l| l.var == lit.var) {
                return Err(err(line_no, format!("variable {var} occurs twice in one clause")));
            }
            current.push(lit);
        }
    }
    let (n, m) = header.ok_or_else(|| err(last_line, "missing header".into()))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(err(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    SatFormula::new(n, clauses).map_err(|e| err(last_line, e.to_string()))
}

pub const COUNT_CAP: usize = 24;

/// Number of satisfying assignments, by enumeration.
pub fn count_sat_bruteforce(phi: &SatFormula) -> Result<u64> {
    let n = phi.num_vars();
    if n > COUNT_CAP {
        return Err(Error::CapExceeded {
            what: "variables for brute-force counting",
            value: n,
            cap: COUNT_CAP,
        });
    }
    let masks = phi.masks();
    let count = (0u64..1 << n)
        .into_par_iter()
        .filter(|&x| masks.iter().all(|&(p, q)| x & p != 0 || !x & q != 0))
        .count();
    Ok(count as u64)
}
