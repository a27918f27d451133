use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sorted multiset of variable ids. The empty monomial is the constant 1.
pub type Monomial = Vec<u32>;

/// Polynomial with nonnegative integer coefficients. Zero coefficients are
/// never stored, so two polynomials are equal iff their term maps are.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, BigUint>,
}

/// Image of one variable under [`SparsePolynomial::restrict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subst {
    Var(u32),
    Zero,
    One,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigUint::one())
    }

    pub fn constant(c: BigUint) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![v], BigUint::one());
        p
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs. Monomials
    /// need not be sorted; repeated monomials are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigUint)>,
    {
        let mut p = Self::zero();
        for (mut m, c) in terms {
            m.sort_unstable();
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(m).or_default() += c;
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigUint> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigUint {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Largest monomial degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms.keys().flatten().copied().collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, usize::MAX).expect("uncapped")
    }

    /// Product, failing once the result would exceed `max_terms` monomials.
    pub fn mul_capped(&self, other: &Self, max_terms: usize) -> Result<Self> {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(merge_sorted(ma, mb), ca * cb);
                if out.terms.len() > max_terms {
                    return Err(Error::CapExceeded {
                        what: "polynomial terms",
                        value: out.terms.len(),
                        cap: max_terms,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Substitutes every variable. Monomials touching a `Zero` vanish, `One`
    /// variables drop out, renamed variables may merge monomials.
    pub fn restrict(&self, map: &BTreeMap<u32, Subst>) -> Result<Self> {
        let mut out = Self::zero();
        'terms: for (m, c) in &self.terms {
            let mut image = Vec::with_capacity(m.len());
            for v in m {
                match map.get(v) {
                    None => return Err(Error::MissingVariable(*v)),
                    Some(Subst::Zero) => continue 'terms,
                    Some(Subst::One) => {}
                    Some(Subst::Var(w)) => image.push(*w),
                }
            }
            image.sort_unstable();
            out.add_term(image, c.clone());
        }
        Ok(out)
    }

    /// Renames variables; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<u32, u32>) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let image = m.iter().map(|v| *map.get(v).unwrap_or(v)).collect();
            (image, c.clone())
        }))
    }

    pub fn eval_complex(&self, value: impl Fn(u32) -> Option<Complex64>) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut prod = Complex64::new(c.to_f64().unwrap_or(f64::INFINITY), 0.0);
            for &v in m {
                prod *= value(v).ok_or(Error::MissingVariable(v))?;
            }
            total += prod;
        }
        Ok(total)
    }

    pub fn eval_integer(&self, value: impl Fn(u32) -> Option<BigInt>) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut prod = BigInt::from(c.clone());
            for &v in m {
                prod *= value(v).ok_or(Error::MissingVariable(v))?;
            }
            total += prod;
        }
        Ok(total)
    }

    /// One line per term, `"coeff: v3 v7 v7"`, in monomial order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (m, c) in &self.terms {
            s.push_str(&c.to_string());
            s.push(':');
            for v in m {
                s.push_str(&format!(" v{v}"));
            }
            s.push('\n');
        }
        s
    }

    /// Parses the [`dump`](Self::dump) format.
    pub fn parse_dump(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::InvalidInput(format!("bad polynomial line {line:?}"));
        let mut terms = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (c, rest) = line.split_once(':').ok_or_else(|| bad(line))?;
            let c: BigUint = c.trim().parse().map_err(|_| bad(line))?;
            let m = rest
                .split_whitespace()
                .map(|t| {
                    t.strip_prefix('v')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| bad(line))
                })
                .collect::<Result<Vec<u32>>>()?;
            terms.push((m, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() || m.is_empty() {
                write!(f, "{c}")?;
            }
            for (i, v) in m.iter().enumerate() {
                if i > 0 || !c.is_one() {
                    write!(f, "*")?;
                }
                write!(f, "x{v}")?;
            }
        }
        Ok(())
    }
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Largest order [`permanent_polynomial`] accepts.
pub const PERMANENT_POLY_CAP: usize = 8;

/// Variable id of matrix entry `x_{row,col}` (0-based) in an `n x n` permanent.
pub fn perm_var(n: usize, row: usize, col: usize) -> u32 {
    (row * n + col) as u32
}

/// `sum over permutations s of prod_i x_{i,s(i)}`, with variables from [`perm_var`].
pub fn permanent_polynomial(n: usize) -> Result<SparsePolynomial> {
    if n > PERMANENT_POLY_CAP {
        return Err(Error::CapExceeded {
            what: "permanent polynomial order",
            value: n,
            cap: PERMANENT_POLY_CAP,
        });
    }
    let mut terms = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permutations(&mut perm, n, &mut |p| {
        let m = p.iter().enumerate().map(|(i, &s)| perm_var(n, i, s)).collect();
        terms.push((m, BigUint::one()));
    });
    Ok(SparsePolynomial::from_terms(terms))
}

fn heap_permutations(a: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(a);
        return;
    }
    for i in 0..k {
        heap_permutations(a, k - 1, visit);
        let swap = if k % 2 == 0 { i } else { 0 };
        if i + 1 < k {
            a.swap(swap, k - 1);
        }
    }
}

/// Finds a bijection `f` from the variables of `p` onto those of `q` with
/// `p.rename(f) == q`, by backtracking over variables with matching
/// occurrence profiles.
pub fn find_isomorphism(p: &SparsePolynomial, q: &SparsePolynomial) -> Option<BTreeMap<u32, u32>> {
    if p.num_terms() != q.num_terms() {
        return None;
    }
    let (pv, qv) = (p.variables(), q.variables());
    if pv.len() != qv.len() {
        return None;
    }
    let (ps, qs) = (profiles(p), profiles(q));
    let order: Vec<u32> = {
        let mut o: Vec<u32> = pv.iter().copied().collect();
        // Most constrained first: rarest profile.
        o.sort_by_key(|v| qs.values().filter(|s| **s == ps[v]).count());
        o
    };
    let candidates: BTreeMap<u32, Vec<u32>> = order
        .iter()
        .map(|v| (*v, qv.iter().copied().filter(|w| qs[w] == ps[v]).collect()))
        .collect();
    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    if search(p, q, &order, &candidates, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

type Profile = Vec<(usize, usize, BigUint)>;

/// For each variable: sorted (multiplicity, monomial degree, coefficient) of its occurrences.
fn profiles(p: &SparsePolynomial) -> BTreeMap<u32, Profile> {
    let mut out: BTreeMap<u32, Profile> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut i = 0;
        while i < m.len() {
            let v = m[i];
            let mult = m[i..].iter().take_while(|&&w| w == v).count();
            out.entry(v).or_default().push((mult, m.len(), c.clone()));
            i += mult;
        }
    }
    for prof in out.values_mut() {
        prof.sort();
    }
    out
}

fn search(
    p: &SparsePolynomial,
    q: &SparsePolynomial,
    order: &[u32],
    candidates: &BTreeMap<u32, Vec<u32>>,
    map: &mut BTreeMap<u32, u32>,
    used: &mut BTreeSet<u32>,
) -> bool {
    let Some(&v) = order.get(map.len()) else {
        return p.rename(map) == *q;
    };
    for &w in &candidates[&v] {
        if used.contains(&w) {
            continue;
        }
        map.insert(v, w);
        used.insert(w);
        if consistent(p, q, map) && search(p, q, order, candidates, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}

/// Every fully mapped monomial of `p` must appear in `q` with the same coefficient.
fn consistent(p: &SparsePolynomial, q: &SparsePolynomial, map: &BTreeMap<u32, u32>) -> bool {
    p.terms().iter().all(|(m, c)| {
        if !m.iter().all(|v| map.contains_key(v)) {
            return true;
        }
        let mut image: Vec<u32> = m.iter().map(|v| map[v]).collect();
        image.sort_unstable();
        q.terms().get(&image) == Some(c)
    })
}
