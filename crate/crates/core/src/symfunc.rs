//! Exact polynomial arithmetic in the generators `c1, c2, ...` (images of the
//! elementary symmetric functions), the explicit-variable expansion used as an
//! oracle, and truncated Chern series of virtual bundles.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Writes `a*x + b*y - c*z` with unit coefficients elided. `body == ""`
/// denotes the constant term.
pub(crate) fn write_combination<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a BigInt, String)>,
{
    let mut first = true;
    for (coeff, body) in terms {
        let negative = coeff.is_negative();
        let mag = coeff.abs();
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if body.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{body}")?;
        } else {
            write!(f, "{mag}*{body}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Polynomial in the generators `c_i`, keyed by e-monomials: the partition
/// `λ` stands for `c_{λ1} c_{λ2} ...`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymPoly {
    terms: BTreeMap<Partition, BigInt>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Partition::empty(), c)
    }

    /// The generator `c_i`; `c_0 = 1`.
    pub fn gen(i: usize) -> Self {
        Self::monomial(Partition::row(i), 1)
    }

    pub fn monomial(m: Partition, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Partition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Partition) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Highest weighted degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Partition::weight).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Partition::weight);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest generator index occurring, zero for constants.
    pub fn max_generator(&self) -> usize {
        self.terms.keys().map(Partition::first).max().unwrap_or(0)
    }

    /// Splits into nonzero homogeneous components.
    pub fn components(&self) -> BTreeMap<usize, SymPoly> {
        let mut out: BTreeMap<usize, SymPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    pub fn component(&self, d: usize) -> SymPoly {
        SymPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets `c_i = 0` for every `i > n`, i.e. restricts to `n` variables.
    pub fn truncate(&self, n: usize) -> SymPoly {
        SymPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.first() <= n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> SymPoly {
        if k.is_zero() {
            return SymPoly::zero();
        }
        SymPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> SymPoly {
        let mut base = self.clone();
        let mut acc = SymPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `c_i -> e_i(x_1..x_n)` and expands fully.
    pub fn evaluate(&self, n: usize) -> XPoly {
        let max = self.max_generator();
        let elementary: Vec<XPoly> = (0..=max).map(|i| XPoly::elementary(i, n)).collect();
        let mut out = XPoly::zero(n);
        for (m, c) in &self.terms {
            let mut prod = XPoly::constant(n, c.clone());
            for &part in m.parts() {
                if prod.is_zero() {
                    break;
                }
                prod = &prod * &elementary[part];
            }
            out += &prod;
        }
        out
    }

    /// Numeric value with `c_i = e_i(values)`.
    pub fn evaluate_at(&self, values: &[BigInt]) -> BigInt {
        let e = elementary_values(values, self.max_generator());
        self.terms
            .iter()
            .map(|(m, c)| m.parts().iter().fold(c.clone(), |acc, &p| acc * &e[p]))
            .sum()
    }

    /// Replaces every generator `c_i` by `series[i]`.
    pub fn subst(&self, series: &ChernSeries) -> Result<SymPoly> {
        let deg = self.degree().unwrap_or(0);
        if deg > series.degree_bound() {
            return Err(Error::invalid(format!(
                "series truncated at degree {} but polynomial has degree {deg}",
                series.degree_bound()
            )));
        }
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            let mut prod = SymPoly::constant(c.clone());
            for &part in m.parts() {
                prod = &prod * series.get(part);
            }
            out += &prod;
        }
        Ok(out)
    }
}

/// `e_0..=e_max` of a list of numbers, via the product `prod (1 + x t)`.
pub fn elementary_values(values: &[BigInt], max: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); max + 1];
    e[0] = BigInt::one();
    for x in values {
        for k in (1..=max).rev() {
            let prev = e[k - 1].clone();
            e[k] += prev * x;
        }
    }
    e
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter().map(|(m, c)| (c, render_e_monomial(m))))
    }
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymPoly({self})")
    }
}

/// `c2*c1^2` for the partition `(2,1,1)`, empty string for `()`.
pub(crate) fn render_e_monomial(m: &Partition) -> String {
    let mut factors = Vec::new();
    let parts = m.parts();
    let mut k = 0;
    while k < parts.len() {
        let mut run = 1;
        while k + run < parts.len() && parts[k + run] == parts[k] {
            run += 1;
        }
        if run == 1 {
            factors.push(format!("c{}", parts[k]));
        } else {
            factors.push(format!("c{}^{run}", parts[k]));
        }
        k += run;
    }
    factors.join("*")
}

impl AddAssign<&SymPoly> for SymPoly {
    fn add_assign(&mut self, rhs: &SymPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&SymPoly> for SymPoly {
    fn sub_assign(&mut self, rhs: &SymPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&SymPoly> for &SymPoly {
    type Output = SymPoly;

    fn add(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&SymPoly> for &SymPoly {
    type Output = SymPoly;

    fn sub(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&SymPoly> for &SymPoly {
    type Output = SymPoly;

    fn mul(self, rhs: &SymPoly) -> SymPoly {
        let mut acc: HashMap<Partition, BigInt> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                *acc.entry(a.merge(b)).or_default() += ca * cb;
            }
        }
        SymPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;

    fn neg(self) -> SymPoly {
        SymPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t { (&self).$f(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $f(self, rhs: &$t) -> $t { (&self).$f(rhs) }
        }
    )*};
}

forward_owned!(SymPoly, Add add, Sub sub, Mul mul);

impl Neg for SymPoly {
    type Output = SymPoly;

    fn neg(self) -> SymPoly {
        -&self
    }
}

impl Zero for SymPoly {
    fn zero() -> Self {
        SymPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SymPoly {
    fn one() -> Self {
        SymPoly::one()
    }
}

impl std::iter::Sum for SymPoly {
    fn sum<I: Iterator<Item = SymPoly>>(iter: I) -> Self {
        iter.fold(SymPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

/// Polynomial in explicit variables `x_1..x_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct XPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl XPoly {
    pub fn zero(n: usize) -> Self {
        XPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: BigInt) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    /// The variable `x_k`, 1-based.
    pub fn var(n: usize, k: usize) -> Self {
        assert!((1..=n).contains(&k), "variable index out of range");
        let mut e = vec![0; n];
        e[k - 1] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, BigInt::one());
        p
    }

    /// `e_i(x_1..x_n)` as a sum over `i`-subsets; zero when `i > n`.
    pub fn elementary(i: usize, n: usize) -> Self {
        let mut p = Self::zero(n);
        let mut exps = vec![0u32; n];
        subsets(0, i, &mut exps, &mut p);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        assert_eq!(exps.len(), self.n, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Substitutes `x_k -> x_k^2`.
    pub fn square_variables(&self) -> XPoly {
        XPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| 2 * x).collect(), c.clone()))
                .collect(),
        }
    }

    /// Sets the last variable to zero and drops it.
    pub fn drop_last_variable(&self) -> XPoly {
        assert!(self.n > 0);
        XPoly {
            n: self.n - 1,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[self.n - 1] == 0)
                .map(|(e, c)| (e[..self.n - 1].to_vec(), c.clone()))
                .collect(),
        }
    }

    /// Exchanges the variables `x_a` and `x_b` (0-based).
    pub fn swap_variables(&self, a: usize, b: usize) -> XPoly {
        XPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.swap(a, b);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> XPoly {
        let mut out = XPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }
}

fn subsets(start: usize, left: usize, exps: &mut Vec<u32>, out: &mut XPoly) {
    if left == 0 {
        out.add_term(exps.clone(), BigInt::one());
        return;
    }
    for k in start..exps.len() {
        if exps.len() - k < left {
            break;
        }
        exps[k] = 1;
        subsets(k + 1, left - 1, exps, out);
        exps[k] = 0;
    }
}

impl AddAssign<&XPoly> for XPoly {
    fn add_assign(&mut self, rhs: &XPoly) {
        assert_eq!(self.n, rhs.n, "alphabet size mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl Add<&XPoly> for &XPoly {
    type Output = XPoly;

    fn add(self, rhs: &XPoly) -> XPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&XPoly> for &XPoly {
    type Output = XPoly;

    fn sub(self, rhs: &XPoly) -> XPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul<&XPoly> for &XPoly {
    type Output = XPoly;

    fn mul(self, rhs: &XPoly) -> XPoly {
        assert_eq!(self.n, rhs.n, "alphabet size mismatch");
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        XPoly {
            n: self.n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = |e: &Vec<u32>| {
            e.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(k, &x)| {
                    if x == 1 {
                        format!("x{}", k + 1)
                    } else {
                        format!("x{}^{x}", k + 1)
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        write_combination(f, self.terms.iter().rev().map(|(e, c)| (c, body(e))))
    }
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XPoly[n={}]({self})", self.n)
    }
}

/// Truncated total Chern class `1 + c_1 + c_2 + ...` of a (virtual) bundle,
/// each entry written in the generators `c_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernSeries {
    entries: Vec<SymPoly>,
}

impl ChernSeries {
    /// Entry `0` must be `1` and entry `k` homogeneous of degree `k`.
    pub fn new(entries: Vec<SymPoly>) -> Result<Self> {
        if entries.first() != Some(&SymPoly::one()) {
            return Err(Error::invalid("Chern series must start with 1"));
        }
        for (k, e) in entries.iter().enumerate() {
            if !e.is_zero() && (!e.is_homogeneous() || e.degree() != Some(k)) {
                return Err(Error::invalid(format!("entry {k} is not homogeneous of degree {k}")));
            }
        }
        Ok(ChernSeries { entries })
    }

    /// The bundle itself: `s[i] = c_i`.
    pub fn identity(degree_bound: usize) -> Self {
        ChernSeries {
            entries: (0..=degree_bound).map(SymPoly::gen).collect(),
        }
    }

    /// `c(E - E*) = c(E) / c(E*)` where `c(E*) = 1 - c_1 + c_2 - ...`.
    pub fn chern_difference(degree_bound: usize) -> Self {
        let dual = |i: usize| {
            let g = SymPoly::gen(i);
            if i % 2 == 1 {
                -g
            } else {
                g
            }
        };
        // inv = c(E*)^{-1}, from inv_k = -sum_{i=1..k} c_i(E*) inv_{k-i}
        let mut inv: Vec<SymPoly> = vec![SymPoly::one()];
        for k in 1..=degree_bound {
            let mut acc = SymPoly::zero();
            for i in 1..=k {
                acc -= &(&dual(i) * &inv[k - i]);
            }
            inv.push(acc);
        }
        let entries = (0..=degree_bound)
            .map(|k| (0..=k).map(|i| &SymPoly::gen(i) * &inv[k - i]).sum())
            .collect();
        ChernSeries { entries }
    }

    pub fn degree_bound(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, k: usize) -> &SymPoly {
        &self.entries[k]
    }

    pub fn entries(&self) -> &[SymPoly] {
        &self.entries
    }
}
