//! Change of basis from e-monomials to the Q-tilde basis and to the basis of
//! `Sym(X_n)` as a free `Sym(X_n^2)`-module.
//!
//! Every graded component is solved on its own. The transition matrix of a
//! component is assembled from the Q-tilde functions in e-monomial
//! coordinates and inverted by fraction-free elimination; a determinant other
//! than `±1` is reported as an invariant violation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, IntMatrix};
use crate::partitions::{enumerate_partitions, Partition, StrictPartition};
use crate::qtilde::{qtilde, qtilde_pair};
use crate::symfunc::{write_combination, SymPoly};

/// Coefficients of a class in the Q-tilde basis.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QExpansion {
    coeffs: BTreeMap<Partition, BigInt>,
}

impl QExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, BigInt)>>(terms: I) -> Self {
        let mut e = Self::new();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    pub fn single(i: Partition) -> Self {
        Self::from_terms([(i, BigInt::from(1))])
    }

    pub fn add_term(&mut self, i: Partition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(i.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn coeff(&self, i: &Partition) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &QExpansion) -> QExpansion {
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(i.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> QExpansion {
        QExpansion::from_terms(self.coeffs.iter().map(|(i, c)| (i.clone(), c * k)))
    }

    /// `sum coeff[I] * Q~_I` in the generators `c_i`.
    pub fn to_sympoly(&self) -> SymPoly {
        let mut out = SymPoly::zero();
        for (i, c) in &self.coeffs {
            out += &qtilde(i).scale(c);
        }
        out
    }
}

pub(crate) fn q_symbol(i: &Partition) -> String {
    format!("Q[{}]", i.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.coeffs.iter().map(|(i, c)| (c, q_symbol(i))))
    }
}

impl fmt::Debug for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QExpansion({self})")
    }
}

/// Coefficients in the module basis `(prod_k Q~_{mu_k,mu_k}) * Q~_I`, keyed
/// by `(I, mu)` with `I` strict.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ModuleExpansion {
    coeffs: BTreeMap<(StrictPartition, Partition), BigInt>,
}

impl ModuleExpansion {
    pub fn coeff(&self, i: &StrictPartition, mu: &Partition) -> BigInt {
        self.coeffs
            .get(&(i.clone(), mu.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(StrictPartition, Partition), &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn from_terms<I: IntoIterator<Item = ((StrictPartition, Partition), BigInt)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            if !c.is_zero() {
                *coeffs.entry(k).or_insert_with(BigInt::zero) += c;
            }
        }
        coeffs.retain(|_, c: &mut BigInt| !c.is_zero());
        ModuleExpansion { coeffs }
    }

    /// The part with `mu = ()`.
    pub fn free_part(&self) -> BTreeMap<StrictPartition, BigInt> {
        self.coeffs
            .iter()
            .filter(|((_, mu), _)| mu.is_empty())
            .map(|((i, _), c)| (i.clone(), c.clone()))
            .collect()
    }

    /// Reassembles the element in `Sym(X_n)`.
    pub fn to_sympoly(&self, n: usize) -> SymPoly {
        let mut out = SymPoly::zero();
        for ((i, mu), c) in &self.coeffs {
            out += &module_basis_element(i, mu, n).scale(c);
        }
        out
    }
}

impl fmt::Display for ModuleExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = |i: &StrictPartition, mu: &Partition| {
            if mu.is_empty() {
                q_symbol(i.as_partition())
            } else {
                let sq = mu.parts().iter().map(|m| format!("Q[{m},{m}]")).collect::<Vec<_>>();
                format!("{}*{}", sq.join("*"), q_symbol(i.as_partition()))
            }
        };
        write_combination(f, self.coeffs.iter().map(|((i, mu), c)| (c, body(i, mu))))
    }
}

impl fmt::Debug for ModuleExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleExpansion({self})")
    }
}

/// `(prod_k Q~_{mu_k,mu_k}) * Q~_I` with `c_i = 0` for `i > n`.
pub fn module_basis_element(i: &StrictPartition, mu: &Partition, n: usize) -> SymPoly {
    let mut p = qtilde(i.as_partition()).truncate(n);
    for &m in mu.parts() {
        p = (&p * &qtilde_pair(m, m).expect("equal indices")).truncate(n);
    }
    p
}

/// Transition data for one graded component: the basis elements written in
/// e-monomial coordinates and the exact inverse of that matrix.
#[derive(Debug)]
pub struct Transition<K> {
    pub degree: usize,
    /// Largest generator index allowed in coordinates and basis labels.
    pub bound: usize,
    pub basis: Vec<K>,
    pub coords: Vec<Partition>,
    coord_index: HashMap<Partition, usize>,
    /// `matrix[row][col]`: coordinate `row` of basis element `col`.
    pub matrix: IntMatrix,
    inverse: IntMatrix,
}

impl<K: Clone> Transition<K> {
    fn build(degree: usize, bound: usize, basis: Vec<K>, columns: Vec<SymPoly>) -> Result<Self> {
        let coords = enumerate_partitions(degree, Some(bound.max(1)), false);
        if coords.len() != basis.len() {
            return Err(Error::invariant(format!(
                "degree {degree}: {} basis elements for {} coordinates",
                basis.len(),
                coords.len()
            )));
        }
        let coord_index: HashMap<Partition, usize> =
            coords.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let mut matrix = vec![vec![BigInt::zero(); basis.len()]; coords.len()];
        for (col, poly) in columns.iter().enumerate() {
            for (m, c) in poly.terms() {
                let row = *coord_index.get(m).ok_or_else(|| {
                    Error::invariant(format!("basis element has stray monomial {m:?}"))
                })?;
                matrix[row][col] = c.clone();
            }
        }
        let inverse = linalg::unimodular_inverse(&matrix)?;
        Ok(Transition {
            degree,
            bound,
            basis,
            coords,
            coord_index,
            matrix,
            inverse,
        })
    }

    pub fn determinant(&self) -> Result<BigInt> {
        linalg::determinant(&self.matrix)
    }

    /// Basis coefficients of a homogeneous polynomial of this degree.
    fn solve(&self, p: &SymPoly) -> Result<Vec<(K, BigInt)>> {
        let mut rhs = vec![BigInt::zero(); self.coords.len()];
        for (m, c) in p.terms() {
            let row = *self.coord_index.get(m).ok_or_else(|| {
                Error::invalid(format!(
                    "monomial {m:?} is not representable with generators up to c{}",
                    self.bound
                ))
            })?;
            rhs[row] = c.clone();
        }
        let x = linalg::mat_vec(&self.inverse, &rhs);
        Ok(self
            .basis
            .iter()
            .cloned()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }
}

type QKey = (usize, usize);
type ModKey = (StrictPartition, Partition);

static Q_TRANSITIONS: LazyLock<RwLock<HashMap<QKey, Arc<Transition<Partition>>>>> =
    LazyLock::new(Default::default);
static MODULE_TRANSITIONS: LazyLock<RwLock<HashMap<QKey, Arc<Transition<ModKey>>>>> =
    LazyLock::new(Default::default);

/// Transition for degree `d` of the Q-tilde basis with parts at most
/// `max_part` (`None`: unbounded, which stabilizes at bound `d`).
pub fn qtilde_transition(d: usize, max_part: Option<usize>, exec: Exec) -> Result<Arc<Transition<Partition>>> {
    let bound = max_part.unwrap_or(d).min(d);
    let key = (d, bound);
    if let Some(t) = Q_TRANSITIONS.read().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(build_qtilde_transition(d, bound, exec)?);
    Q_TRANSITIONS.write().unwrap().insert(key, t.clone());
    Ok(t)
}

/// Builds the transition without consulting or filling the cache.
pub fn build_qtilde_transition(d: usize, bound: usize, exec: Exec) -> Result<Transition<Partition>> {
    let basis = enumerate_partitions(d, Some(bound.max(1)), false);
    let columns = exec.map(&basis, |i| qtilde(i).truncate(bound));
    Transition::build(d, bound, basis, columns)
}

/// Transition for degree `d` of the module basis over `Sym(X_n^2)`.
pub fn module_transition(d: usize, n: usize, exec: Exec) -> Result<Arc<Transition<ModKey>>> {
    if n == 0 {
        return Err(Error::invalid("alphabet size must be positive"));
    }
    let key = (d, n);
    if let Some(t) = MODULE_TRANSITIONS.read().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(build_module_transition(d, n, exec)?);
    MODULE_TRANSITIONS.write().unwrap().insert(key, t.clone());
    Ok(t)
}

pub fn build_module_transition(d: usize, n: usize, exec: Exec) -> Result<Transition<ModKey>> {
    let mut basis = Vec::new();
    for m in 0..=d / 2 {
        for mu in enumerate_partitions(m, Some(n), false) {
            for i in enumerate_partitions(d - 2 * m, Some(n), true) {
                basis.push((StrictPartition::try_from(i)?, mu.clone()));
            }
        }
    }
    let columns = exec.map(&basis, |(i, mu)| module_basis_element(i, mu, n));
    Transition::build(d, n, basis, columns)
}

/// Expands `p` in the Q-tilde basis. With `max_part = Some(n)` the expansion
/// is taken in `Sym(X_n)`: `p` may only involve `c_1..c_n`, and the identity
/// `p = sum coeff[I] Q~_I` holds after setting `c_i = 0` for `i > n`.
pub fn expand_in_qtilde(p: &SymPoly, max_part: Option<usize>) -> Result<QExpansion> {
    expand_in_qtilde_with(p, max_part, Exec::default())
}

pub fn expand_in_qtilde_with(p: &SymPoly, max_part: Option<usize>, exec: Exec) -> Result<QExpansion> {
    if let Some(n) = max_part {
        if n == 0 {
            return Err(Error::invalid("max part must be positive"));
        }
        if p.max_generator() > n {
            return Err(Error::invalid(format!(
                "{p} involves c{} but the alphabet has {n} variables",
                p.max_generator()
            )));
        }
    }
    let components: Vec<(usize, SymPoly)> = p.components().into_iter().collect();
    let solved = exec.try_map(&components, |(d, comp)| {
        qtilde_transition(*d, max_part, exec)?.solve(comp)
    })?;
    Ok(QExpansion::from_terms(solved.into_iter().flatten()))
}

/// Expands `p`, read in `Sym(X_n)` (generators above `c_n` set to zero), in
/// the free-module basis over `Sym(X_n^2)`.
pub fn module_expand(p: &SymPoly, n: usize) -> Result<ModuleExpansion> {
    module_expand_with(p, n, Exec::default())
}

pub fn module_expand_with(p: &SymPoly, n: usize, exec: Exec) -> Result<ModuleExpansion> {
    if n == 0 {
        return Err(Error::invalid("alphabet size must be positive"));
    }
    let components: Vec<(usize, SymPoly)> = p.truncate(n).components().into_iter().collect();
    let solved = exec.try_map(&components, |(d, comp)| module_transition(*d, n, exec)?.solve(comp))?;
    Ok(ModuleExpansion::from_terms(solved.into_iter().flatten()))
}

/// Expands a batch of polynomials.
pub fn expand_many(polys: &[SymPoly], max_part: Option<usize>, exec: Exec) -> Result<Vec<QExpansion>> {
    exec.try_map(polys, |p| expand_in_qtilde_with(p, max_part, Exec::Sequential))
}
