//! Cohomology of the Lagrangian Grassmannian `LG(n)` in the Schubert basis.
//!
//! Polynomials in `c_1..c_n` (Chern classes of the dual tautological bundle)
//! are brought to normal form through the free-module expansion over
//! `Sym(X_n^2)`: the relations `Q~_{i,i}` generate exactly the part with a
//! nonempty square factor, so dropping it leaves the class in the basis
//! `Omega_I = Q~_I(R*)`, `I` strict with parts at most `n`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::basisconv::module_expand_with;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::partitions::{enumerate_partitions, strict_subsets, StrictPartition};
use crate::qtilde::qtilde;
use crate::symfunc::{write_combination, SymPoly};

/// `H*(LG(n))`, where `LG(n)` parametrizes Lagrangian subspaces of a
/// `2n`-dimensional symplectic space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LGRing {
    n: usize,
}

impl LGRing {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("LG(n) needs n >= 1"));
        }
        Ok(LGRing { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Index of the point class, `(n, n-1, ..., 1)`.
    pub fn top(&self) -> StrictPartition {
        StrictPartition::staircase(self.n)
    }

    fn check(&self, i: &StrictPartition) -> Result<()> {
        if i.first() > self.n {
            return Err(Error::invalid(format!(
                "partition {i} has a part exceeding n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Ranks of `H^{2d}` for `d = 0..=dim`.
    pub fn betti(&self) -> Vec<usize> {
        (0..=self.dim())
            .map(|d| enumerate_partitions(d, Some(self.n), true).len())
            .collect()
    }

    pub fn basis(&self) -> Vec<StrictPartition> {
        strict_subsets(self.n)
    }
}

impl fmt::Display for LGRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LG({})", self.n)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SchubertClass {
    ring: LGRing,
    coeffs: BTreeMap<StrictPartition, BigInt>,
}

impl SchubertClass {
    pub fn zero(ring: LGRing) -> Self {
        SchubertClass {
            ring,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(ring: LGRing) -> Self {
        Self::schubert(ring, StrictPartition::empty()).expect("empty partition fits every ring")
    }

    /// The Schubert class `Omega_I`.
    pub fn schubert(ring: LGRing, i: StrictPartition) -> Result<Self> {
        Self::from_terms(ring, [(i, BigInt::one())])
    }

    pub fn from_terms<I>(ring: LGRing, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (StrictPartition, BigInt)>,
    {
        let mut out = Self::zero(ring);
        for (i, c) in terms {
            ring.check(&i)?;
            out.add_term(i, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, i: StrictPartition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(i.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn ring(&self) -> LGRing {
        self.ring
    }

    pub fn coeff(&self, i: &StrictPartition) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&StrictPartition, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &SchubertClass) -> Result<SchubertClass> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> SchubertClass {
        let mut out = Self::zero(self.ring);
        for (i, c) in &self.coeffs {
            out.add_term(i.clone(), c * k);
        }
        out
    }

    /// Representative `sum coeff[I] Q~_I` in `Z[c_1..c_n]`.
    pub fn lift(&self) -> SymPoly {
        let mut out = SymPoly::zero();
        for (i, c) in &self.coeffs {
            out += &qtilde(i.as_partition()).scale(c);
        }
        out.truncate(self.ring.n)
    }

    fn same_ring(&self, other: &SchubertClass) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::invalid(format!(
                "classes live in {} and {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &SchubertClass) -> Result<SchubertClass> {
        self.same_ring(other)?;
        reduce(&(&self.lift() * &other.lift()), self.ring)
    }

    pub fn pow(&self, e: u32) -> Result<SchubertClass> {
        let mut acc = Self::unit(self.ring);
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Degree of the class: coefficient of the point class.
    pub fn integrate(&self) -> BigInt {
        self.coeff(&self.ring.top())
    }
}

impl fmt::Display for SchubertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(
            f,
            self.coeffs.iter().map(|(i, c)| {
                let parts = i.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>();
                (c, format!("S[{}]", parts.join(",")))
            }),
        )
    }
}

impl fmt::Debug for SchubertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {self}", self.ring)
    }
}

/// Image of `p` in `Z[c_1..c_n] / (Q~_{i,i})` in the Schubert basis.
/// Generators `c_i` with `i > n` are set to zero first.
pub fn reduce(p: &SymPoly, ring: LGRing) -> Result<SchubertClass> {
    reduce_with(p, ring, Exec::default())
}

pub fn reduce_with(p: &SymPoly, ring: LGRing, exec: Exec) -> Result<SchubertClass> {
    let expansion = module_expand_with(p, ring.n, exec)?;
    SchubertClass::from_terms(ring, expansion.free_part())
}

pub fn multiply(a: &SchubertClass, b: &SchubertClass) -> Result<SchubertClass> {
    a.multiply(b)
}

pub fn integrate(a: &SchubertClass) -> BigInt {
    a.integrate()
}

/// `integral of Omega_I * Omega_J` over `LG(n)`.
pub fn pair(i: &StrictPartition, j: &StrictPartition, ring: LGRing) -> Result<BigInt> {
    let a = SchubertClass::schubert(ring, i.clone())?;
    let b = SchubertClass::schubert(ring, j.clone())?;
    Ok(a.multiply(&b)?.integrate())
}

pub fn betti(ring: LGRing) -> Vec<usize> {
    ring.betti()
}

/// All pairings `(I, J, value)` between basis classes of complementary
/// codimension.
pub fn pairing_table(ring: LGRing, exec: Exec) -> Result<Vec<(StrictPartition, StrictPartition, BigInt)>> {
    let basis = ring.basis();
    let pairs: Vec<(StrictPartition, StrictPartition)> = basis
        .iter()
        .flat_map(|i| {
            basis
                .iter()
                .filter(move |j| i.weight() + j.weight() == ring.dim())
                .map(move |j| (i.clone(), j.clone()))
        })
        .collect();
    exec.try_map(&pairs, |(i, j)| Ok((i.clone(), j.clone(), pair(i, j, ring)?)))
}
