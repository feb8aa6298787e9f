//! Integer partitions used as index sets for Q-tilde functions, e-monomials
//! and Schubert classes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Trailing zeros are stripped on construction, so every partition has one
/// canonical representation. The ordering is graded: first by weight, then
/// lexicographically on the parts. This is the order used for rendering
/// polynomials and expansions.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts. Zero parts are only
    /// allowed at the end and are dropped.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into a partition. Zeros are dropped.
    pub fn from_multiset(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Single-part partition `(i)`; the empty partition when `i == 0`.
    pub fn row(i: usize) -> Self {
        if i == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![i] }
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, zero for the empty partition.
    pub fn first(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// Union of the two part multisets.
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        parts.extend_from_slice(&self.parts);
        parts.extend_from_slice(&other.parts);
        Self::from_multiset(parts)
    }

    pub fn into_strict(self) -> Result<StrictPartition> {
        StrictPartition::try_from(self)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "[]");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Parses `"3,2,1"`. The empty partition is `"[]"` or the empty string; an
/// optional pair of surrounding brackets is accepted.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(s)
            .trim();
        if inner.is_empty() {
            return Ok(Self::empty());
        }
        let parts = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad partition part {:?} in {s:?}", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

/// A partition with pairwise distinct parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StrictPartition(Partition);

impl StrictPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)?.try_into()
    }

    pub fn empty() -> Self {
        StrictPartition(Partition::empty())
    }

    /// The staircase `(n, n-1, ..., 1)`.
    pub fn staircase(n: usize) -> Self {
        StrictPartition(Partition {
            parts: (1..=n).rev().collect(),
        })
    }

    pub fn as_partition(&self) -> &Partition {
        &self.0
    }

    pub fn into_partition(self) -> Partition {
        self.0
    }

    pub fn parts(&self) -> &[usize] {
        self.0.parts()
    }

    pub fn weight(&self) -> usize {
        self.0.weight()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0.first()
    }

    /// The strict partition whose parts are `{1..n}` minus the parts of `self`.
    pub fn complement(&self, n: usize) -> Result<StrictPartition> {
        if self.first() > n {
            return Err(Error::invalid(format!(
                "partition {} has a part exceeding n = {n}",
                self.0
            )));
        }
        let parts = (1..=n).rev().filter(|p| !self.parts().contains(p)).collect();
        Ok(StrictPartition(Partition { parts }))
    }
}

impl TryFrom<Partition> for StrictPartition {
    type Error = Error;

    fn try_from(p: Partition) -> Result<Self> {
        if p.is_strict() {
            Ok(StrictPartition(p))
        } else {
            Err(Error::invalid(format!("partition {p} has repeated parts")))
        }
    }
}

impl From<StrictPartition> for Partition {
    fn from(p: StrictPartition) -> Self {
        p.0
    }
}

impl FromStr for StrictPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Partition>()?.try_into()
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

pub fn is_strict(p: &Partition) -> bool {
    p.is_strict()
}

/// Complement of the part set of `parts` inside `{1..n}`. Accepts a raw
/// partition so that repeated parts are reported as invalid arguments.
pub fn complement(parts: &Partition, n: usize) -> Result<StrictPartition> {
    StrictPartition::try_from(parts.clone())?.complement(n)
}

/// All partitions of `d` with parts at most `max_part` (`None` for no bound),
/// optionally restricted to strict ones, in descending lexicographic order.
pub fn enumerate_partitions(d: usize, max_part: Option<usize>, strict_only: bool) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let bound = max_part.unwrap_or(d).min(d);
    fill(d, bound, strict_only, &mut current, &mut out);
    out
}

fn fill(rest: usize, bound: usize, strict: bool, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=bound.min(rest)).rev() {
        // Strict partitions need 1 + 2 + ... + p >= rest from the remaining parts.
        if strict && p * (p + 1) / 2 < rest {
            break;
        }
        current.push(p);
        let next = if strict { p - 1 } else { p };
        fill(rest - p, next, strict, current, out);
        current.pop();
    }
}

/// Strict partitions with parts at most `n`, all weights, graded order.
pub fn strict_subsets(n: usize) -> Vec<StrictPartition> {
    (0..=n * (n + 1) / 2)
        .flat_map(|d| enumerate_partitions(d, Some(n), true))
        .map(StrictPartition)
        .collect()
}
