//! Thom polynomials of Lagrange and Legendre singularities up to
//! codimension 6, written in the Q-tilde basis, together with the structural
//! checks they must satisfy.
//!
//! A Legendre expansion is a combination `sum a_{I,j} Q~_I t^j` with `I`
//! strict. Its `t^0` part is the Thom polynomial of the corresponding
//! Lagrange singularity.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::basisconv::{q_symbol, QExpansion};
use crate::error::Result;
use crate::partitions::{Partition, StrictPartition};
use crate::schubert::{reduce, LGRing, SchubertClass};
use crate::symfunc::{write_combination, SymPoly};

/// Coefficients of `Q~_I t^j`, keyed by `(I, j)`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TExpansion {
    // keyed (j, I) so iteration runs by t-power first
    coeffs: BTreeMap<(usize, Partition), BigInt>,
}

impl TExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((Partition, usize), BigInt)>>(terms: I) -> Self {
        let mut e = Self::new();
        for ((i, j), c) in terms {
            e.add_term(i, j, c);
        }
        e
    }

    pub fn add_term(&mut self, i: Partition, t_power: usize, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (t_power, i);
        let slot = self.coeffs.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Overwrites a coefficient; zero removes the key.
    pub fn set(&mut self, i: Partition, t_power: usize, c: BigInt) {
        if c.is_zero() {
            self.coeffs.remove(&(t_power, i));
        } else {
            self.coeffs.insert((t_power, i), c);
        }
    }

    pub fn coeff(&self, i: &Partition, t_power: usize) -> BigInt {
        self.coeffs
            .get(&(t_power, i.clone()))
            .cloned()
            .unwrap_or_default()
    }

    /// Terms as `(I, j, coefficient)`, ordered by `j` then `I`.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, usize, &BigInt)> {
        self.coeffs.iter().map(|((j, i), c)| (i, *j, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_t_power(&self) -> Option<usize> {
        self.coeffs.keys().map(|(j, _)| *j).max()
    }

    /// The coefficient of `t^j` as a Q-tilde expansion.
    pub fn t_part(&self, j: usize) -> QExpansion {
        QExpansion::from_terms(
            self.coeffs
                .iter()
                .filter(|((k, _), _)| *k == j)
                .map(|((_, i), c)| (i.clone(), c.clone())),
        )
    }

    pub fn from_t_parts<I: IntoIterator<Item = (usize, QExpansion)>>(parts: I) -> Self {
        let mut out = Self::new();
        for (j, e) in parts {
            for (i, c) in e.terms() {
                out.add_term(i.clone(), j, c.clone());
            }
        }
        out
    }
}

pub(crate) fn t_power_symbol(j: usize) -> Option<String> {
    match j {
        0 => None,
        1 => Some("t".to_string()),
        _ => Some(format!("t^{j}")),
    }
}

impl fmt::Display for TExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(
            f,
            self.coeffs.iter().map(|((j, i), c)| {
                let body = match t_power_symbol(*j) {
                    None => q_symbol(i),
                    Some(t) => format!("{t}*{}", q_symbol(i)),
                };
                (c, body)
            }),
        )
    }
}

impl fmt::Debug for TExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TExpansion({self})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThomRecord {
    /// ASCII label such as `"A_3"` or `"P_8"`.
    pub name: String,
    pub codim: usize,
    pub legendre: TExpansion,
    pub lagrange: QExpansion,
}

impl ThomRecord {
    /// A record whose Lagrange part is the `t^0` restriction of `legendre`.
    pub fn from_legendre(name: impl Into<String>, codim: usize, legendre: TExpansion) -> Self {
        let lagrange = legendre.t_part(0);
        ThomRecord {
            name: name.into(),
            codim,
            legendre,
            lagrange,
        }
    }
}

/// `(parts, t power, coefficient, part of the Lagrange polynomial)`
type Line = (&'static [usize], usize, i64, bool);

// One entry per singularity, in the order of the published table. Terms
// flagged `true` are the Lagrange (bold) terms.
const TABLE: &[(&str, usize, &[Line])] = &[
    // A_2: Q1
    ("A_2", 1, &[(&[1], 0, 1, true)]),
    // A_3: 3Q2 + t Q1
    ("A_3", 2, &[(&[2], 0, 3, true), (&[1], 1, 1, false)]),
    // A_4: 3Q21 + 12Q3 + t 10Q2 + t^2 2Q1
    (
        "A_4",
        3,
        &[
            (&[2, 1], 0, 3, true),
            (&[3], 0, 12, true),
            (&[2], 1, 10, false),
            (&[1], 2, 2, false),
        ],
    ),
    // D_4: Q21
    ("D_4", 3, &[(&[2, 1], 0, 1, true)]),
    // A_5: 27Q31 + 60Q4 + t(22Q21 + 86Q3) + t^2 40Q2 + t^3 6Q1
    (
        "A_5",
        4,
        &[
            (&[3, 1], 0, 27, true),
            (&[4], 0, 60, true),
            (&[2, 1], 1, 22, false),
            (&[3], 1, 86, false),
            (&[2], 2, 40, false),
            (&[1], 3, 6, false),
        ],
    ),
    // D_5: 6Q31 + t 4Q21
    ("D_5", 4, &[(&[3, 1], 0, 6, true), (&[2, 1], 1, 4, false)]),
    // A_6: 87Q32 + 228Q41 + 360Q5 + t(343Q31 + 756Q4) + t^2(151Q21 + 584Q3)
    //      + t^3 196Q2 + t^4 24Q1
    (
        "A_6",
        5,
        &[
            (&[3, 2], 0, 87, true),
            (&[4, 1], 0, 228, true),
            (&[5], 0, 360, true),
            (&[3, 1], 1, 343, false),
            (&[4], 1, 756, false),
            (&[2, 1], 2, 151, false),
            (&[3], 2, 584, false),
            (&[2], 3, 196, false),
            (&[1], 4, 24, false),
        ],
    ),
    // D_6: 12Q32 + 24Q41 + t 32Q31 + t^2 12Q21
    (
        "D_6",
        5,
        &[
            (&[3, 2], 0, 12, true),
            (&[4, 1], 0, 24, true),
            (&[3, 1], 1, 32, false),
            (&[2, 1], 2, 12, false),
        ],
    ),
    // E_6: 9Q32 + 6Q41 + t 9Q31 + t^2 3Q21
    (
        "E_6",
        5,
        &[
            (&[3, 2], 0, 9, true),
            (&[4, 1], 0, 6, true),
            (&[3, 1], 1, 9, false),
            (&[2, 1], 2, 3, false),
        ],
    ),
    // A_7: 135Q321 + 1275Q42 + 2004Q51 + 2520Q6 + t(7092Q5 + 4439Q41 + 1713Q32)
    //      + t^2(3545Q31 + 7868Q4) + t^3(1106Q21 + 4292Q3) + t^4 1148Q2 + t^5 120Q1
    (
        "A_7",
        6,
        &[
            (&[3, 2, 1], 0, 135, true),
            (&[4, 2], 0, 1275, true),
            (&[5, 1], 0, 2004, true),
            (&[6], 0, 2520, true),
            (&[5], 1, 7092, false),
            (&[4, 1], 1, 4439, false),
            (&[3, 2], 1, 1713, false),
            (&[3, 1], 2, 3545, false),
            (&[4], 2, 7868, false),
            (&[2, 1], 3, 1106, false),
            (&[3], 3, 4292, false),
            (&[2], 4, 1148, false),
            (&[1], 5, 120, false),
        ],
    ),
    // D_7: 24Q321 + 120Q42 + 144Q51 + t(152Q32 + 288Q41) + t^2 208Q31 + t^3 56Q21
    (
        "D_7",
        6,
        &[
            (&[3, 2, 1], 0, 24, true),
            (&[4, 2], 0, 120, true),
            (&[5, 1], 0, 144, true),
            (&[3, 2], 1, 152, false),
            (&[4, 1], 1, 288, false),
            (&[3, 1], 2, 208, false),
            (&[2, 1], 3, 56, false),
        ],
    ),
    // E_7: 9Q321 + 60Q42 + 24Q51 + t(56Q41 + 66Q32) + t^2 42Q31 + t^3 10Q21
    (
        "E_7",
        6,
        &[
            (&[3, 2, 1], 0, 9, true),
            (&[4, 2], 0, 60, true),
            (&[5, 1], 0, 24, true),
            (&[4, 1], 1, 56, false),
            (&[3, 2], 1, 66, false),
            (&[3, 1], 2, 42, false),
            (&[2, 1], 3, 10, false),
        ],
    ),
    // P_8: Q321
    ("P_8", 6, &[(&[3, 2, 1], 0, 1, true)]),
];

/// The 13 tabulated singularities, in table order.
pub fn builtin_records() -> Vec<ThomRecord> {
    TABLE
        .iter()
        .map(|(name, codim, lines)| {
            let part = |parts: &[usize]| Partition::new(parts.to_vec()).expect("table partitions are valid");
            let legendre = TExpansion::from_terms(
                lines
                    .iter()
                    .map(|(parts, j, c, _)| ((part(parts), *j), BigInt::from(*c))),
            );
            let lagrange = QExpansion::from_terms(
                lines
                    .iter()
                    .filter(|line| line.3)
                    .map(|(parts, _, c, _)| (part(parts), BigInt::from(*c))),
            );
            ThomRecord {
                name: name.to_string(),
                codim: *codim,
                legendre,
                lagrange,
            }
        })
        .collect()
}

pub fn find_record(name: &str) -> Option<ThomRecord> {
    builtin_records().into_iter().find(|r| r.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    /// Every coefficient is nonnegative.
    Positivity,
    /// `|I| + j = codim` for every key.
    Homogeneity,
    /// The Lagrange part equals the `t^0` part of the Legendre expansion.
    LagrangeRestriction,
    /// All index partitions are strict.
    Strictness,
}

impl Check {
    pub const ALL: [Check; 4] = [
        Check::Positivity,
        Check::Homogeneity,
        Check::LagrangeRestriction,
        Check::Strictness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Positivity => "positivity",
            Check::Homogeneity => "homogeneity",
            Check::LagrangeRestriction => "lagrange-restriction",
            Check::Strictness => "strictness",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
    /// Offending keys rendered as `(I, j)`.
    pub violators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub name: String,
    pub codim: usize,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, check: Check) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "{} (codim {}): {}", self.name, self.codim, status(self.passed()))?;
        for c in &self.checks {
            write!(f, "  {}: {}", c.check.name(), status(c.passed))?;
            if !c.violators.is_empty() {
                write!(f, " [{}]", c.violators.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn key_label(i: &Partition, j: usize) -> String {
    format!("({}, {j})", q_symbol(i))
}

fn result(check: Check, violators: Vec<String>) -> CheckResult {
    CheckResult {
        check,
        passed: violators.is_empty(),
        violators,
    }
}

pub fn verify_record(r: &ThomRecord) -> VerificationReport {
    let lagrange_keys = r.lagrange.terms().map(|(i, c)| (i, 0, c));
    let all_keys: Vec<(&Partition, usize, &BigInt)> = r.legendre.terms().chain(lagrange_keys).collect();

    let mut negative: Vec<String> = all_keys
        .iter()
        .filter(|(_, _, c)| c.is_negative())
        .map(|(i, j, _)| key_label(i, *j))
        .collect();
    negative.sort();
    negative.dedup();

    let mut off_degree: Vec<String> = all_keys
        .iter()
        .filter(|(i, j, _)| i.weight() + j != r.codim)
        .map(|(i, j, _)| key_label(i, *j))
        .collect();
    off_degree.sort();
    off_degree.dedup();

    let restricted = r.legendre.t_part(0);
    let mut mismatched: Vec<String> = restricted
        .terms()
        .chain(r.lagrange.terms())
        .filter(|(i, _)| restricted.coeff(i) != r.lagrange.coeff(i))
        .map(|(i, _)| key_label(i, 0))
        .collect();
    mismatched.sort();
    mismatched.dedup();

    let mut non_strict: Vec<String> = all_keys
        .iter()
        .filter(|(i, _, _)| !i.is_strict())
        .map(|(i, j, _)| key_label(i, *j))
        .collect();
    non_strict.sort();
    non_strict.dedup();

    VerificationReport {
        name: r.name.clone(),
        codim: r.codim,
        checks: vec![
            result(Check::Positivity, negative),
            result(Check::Homogeneity, off_degree),
            result(Check::LagrangeRestriction, mismatched),
            result(Check::Strictness, non_strict),
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub nonnegative: bool,
    pub violators: Vec<Partition>,
}

pub fn positivity_check(e: &QExpansion) -> PositivityReport {
    let violators: Vec<Partition> = e
        .terms()
        .filter(|(_, c)| c.is_negative())
        .map(|(i, _)| i.clone())
        .collect();
    PositivityReport {
        nonnegative: violators.is_empty(),
        violators,
    }
}

/// The expansion as a polynomial in the Chern classes `c_i`.
pub fn to_chern(e: &QExpansion) -> SymPoly {
    e.to_sympoly()
}

/// The class `sum a_I Q~_I(R*)` in `H*(LG(n))`. Strict keys with parts at
/// most `n` map to Schubert classes, keys with larger parts vanish, and
/// non-strict keys are reduced.
pub fn specialize(e: &QExpansion, n: usize) -> Result<SchubertClass> {
    let ring = LGRing::new(n)?;
    let mut out = SchubertClass::zero(ring);
    for (i, c) in e.terms() {
        if i.first() > n {
            continue;
        }
        let class = match StrictPartition::try_from(i.clone()) {
            Ok(s) => SchubertClass::schubert(ring, s)?,
            Err(_) => reduce(&crate::qtilde::qtilde(i), ring)?,
        };
        out = out.add(&class.scale(c))?;
    }
    Ok(out)
}
